"""Deterministic, splittable random streams.

Every stream is a Philox4x64 counter-based generator keyed by the pair
``(seed, stream_id)``.  Two streams with different keys never overlap, so
work can be split across workers by handing out disjoint stream ids; no
state is shared and nothing needs locking.

Stream ids for simulation work are packed from a purpose tag, a level and
a batch index with :func:`stream_id`.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ParameterError",
    "RngStream",
    "stream_id",
    "TAG_MLMC",
    "TAG_DIRECT",
    "TAG_DN",
    "TAG_TEST",
]

_MASK64 = (1 << 64) - 1
_TWO_M52 = 2.0**-52

TAG_MLMC = 1
TAG_DIRECT = 2
TAG_DN = 3
TAG_TEST = 4


class ParameterError(ValueError):
    """Raised for out-of-domain model, sampler or driver parameters."""


def stream_id(tag: int, level: int, index: int, offset: int = 0) -> int:
    """Pack ``(tag, level, index)`` into a 64-bit stream id.

    Layout: 8 bits tag, 8 bits level, 48 bits index.  ``offset`` is added
    to the index so that separate experiments can share a seed.
    """
    index = index + offset
    if not 0 <= tag < 256 or not 0 <= level < 256:
        raise ParameterError(f"tag/level out of range: {tag}, {level}")
    if not 0 <= index < (1 << 48):
        raise ParameterError(f"stream index out of range: {index}")
    return (tag << 56) | (level << 48) | index


class RngStream:
    """A single-owner random stream.

    Parameters
    ----------
    seed : int
        64-bit seed shared by an experiment.
    stream_id : int
        64-bit substream selector.

    Notes
    -----
    Identical ``(seed, stream_id)`` pairs reproduce bit-identical draws of
    every variate type, provided the same sequence of calls is made.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._bitgen = np.random.Philox(key=key)
        self._gen = np.random.Generator(self._bitgen)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id:#x})"

    # -- array draws ---------------------------------------------------------

    def uniform(self, size=None):
        """Uniforms strictly inside (0, 1).

        The top 52 bits of each raw word ``k`` map to ``(k + 0.5) * 2**-52``.
        Both ends are exactly representable (``2**-53`` and ``1 - 2**-53``);
        with 53 bits the top value would round up to 1.0.
        """
        raw = self._bitgen.random_raw(size)
        return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * _TWO_M52

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def exponential(self, size=None):
        """Exp(1) variates, strictly positive."""
        return -np.log(self.uniform(size))

    def gamma(self, shape: float, size=None):
        """Gamma(shape, scale=1) variates.

        NumPy's sampler switches to a rejection scheme for ``shape < 1``
        that stays exact for arbitrarily small shapes; very small shapes
        can legitimately underflow to 0.
        """
        if not shape > 0:
            raise ParameterError(f"gamma shape must be positive, got {shape}")
        return self._gen.standard_gamma(shape, size)

    def inverse_gaussian(self, mean: float, shape: float, size=None):
        """IG(mean, shape) variates by Michael, Schucany and Haas.

        The quadratic ``lam*(x - mu)**2 = mu**2 * x * y`` has roots with
        product ``mu**2``.  The large root is computed without cancellation
        and the small one recovered as ``mu**2 / big``, which keeps the
        sampler accurate when ``mean / shape`` is huge (fine NIG levels).
        """
        if not (mean > 0 and shape > 0):
            raise ParameterError(
                f"inverse Gaussian needs mean > 0 and shape > 0, got {mean}, {shape}"
            )
        mu, lam = float(mean), float(shape)
        y = self.normal(size) ** 2
        muy = mu * y
        big = mu + (mu / (2.0 * lam)) * (muy + np.sqrt(muy * (4.0 * lam + muy)))
        small = mu * mu / big
        u = self.uniform(size)
        return np.where(u * (mu + small) <= mu, small, big)

    # -- scalar conveniences -------------------------------------------------

    def next_uniform(self) -> float:
        return float(self.uniform())

    def next_normal(self) -> float:
        return float(self.normal())

    def next_gamma(self, shape: float) -> float:
        return float(self.gamma(shape))

    def next_inverse_gaussian(self, mean: float, shape: float) -> float:
        return float(self.inverse_gaussian(mean, shape))
