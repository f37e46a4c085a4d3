"""Discretely monitored, discounted payoffs on grid paths.

Every payoff takes log-price values ``x`` with time on the last axis
(``x[..., 0] == 0``) and returns the discounted payoff, so the same function
serves a single path or a batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .paths import PathGrid
from .rng import ParameterError

__all__ = [
    "OptionSpec",
    "PayoffPair",
    "asian_trapezoidal",
    "lookback_put",
    "barrier_up_out",
    "evaluate_pair",
    "evaluate_pairs",
    "reference_option",
]

KINDS = ("asian", "lookback", "barrier")


@dataclass(frozen=True)
class OptionSpec:
    kind: str
    S0: float = 100.0
    K: float = 100.0
    B: Optional[float] = None
    T: float = 1.0
    r: float = 0.05

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown option kind {self.kind!r}; expected one of {KINDS}")
        if not self.S0 > 0 or self.K < 0 or not self.T > 0:
            raise ParameterError("need S0 > 0, K >= 0 and T > 0")
        if self.kind == "barrier":
            if self.B is None or not (self.B > self.S0 and self.B > self.K):
                raise ParameterError("up-and-out barrier needs B > S0 and B > K")

    @property
    def discount(self) -> float:
        return math.exp(-self.r * self.T)


def reference_option(kind: str, r: float = 0.05) -> OptionSpec:
    """The three test options; the Asian strike is taken at the money."""
    if kind == "asian":
        return OptionSpec("asian", S0=100.0, K=100.0, T=1.0, r=r)
    if kind == "lookback":
        return OptionSpec("lookback", S0=100.0, K=110.0, T=1.0, r=r)
    if kind == "barrier":
        return OptionSpec("barrier", S0=100.0, K=100.0, B=115.0, T=1.0, r=r)
    raise ParameterError(f"unknown option kind {kind!r}")


@dataclass
class PayoffPair:
    fine: np.ndarray
    coarse: Optional[np.ndarray]

    @property
    def correction(self):
        """``P_l - P_{l-1}``, or ``P_0`` on level 0."""
        return self.fine if self.coarse is None else self.fine - self.coarse


def _asian_from_exp(e, spec: OptionSpec):
    n = e.shape[-1] - 1
    total = e.sum(axis=-1) - 0.5 * (e[..., 0] + e[..., -1])
    mean_s = spec.S0 * total / n
    return spec.discount * np.maximum(mean_s - spec.K, 0.0)


def _lookback_from_max(xmax, spec: OptionSpec):
    return spec.discount * np.maximum(spec.K - spec.S0 * np.exp(xmax), 0.0)


def _barrier_from_max(xmax, xT, spec: OptionSpec):
    alive = spec.S0 * np.exp(xmax) < spec.B
    return spec.discount * np.maximum(spec.S0 * np.exp(xT) - spec.K, 0.0) * alive


def asian_trapezoidal(x, spec: OptionSpec):
    """Arithmetic Asian call with the trapezoidal time average of ``S0*exp(X)``."""
    return _asian_from_exp(np.exp(np.asarray(x, dtype=float)), spec)


def lookback_put(x, spec: OptionSpec):
    """Floating lookback put ``(K - S0*max_j exp(X_j))^+``; the max includes ``X_0``."""
    return _lookback_from_max(np.max(x, axis=-1), spec)


def barrier_up_out(x, spec: OptionSpec):
    """Up-and-out call; a grid maximum at or above ``B`` knocks the option out."""
    x = np.asarray(x, dtype=float)
    return _barrier_from_max(np.max(x, axis=-1), x[..., -1], spec)


def evaluate_pairs(path: PathGrid, specs: Sequence[OptionSpec]) -> list:
    """Fine and coarse payoffs of several options on one (batch of) path(s).

    ``exp`` and the running maxima are computed once and shared.
    """
    fine_x, coarse_x = path.fine_x, path.coarse_x
    cache = {}

    def stat(name):
        if name not in cache:
            if name == "exp":
                cache[name] = np.exp(fine_x)
            elif name == "max_f":
                cache[name] = fine_x.max(axis=-1)
            elif name == "max_c":
                cache[name] = coarse_x.max(axis=-1)
        return cache[name]

    out = []
    for spec in specs:
        if spec.kind == "asian":
            e = stat("exp")
            fine = _asian_from_exp(e, spec)
            coarse = None if coarse_x is None else _asian_from_exp(e[..., :: path.grid.M], spec)
        elif spec.kind == "lookback":
            fine = _lookback_from_max(stat("max_f"), spec)
            coarse = None if coarse_x is None else _lookback_from_max(stat("max_c"), spec)
        else:
            xT = fine_x[..., -1]
            fine = _barrier_from_max(stat("max_f"), xT, spec)
            coarse = None if coarse_x is None else _barrier_from_max(stat("max_c"), xT, spec)
        out.append(PayoffPair(fine, coarse))
    return out


def evaluate_pair(path: PathGrid, spec: OptionSpec) -> PayoffPair:
    return evaluate_pairs(path, [spec])[0]
