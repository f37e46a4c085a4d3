"""Exponential Lévy model parameters, risk-neutral drifts and exact increments.

Three driving processes are supported:

* Variance Gamma, ``X = m t + theta G + sigma W(G)`` with a Gamma clock,
* Normal Inverse Gaussian, the same construction with an IG clock,
* spectrally negative alpha-stable (``1 < alpha < 2``) sampled with
  Chambers, Mallows and Stuck.

All increments are drawn exactly from the increment law, there is no time
discretisation error anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .rng import ParameterError, RngStream

__all__ = [
    "VgParams",
    "NigParams",
    "StableParams",
    "LevyModel",
    "mean_correcting_drift",
    "sample_vg_increment",
    "sample_nig_increment",
    "sample_stable_increment",
    "sample_increments",
    "char_function",
    "cms_standard_stable",
    "CALIBRATED_VG",
    "CALIBRATED_NIG",
    "CALIBRATED_STABLE",
]


@dataclass(frozen=True)
class VgParams:
    sigma: float
    theta: float
    kappa: float
    r: float = 0.05

    def __post_init__(self):
        if not (self.sigma > 0 and self.kappa > 0):
            raise ParameterError("VG needs sigma > 0 and kappa > 0")
        arg = 1.0 - self.theta * self.kappa - 0.5 * self.sigma**2 * self.kappa
        if not arg > 0:
            raise ParameterError(
                f"VG drift undefined: 1 - theta*kappa - sigma^2*kappa/2 = {arg} <= 0"
            )


@dataclass(frozen=True)
class NigParams:
    sigma: float
    theta: float
    kappa: float
    r: float = 0.05

    def __post_init__(self):
        if not (self.sigma > 0 and self.kappa > 0):
            raise ParameterError("NIG needs sigma > 0 and kappa > 0")
        arg = 1.0 - 2.0 * self.theta * self.kappa - self.kappa * self.sigma**2
        if not arg > 0:
            raise ParameterError(
                f"NIG drift undefined: 1 - 2*theta*kappa - kappa*sigma^2 = {arg} <= 0"
            )


@dataclass(frozen=True)
class StableParams:
    """Alpha-stable parameters in the ``(A, B)`` jump-coefficient form.

    ``a_plus`` weights positive jumps and ``b_minus`` negative ones.  The
    exponential moment, and hence a risk-neutral drift, only exists for
    ``a_plus == 0``.
    """

    alpha: float
    a_plus: float
    b_minus: float
    r: float = 0.05

    def __post_init__(self):
        if self.alpha == 1.0:
            raise ParameterError("alpha = 1 stable parameterisation is not supported")
        if not 1.0 < self.alpha < 2.0:
            raise ParameterError(f"alpha must lie in (1, 2), got {self.alpha}")
        if self.a_plus < 0 or self.b_minus < 0 or self.a_plus + self.b_minus <= 0:
            raise ParameterError("need A >= 0, B >= 0 and A + B > 0")

    @property
    def scale(self) -> float:
        return self.a_plus + self.b_minus

    @property
    def skew(self) -> float:
        return (self.a_plus - self.b_minus) / (self.a_plus + self.b_minus)


Params = Union[VgParams, NigParams, StableParams]


def mean_correcting_drift(params: Params) -> float:
    """Drift ``m`` (per year) making ``exp(X_t - r t)`` a martingale.

    The drift is ``r - log E[exp(X_1 - m)]`` evaluated in closed form.

    Raises
    ------
    ParameterError
        If the exponential moment does not exist (stable with ``A > 0``).
    """
    if isinstance(params, LevyModel):
        params = params.params
    if isinstance(params, VgParams):
        s, th, k = params.sigma, params.theta, params.kappa
        return params.r + math.log(1.0 - th * k - 0.5 * s * s * k) / k
    if isinstance(params, NigParams):
        s, th, k = params.sigma, params.theta, params.kappa
        return params.r - 1.0 / k + math.sqrt(1.0 - 2.0 * th * k - k * s * s) / k
    if isinstance(params, StableParams):
        if params.a_plus != 0:
            raise ParameterError(
                "stable exponential moment is infinite unless A = 0 (no positive jumps)"
            )
        return params.r + params.scale**params.alpha / math.cos(params.alpha * math.pi / 2)
    raise TypeError(f"unknown parameter set {params!r}")


@dataclass(frozen=True)
class LevyModel:
    """A parameter set together with its cached risk-neutral drift."""

    params: Params
    drift: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "drift", mean_correcting_drift(self.params))

    @property
    def name(self) -> str:
        return {VgParams: "vg", NigParams: "nig", StableParams: "stable"}[type(self.params)]

    @property
    def r(self) -> float:
        return self.params.r


CALIBRATED_VG = VgParams(sigma=0.1213, theta=-0.1436, kappa=0.1686, r=0.05)
CALIBRATED_NIG = NigParams(sigma=0.1836, theta=-0.1313, kappa=1.2819, r=0.05)
CALIBRATED_STABLE = StableParams(alpha=1.5597, a_plus=0.0, b_minus=0.1486, r=0.05)


def sample_vg_increment(p: VgParams, m: float, h: float, s: RngStream, size=None):
    """``X_{t+h} - X_t`` for VG; the Gamma clock has mean ``h`` and variance ``kappa*h``."""
    if not h > 0:
        raise ParameterError(f"timestep must be positive, got {h}")
    g = p.kappa * s.gamma(h / p.kappa, size)
    z = s.normal(size)
    return m * h + p.theta * g + p.sigma * np.sqrt(g) * z


def sample_nig_increment(p: NigParams, m: float, h: float, s: RngStream, size=None):
    """``X_{t+h} - X_t`` for NIG.

    The clock increment is IG(mean=h, shape=h**2/kappa), the only choice
    that reproduces the NIG characteristic function.
    """
    if not h > 0:
        raise ParameterError(f"timestep must be positive, got {h}")
    ig = s.inverse_gaussian(h, h * h / p.kappa, size)
    z = s.normal(size)
    return m * h + p.theta * ig + p.sigma * np.sqrt(ig) * z


def cms_standard_stable(alpha: float, beta: float, s: RngStream, size=None):
    """Chambers-Mallows-Stuck draw with characteristic function
    ``exp(-|u|**alpha * (1 - 1j*beta*sign(u)*tan(pi*alpha/2)))``, ``alpha != 1``.
    """
    if alpha == 1.0:
        raise ParameterError("alpha = 1 is not supported")
    v = math.pi * (s.uniform(size) - 0.5)
    w = s.exponential(size)
    zeta = beta * math.tan(math.pi * alpha / 2)
    b = math.atan(zeta) / alpha
    c = (1.0 + zeta * zeta) ** (0.5 / alpha)
    av = alpha * (v + b)
    return (
        c
        * np.sin(av)
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_stable_increment(p: StableParams, m: float, h: float, s: RngStream, size=None):
    """``X_{t+h} - X_t`` for the stable model, using self-similarity ``h**(1/alpha)``."""
    if not h > 0:
        raise ParameterError(f"timestep must be positive, got {h}")
    w = cms_standard_stable(p.alpha, p.skew, s, size)
    return m * h + h ** (1.0 / p.alpha) * p.scale * w


def sample_increments(model: LevyModel, h: float, s: RngStream, size=None):
    p = model.params
    if isinstance(p, VgParams):
        return sample_vg_increment(p, model.drift, h, s, size)
    if isinstance(p, NigParams):
        return sample_nig_increment(p, model.drift, h, s, size)
    return sample_stable_increment(p, model.drift, h, s, size)


def char_function(model: LevyModel, u, t: float):
    """``E[exp(i u X_t)]`` including the drift; a test oracle only."""
    u = np.asarray(u, dtype=float)
    p = model.params
    drift = np.exp(1j * u * model.drift * t)
    if isinstance(p, VgParams):
        base = 1.0 - 1j * u * p.theta * p.kappa + 0.5 * p.sigma**2 * u * u * p.kappa
        return drift * base ** (-t / p.kappa)
    if isinstance(p, NigParams):
        root = np.sqrt(1.0 - 2j * u * p.theta * p.kappa + p.kappa * p.sigma**2 * u * u)
        return drift * np.exp(t / p.kappa - t / p.kappa * root)
    tan = math.tan(math.pi * p.alpha / 2)
    expo = -(p.scale**p.alpha) * np.abs(u) ** p.alpha * (1.0 - 1j * p.skew * np.sign(u) * tan)
    return drift * np.exp(t * expo)
