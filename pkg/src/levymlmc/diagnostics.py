"""Experiment harness: level-rate tables, discrete-monitoring gap decay and
MLMC versus plain Monte Carlo cost sweeps.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .mlmc import DriverConfig, LevelStats, MlmcResult, _ols_slope, fit_rates, run_fixed, run_mlmc
from .models import LevyModel, sample_increments
from .payoffs import OptionSpec
from .rng import TAG_DN, ParameterError, RngStream, stream_id

__all__ = [
    "REFERENCE_RATES",
    "RateReport",
    "DnReport",
    "ComplexityPoint",
    "measure_rates",
    "measure_rates_many",
    "measure_dn",
    "complexity_sweep",
    "cost_slope",
    "fmt",
    "write_levels_csv",
    "write_rates_csv",
    "write_dn_csv",
    "write_sweep_csv",
    "summary_dict",
]

# (model, option) -> (weak exponent, variance exponent) targets for the rate fits
REFERENCE_RATES: Dict[Tuple[str, str], Tuple[float, float]] = {
    ("vg", "asian"): (1.0, 2.0),
    ("vg", "lookback"): (1.0, 1.5),
    ("vg", "barrier"): (0.7, 1.0),
    ("nig", "asian"): (1.0, 2.0),
    ("nig", "lookback"): (0.7, 1.5),
    ("nig", "barrier"): (0.7, 0.9),
    ("stable", "asian"): (1.0, 2.0),
    ("stable", "lookback"): (0.5, 1.5),
    ("stable", "barrier"): (0.5, 0.7),
}

RATE_TOL = 0.3

DN_CAVEAT = (
    "sup is proxied by the max on an n*multiplier grid; the proxy underestimates "
    "the continuous supremum, so D_n is biased low and exponents are indicative"
)


def fmt(x) -> str:
    """Floats with 17 significant digits, everything else via ``str``."""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


@dataclass
class RateReport:
    model: str
    option: str
    levels: List[LevelStats]
    M: int
    alpha_hat: float
    beta_hat: float
    reference_alpha: float
    reference_beta: float
    tol: float = RATE_TOL
    fit_floor_level: int = 2

    @property
    def pass_alpha(self) -> bool:
        return abs(self.alpha_hat - self.reference_alpha) <= self.tol

    @property
    def pass_beta(self) -> bool:
        return abs(self.beta_hat - self.reference_beta) <= self.tol

    def rows(self):
        for s in self.levels:
            if s.level == 0:
                continue
            yield {
                "level": s.level,
                "N": s.N,
                "mean": s.mean,
                "var": s.var,
                "log_M_abs_mean": math.log(abs(s.mean), self.M) if s.mean != 0 else -math.inf,
                "log_M_var": math.log(s.var, self.M) if s.var > 0 else -math.inf,
                "kurtosis": s.kurtosis,
            }


def measure_rates_many(
    model: LevyModel,
    specs: Sequence[OptionSpec],
    L: int,
    N_per_level: int,
    *,
    M: int = 4,
    fit_floor_level: int = 2,
    seed: int = 0,
    tol: float = RATE_TOL,
    workers: int = 1,
) -> List[RateReport]:
    """Fixed-N level statistics for several options sharing the same paths."""
    if L < 4:
        raise ParameterError("measure_rates needs L >= 4")
    out = run_fixed(model, specs, L, N_per_level, M=M, seed=seed, workers=workers)
    reports = []
    for spec, levels in zip(specs, out):
        a, b = fit_rates(levels, M, fit_floor_level)
        ra, rb = REFERENCE_RATES.get((model.name, spec.kind), (math.nan, math.nan))
        reports.append(RateReport(model.name, spec.kind, levels, M, a, b, ra, rb, tol, fit_floor_level))
    return reports


def measure_rates(model: LevyModel, spec: OptionSpec, L: int, N_per_level: int, **kw) -> RateReport:
    return measure_rates_many(model, [spec], L, N_per_level, **kw)[0]


# -- discrete monitoring gap -------------------------------------------------


@dataclass
class DnReport:
    model: str
    n_list: List[int]
    n_ref_multiplier: int
    N_paths: int
    mean_d: List[float]
    mean_d2: List[float]
    se_d: List[float]
    max_d: List[float]
    exponent_d: float
    exponent_d2: float
    exponent_d_log: float
    caveat: str = DN_CAVEAT


def measure_dn(
    model: LevyModel,
    n_list: Sequence[int],
    N_paths: int,
    n_ref_multiplier: int = 64,
    *,
    seed: int = 0,
    batch_elems: int = 1 << 19,
) -> DnReport:
    """Moments of ``D_n = sup X - max_i X_{i/n}`` on ``[0, 1]``.

    The supremum is approximated by the maximum over a grid ``n_ref_multiplier``
    times finer than the ``n`` grid; all grids are subsamplings of one path
    with ``max(n_list) * n_ref_multiplier`` steps.

    ``exponent_d`` is minus the slope of ``log E[D_n]`` against ``log n``;
    ``exponent_d_log`` regresses against ``log(n / log n)`` instead, which
    removes a ``log n`` factor from the rate.
    """
    n_list = sorted(int(n) for n in n_list)
    if n_ref_multiplier < 16:
        raise ParameterError("n_ref_multiplier must be >= 16")
    n_max = n_list[-1]
    if any(n_max % n for n in n_list):
        raise ParameterError("every n must divide max(n_list)")
    n_fine = n_max * n_ref_multiplier
    h = 1.0 / n_fine
    per_batch = max(1, batch_elems // n_fine)

    k = len(n_list)
    s1 = np.zeros(k)
    s2 = np.zeros(k)
    dmax = np.zeros(k)
    left, b = N_paths, 0
    while left > 0:
        nb = min(per_batch, left)
        rs = RngStream(seed, stream_id(TAG_DN, 0, b))
        x = np.empty((nb, n_fine + 1))
        x[:, 0] = 0.0
        np.cumsum(sample_increments(model, h, rs, (nb, n_fine)), axis=1, out=x[:, 1:])
        for i, n in enumerate(n_list):
            ref = x[:, :: n_max // n].max(axis=1)
            coarse = x[:, :: n_fine // n].max(axis=1)
            d = ref - coarse
            s1[i] += d.sum()
            s2[i] += (d * d).sum()
            dmax[i] = max(dmax[i], d.max())
        left -= nb
        b += 1

    m1 = s1 / N_paths
    m2 = s2 / N_paths
    se = np.sqrt(np.maximum(m2 - m1 * m1, 0.0) / N_paths)
    ln = np.log(n_list)
    e1 = -_ols_slope(ln, np.log(m1)) if np.all(m1 > 0) else math.nan
    e2 = -_ols_slope(ln, np.log(m2)) if np.all(m2 > 0) else math.nan
    if np.all(m1 > 0) and n_list[0] > 1:
        elog = -_ols_slope(ln - np.log(ln), np.log(m1))
    else:
        elog = math.nan
    return DnReport(
        model.name, n_list, n_ref_multiplier, N_paths,
        m1.tolist(), m2.tolist(), se.tolist(), dmax.tolist(), e1, e2, elog,
    )


# -- complexity ----------------------------------------------------------------


@dataclass
class ComplexityPoint:
    eps: float
    mlmc_cost: float
    std_mc_cost: float
    L: int
    result: Optional[MlmcResult] = field(default=None, repr=False)

    @property
    def savings(self) -> float:
        return self.std_mc_cost / self.mlmc_cost


def std_mc_cost(result: MlmcResult, M: int = 4) -> float:
    """Plain MC cost at the same accuracy: ``2 eps^-2 V[P_L] M^L``."""
    top = result.levels[-1]
    return 2.0 / result.eps**2 * top.var_p * float(M**top.level)


def complexity_sweep(
    model: LevyModel,
    spec: OptionSpec,
    eps_list: Sequence[float],
    cfg: Optional[DriverConfig] = None,
    *,
    seed: int = 0,
    workers: int = 1,
) -> List[ComplexityPoint]:
    eps_list = list(eps_list)
    if len(eps_list) < 3 or any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ParameterError("eps_list must be strictly decreasing with at least 3 entries")
    cfg = cfg or DriverConfig()
    points = []
    for eps in eps_list:
        res = run_mlmc(model, spec, eps, cfg, seed=seed, workers=workers)
        points.append(ComplexityPoint(eps, res.total_cost, std_mc_cost(res, cfg.M), res.L, res))
    return points


def cost_slope(points: Sequence[ComplexityPoint]) -> float:
    """Slope of ``log(mlmc_cost)`` against ``log(eps)``."""
    return _ols_slope([math.log(p.eps) for p in points], [math.log(p.mlmc_cost) for p in points])


# -- output ------------------------------------------------------------------

LEVEL_COLUMNS = ["level", "N", "mean_Y", "var_Y", "mean_P", "var_P", "kurtosis", "cost"]
RATE_COLUMNS = ["model", "option", "level", "N", "mean", "var", "log_M_abs_mean", "log_M_var",
                "kurtosis", "alpha_hat", "beta_hat", "reference_alpha", "reference_beta",
                "pass_alpha", "pass_beta"]
DN_COLUMNS = ["model", "n", "n_ref", "N_paths", "mean_D", "se_D", "mean_D2", "max_D",
              "exponent_D", "exponent_D_log", "exponent_D2"]
SWEEP_COLUMNS = ["eps", "L", "mlmc_cost", "std_mc_cost", "savings"]


def _writer(fh, columns):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    return w


def write_levels_csv(result: MlmcResult, fh) -> None:
    w = _writer(fh, LEVEL_COLUMNS)
    for s in result.levels:
        w.writerow([fmt(v) for v in (s.level, s.N, s.mean, s.var, s.mean_p, s.var_p, s.kurtosis, s.cost)])


def write_rates_csv(reports: Sequence[RateReport], fh) -> None:
    w = _writer(fh, RATE_COLUMNS)
    for rep in reports:
        for row in rep.rows():
            w.writerow([fmt(v) for v in (
                rep.model, rep.option, row["level"], row["N"], row["mean"], row["var"],
                row["log_M_abs_mean"], row["log_M_var"], row["kurtosis"], rep.alpha_hat,
                rep.beta_hat, rep.reference_alpha, rep.reference_beta, rep.pass_alpha, rep.pass_beta,
            )])


def write_dn_csv(rep: DnReport, fh) -> None:
    fh.write(f"# {rep.caveat}\n")
    w = _writer(fh, DN_COLUMNS)
    for i, n in enumerate(rep.n_list):
        w.writerow([fmt(v) for v in (
            rep.model, n, n * rep.n_ref_multiplier, rep.N_paths, rep.mean_d[i], rep.se_d[i],
            rep.mean_d2[i], rep.max_d[i], rep.exponent_d, rep.exponent_d_log, rep.exponent_d2,
        )])


def write_sweep_csv(points: Sequence[ComplexityPoint], fh) -> None:
    w = _writer(fh, SWEEP_COLUMNS)
    for p in points:
        w.writerow([fmt(v) for v in (p.eps, p.L, p.mlmc_cost, p.std_mc_cost, p.savings)])


def summary_dict(result: MlmcResult) -> dict:
    return {
        "estimate": result.estimate,
        "eps": result.eps,
        "alpha_hat": result.alpha_hat,
        "beta_hat": result.beta_hat,
        "total_cost": result.total_cost,
        "converged": result.converged,
    }


def summary_json(result: MlmcResult) -> str:
    # repr round-trips doubles exactly (17 significant digits at most)
    return json.dumps(summary_dict(result), indent=2)
