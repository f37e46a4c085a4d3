"""Multilevel Monte Carlo driver.

Samples at level ``l`` are drawn in batches.  Batch ``k`` of level ``l`` is
driven by the stream ``(seed, stream_id(tag, l, k))`` and holds at most
``batch_elems // M**l`` paths, so the partition of work into streams never
depends on the number of workers.  Power sums of each batch are merged in
batch order, which makes totals bit-identical for any worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .models import LevyModel
from .paths import GridSpec, generate_coupled_paths
from .payoffs import OptionSpec, evaluate_pairs
from .rng import TAG_MLMC, ParameterError, RngStream, stream_id

__all__ = [
    "DriverConfig",
    "LevelStats",
    "MlmcResult",
    "InsufficientDataError",
    "sample_level",
    "run_fixed",
    "run_mlmc",
    "optimal_allocation",
    "fit_rates",
]

log = logging.getLogger(__name__)

KURTOSIS_WARN = 100.0


class InsufficientDataError(ValueError):
    """Too few correction levels to fit a rate."""


@dataclass(frozen=True)
class DriverConfig:
    M: int = 4
    N_init: int = 10_000
    L_min: int = 2
    L_max: int = 10
    fit_floor_level: int = 2
    n_min: int = 100
    batch_elems: int = 1 << 19
    stream_offset: int = 0

    def __post_init__(self):
        if self.M < 2:
            raise ParameterError("M must be >= 2")
        if not 1 <= self.L_min <= self.L_max:
            raise ParameterError("need 1 <= L_min <= L_max")
        if self.N_init < 2 or self.n_min < 1:
            raise ParameterError("N_init must be >= 2 and n_min >= 1")


@dataclass
class LevelStats:
    """Running power sums for one level.

    ``Y`` is the correction ``P_l - P_{l-1}`` (``P_0`` on level 0) and ``P``
    the fine payoff ``P_l``.
    """

    level: int
    M: int = 4
    N: int = 0
    sum1: float = 0.0
    sum2: float = 0.0
    sum3: float = 0.0
    sum4: float = 0.0
    sumP: float = 0.0
    sumP2: float = 0.0
    cost: float = 0.0
    next_batch: int = 0

    def add(self, sums: np.ndarray, n: int) -> None:
        self.N += n
        self.sum1 += sums[0]
        self.sum2 += sums[1]
        self.sum3 += sums[2]
        self.sum4 += sums[3]
        self.sumP += sums[4]
        self.sumP2 += sums[5]
        self.cost += n * float(self.M**self.level)

    @property
    def mean(self) -> float:
        return self.sum1 / self.N if self.N else math.nan

    @property
    def var(self) -> float:
        if not self.N:
            return math.nan
        return max(self.sum2 / self.N - self.mean**2, 0.0)

    @property
    def mean_p(self) -> float:
        return self.sumP / self.N if self.N else math.nan

    @property
    def var_p(self) -> float:
        if not self.N:
            return math.nan
        return max(self.sumP2 / self.N - self.mean_p**2, 0.0)

    @property
    def kurtosis(self) -> float:
        v = self.var
        if not self.N or v <= 0:
            return math.nan
        m = self.mean
        e2, e3, e4 = self.sum2 / self.N, self.sum3 / self.N, self.sum4 / self.N
        return (e4 - 4 * e3 * m + 6 * e2 * m * m - 3 * m**4) / (v * v)


@dataclass
class MlmcResult:
    estimate: float
    eps: float
    levels: List[LevelStats]
    alpha_hat: float
    beta_hat: float
    total_cost: float
    converged: bool
    bias_estimate: float = math.nan

    @property
    def L(self) -> int:
        return self.levels[-1].level

    @property
    def stat_variance(self) -> float:
        """Estimated variance of the estimator, ``sum_l V_l / N_l``."""
        return sum(s.var / s.N for s in self.levels)

    @property
    def std_error(self) -> float:
        return math.sqrt(self.stat_variance)


# -- sampling ----------------------------------------------------------------


def _batch_sums(model, specs, grid, seed, sid, n):
    path = generate_coupled_paths(model, grid, RngStream(seed, sid), n)
    out = np.empty((len(specs), 6))
    for i, pair in enumerate(evaluate_pairs(path, specs)):
        y = pair.correction
        y2 = y * y
        out[i] = (y.sum(), y2.sum(), (y2 * y).sum(), (y2 * y2).sum(), pair.fine.sum(), (pair.fine**2).sum())
    return out


@contextmanager
def _executor(workers: int):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield ex
    else:
        yield None


def _common_T(specs: Sequence[OptionSpec]) -> float:
    T = specs[0].T
    if any(s.T != T for s in specs):
        raise ParameterError("all options sampled on shared paths must have the same maturity")
    return T


def sample_level(
    model: LevyModel,
    specs: Sequence[OptionSpec],
    stats: Sequence[LevelStats],
    n_paths: int,
    *,
    seed: int = 0,
    tag: int = TAG_MLMC,
    batch_elems: int = 1 << 19,
    stream_offset: int = 0,
    executor=None,
) -> None:
    """Draw ``n_paths`` more coupled paths and add them to ``stats``.

    ``stats[i]`` accumulates the payoff ``specs[i]``; all entries must be
    for the same level and they share every path.
    """
    if n_paths <= 0:
        return
    level, M = stats[0].level, stats[0].M
    grid = GridSpec(level, M, _common_T(specs))
    per_batch = max(1, batch_elems // grid.n_fine)
    first = stats[0].next_batch
    jobs = []
    left = n_paths
    k = first
    while left > 0:
        n = min(per_batch, left)
        jobs.append((stream_id(tag, level, k, stream_offset), n))
        left -= n
        k += 1
    args = [(model, list(specs), grid, seed, sid, n) for sid, n in jobs]
    if executor is None:
        results = [_batch_sums(*a) for a in args]
    else:
        results = list(executor.map(_batch_sums, *zip(*args)))
    for (sid, n), sums in zip(jobs, results):
        for i, st in enumerate(stats):
            st.add(sums[i], n)
    for st in stats:
        st.next_batch = k


def run_fixed(
    model: LevyModel,
    specs: Sequence[OptionSpec],
    L: int,
    N,
    *,
    M: int = 4,
    seed: int = 0,
    tag: int = TAG_MLMC,
    levels: Optional[Sequence[int]] = None,
    batch_elems: int = 1 << 19,
    workers: int = 1,
) -> List[List[LevelStats]]:
    """Fixed-sample estimation on levels ``0..L`` (or ``levels``).

    Returns one list of :class:`LevelStats` per option spec.
    """
    levels = list(range(L + 1)) if levels is None else list(levels)
    counts = [N] * len(levels) if np.isscalar(N) else list(N)
    out = [[LevelStats(l, M) for l in levels] for _ in specs]
    with _executor(workers) as ex:
        for j, n in enumerate(counts):
            sample_level(
                model, specs, [o[j] for o in out], int(n),
                seed=seed, tag=tag, batch_elems=batch_elems, executor=ex,
            )
    return out


# -- allocation and rates ----------------------------------------------------


def optimal_allocation(level_variances, level_costs, eps: float, n_min: int = 100) -> List[int]:
    """Cost-minimising sample counts with ``sum V_l / N_l <= eps**2 / 2``.

    ``N_l = ceil(2 eps^-2 sqrt(V_l / C_l) sum_k sqrt(V_k C_k))``, floored
    at ``n_min``.
    """
    V = np.asarray(level_variances, dtype=float)
    C = np.asarray(level_costs, dtype=float)
    if np.any(V < 0) or np.any(C <= 0):
        raise ParameterError("variances must be >= 0 and costs > 0")
    if not eps > 0:
        raise ParameterError("eps must be positive")
    total = np.sqrt(V * C).sum()
    ns = np.ceil(2.0 / eps**2 * np.sqrt(V / C) * total)
    return [max(int(n), n_min) for n in ns]


def _ols_slope(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm = x - x.mean()
    return float((xm * (y - y.mean())).sum() / (xm * xm).sum())


def fit_rates(levels: Sequence[LevelStats], M: int = 4, min_level: int = 2):
    """Fit ``(alpha_hat, beta_hat)`` by least squares in ``log_M`` scale.

    ``alpha_hat`` is minus the slope of ``log_M |mean_l|`` against ``l`` and
    ``beta_hat`` the same for ``var_l``, over levels ``l >= max(min_level, 1)``.
    """
    window = [s for s in levels if s.level >= max(min_level, 1) and s.N > 0]
    # zero means/variances carry no rate information and have no logarithm
    pm = [(s.level, math.log(abs(s.mean), M)) for s in window if s.mean != 0]
    pv = [(s.level, math.log(s.var, M)) for s in window if s.var > 0]
    if min(len(pm), len(pv)) < 3:
        raise InsufficientDataError(
            f"need >= 3 nondegenerate correction levels at or above {max(min_level, 1)}"
        )
    alpha = -_ols_slope(*zip(*pm))
    beta = -_ols_slope(*zip(*pv))
    return alpha, beta


def _working_rates(levels: Sequence[LevelStats], cfg: DriverConfig):
    """Rates used inside the driver; unfloored values for reporting."""
    usable = [s for s in levels if s.level >= 1 and s.N > 0]
    window = [s for s in usable if s.level >= cfg.fit_floor_level]
    if len(window) < 2:
        window = usable
    alpha = beta = math.nan
    pts = [(s.level, abs(s.mean)) for s in window if s.mean != 0]
    if len(pts) >= 2:
        alpha = -_ols_slope([p[0] for p in pts], [math.log(p[1], cfg.M) for p in pts])
    pts = [(s.level, s.var) for s in window if s.var > 0]
    if len(pts) >= 2:
        beta = -_ols_slope([p[0] for p in pts], [math.log(p[1], cfg.M) for p in pts])
    return alpha, beta


def _bias_estimate(levels: Sequence[LevelStats], alpha: float, M: int) -> float:
    top = levels[-1]
    ma = M**alpha
    rem = abs(top.mean)
    if len(levels) >= 3:
        rem = max(rem, abs(levels[-2].mean) / ma)
    return rem / (ma - 1.0)


def run_mlmc(
    model: LevyModel,
    spec: OptionSpec,
    eps: float,
    cfg: Optional[DriverConfig] = None,
    *,
    seed: int = 0,
    workers: int = 1,
) -> MlmcResult:
    """Adaptive MLMC estimate of the discounted payoff to RMS accuracy ``eps``.

    Half the mean-square error budget goes to sampling variance and half to
    squared bias.  Levels are added until the extrapolated remaining bias is
    below ``eps/sqrt(2)``; hitting ``L_max`` returns ``converged=False``.
    """
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    cfg = cfg or DriverConfig()
    M = cfg.M
    levels = [LevelStats(l, M) for l in range(cfg.L_min + 1)]
    dN = [cfg.N_init] * len(levels)
    converged = False
    alpha = beta = math.nan
    bias = math.nan

    with _executor(workers) as ex:
        while True:
            for st, n in zip(levels, dN):
                sample_level(
                    model, [spec], [st], n, seed=seed, batch_elems=cfg.batch_elems,
                    stream_offset=cfg.stream_offset, executor=ex,
                )
            alpha, beta = _working_rates(levels, cfg)
            V = [s.var for s in levels]
            C = [float(M**s.level) for s in levels]
            Ns = optimal_allocation(V, C, eps, n_min=cfg.n_min)
            dN = [max(0, n - s.N) for n, s in zip(Ns, levels)]
            if any(dN):
                continue

            a = max(0.5, alpha) if not math.isnan(alpha) else 0.5
            bias = _bias_estimate(levels, a, M)
            if bias <= eps / math.sqrt(2.0):
                converged = True
                break
            if levels[-1].level >= cfg.L_max:
                log.warning("L_max=%d reached before the bias test passed", cfg.L_max)
                break
            levels.append(LevelStats(levels[-1].level + 1, M))
            dN = [0] * (len(levels) - 1) + [cfg.N_init]

    for s in levels:
        k = s.kurtosis
        if s.level > 0 and k > KURTOSIS_WARN:
            log.warning("level %d: kurtosis %.1f, variance estimate unreliable", s.level, k)

    return MlmcResult(
        estimate=sum(s.mean for s in levels),
        eps=eps,
        levels=levels,
        alpha_hat=alpha,
        beta_hat=beta,
        total_cost=sum(s.cost for s in levels),
        converged=converged,
        bias_estimate=bias,
    )
