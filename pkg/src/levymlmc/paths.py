"""Coupled fine/coarse log-price paths on uniform grids.

At level ``l`` the fine grid has ``M**l`` steps over ``[0, T]``.  The coarse
path is the fine path read off every ``M``-th node, so both resolutions are
driven by exactly the same Lévy sample path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .models import LevyModel, sample_increments
from .rng import ParameterError, RngStream

__all__ = ["GridSpec", "PathGrid", "generate_coupled_path", "generate_coupled_paths"]


@dataclass(frozen=True)
class GridSpec:
    level: int
    M: int = 4
    T: float = 1.0

    def __post_init__(self):
        if self.M < 2 or self.level < 0 or not self.T > 0:
            raise ParameterError(f"invalid grid: level={self.level}, M={self.M}, T={self.T}")

    @property
    def n_fine(self) -> int:
        return self.M**self.level

    @property
    def h_fine(self) -> float:
        return self.T / self.n_fine

    def coarser(self) -> "GridSpec":
        return GridSpec(self.level - 1, self.M, self.T)


@dataclass
class PathGrid:
    """Log-price values ``X`` on the fine grid and its coarse subsampling.

    Arrays are 1-D for a single path or ``(n_paths, n + 1)`` for a batch.
    ``coarse_x`` is ``None`` at level 0.
    """

    grid: GridSpec
    fine_x: np.ndarray
    coarse_x: Optional[np.ndarray]


def generate_coupled_paths(model: LevyModel, grid: GridSpec, s: RngStream, n_paths: int) -> PathGrid:
    n = grid.n_fine
    dx = sample_increments(model, grid.h_fine, s, (n_paths, n))
    x = np.empty((n_paths, n + 1))
    x[:, 0] = 0.0
    np.cumsum(dx, axis=1, out=x[:, 1:])
    coarse = x[:, :: grid.M] if grid.level > 0 else None
    return PathGrid(grid, x, coarse)


def generate_coupled_path(model: LevyModel, grid: GridSpec, s: RngStream) -> PathGrid:
    """One coupled path; ``s`` should be fresh for this path."""
    batch = generate_coupled_paths(model, grid, s, 1)
    coarse = None if batch.coarse_x is None else batch.coarse_x[0]
    return PathGrid(grid, batch.fine_x[0], coarse)
