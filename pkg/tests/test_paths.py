import numpy as np
import pytest
from scipy import stats

from levymlmc.models import CALIBRATED_NIG, CALIBRATED_STABLE, CALIBRATED_VG, LevyModel
from levymlmc.paths import GridSpec, generate_coupled_path, generate_coupled_paths
from levymlmc.rng import ParameterError, RngStream

MODELS = [LevyModel(p) for p in (CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE)]


def test_grid_spec():
    g = GridSpec(3, 4, 1.0)
    assert g.n_fine == 64
    assert g.n_fine * g.h_fine == pytest.approx(1.0, abs=1e-15)
    assert GridSpec(5, 2, 0.5).h_fine == 0.5 / 32
    for bad in [(-1, 4, 1.0), (2, 1, 1.0), (2, 4, 0.0)]:
        with pytest.raises(ParameterError):
            GridSpec(*bad)


def test_level_zero_has_no_coarse_path():
    p = generate_coupled_path(MODELS[0], GridSpec(0), RngStream(1, 1))
    assert p.fine_x.shape == (2,)
    assert p.fine_x[0] == 0.0
    assert p.coarse_x is None


def test_level_two_shapes_and_indexing():
    p = generate_coupled_path(MODELS[1], GridSpec(2), RngStream(1, 2))
    assert p.fine_x.shape == (17,)
    assert p.coarse_x.shape == (5,)
    assert p.coarse_x[3] == p.fine_x[12]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
@pytest.mark.parametrize("level", [1, 2, 4])
def test_exact_coupling_bitwise(model, level):
    p = generate_coupled_paths(model, GridSpec(level), RngStream(2, level), 200)
    M = p.grid.M
    assert np.all(p.fine_x[:, 0] == 0.0)
    for k in range(p.coarse_x.shape[1]):
        assert np.array_equal(p.coarse_x[:, k], p.fine_x[:, k * M])


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_refined_max_dominates(model):
    p = generate_coupled_paths(model, GridSpec(3), RngStream(3, 1), 2000)
    assert np.all(p.fine_x.max(axis=1) >= p.coarse_x.max(axis=1))


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_terminal_law_level_invariant(model):
    a = generate_coupled_paths(model, GridSpec(0), RngStream(4, 0), 100_000).fine_x[:, -1]
    b = generate_coupled_paths(model, GridSpec(3), RngStream(4, 3), 100_000).fine_x[:, -1]
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_general_maturity():
    p = generate_coupled_paths(MODELS[0], GridSpec(2, 4, 2.5), RngStream(5, 0), 50_000)
    m = MODELS[0]
    # E[X_T] = (m + theta) T for VG
    want = (m.drift + m.params.theta) * 2.5
    se = p.fine_x[:, -1].std() / np.sqrt(50_000)
    assert abs(p.fine_x[:, -1].mean() - want) < 4 * se
