import math

import numpy as np
import pytest
from scipy import stats

from levymlmc.models import (
    CALIBRATED_NIG,
    CALIBRATED_STABLE,
    CALIBRATED_VG,
    LevyModel,
    NigParams,
    StableParams,
    VgParams,
    char_function,
    mean_correcting_drift,
    sample_increments,
    sample_nig_increment,
    sample_stable_increment,
    sample_vg_increment,
)
from levymlmc.rng import ParameterError, RngStream

# r - log E[exp(X_1 - m)] by analytic continuation of each characteristic
# function to u = -i, evaluated with mpmath at 40 digits
DRIFT_VG = 0.18470191920467072
DRIFT_NIG = 0.15709433803021993
DRIFT_STABLE = -0.016372322926226910

N = 10**6


@pytest.mark.parametrize("params, expected", [
    (CALIBRATED_VG, DRIFT_VG),
    (CALIBRATED_NIG, DRIFT_NIG),
    (CALIBRATED_STABLE, DRIFT_STABLE),
])
def test_drift_values(params, expected):
    assert mean_correcting_drift(params) == pytest.approx(expected, rel=1e-14)


def test_stable_drift_below_r():
    assert mean_correcting_drift(CALIBRATED_STABLE) < CALIBRATED_STABLE.r


@pytest.mark.parametrize("params", [CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE])
def test_drift_cache_coherent(params):
    model = LevyModel(params)
    assert model.drift == mean_correcting_drift(params)
    assert model.drift == mean_correcting_drift(model)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        VgParams(sigma=0.0, theta=0.0, kappa=0.1)
    with pytest.raises(ParameterError, match="VG drift"):
        VgParams(sigma=0.1, theta=10.0, kappa=1.0)
    with pytest.raises(ParameterError, match="NIG drift"):
        NigParams(sigma=0.1, theta=1.0, kappa=1.0)
    with pytest.raises(ParameterError):
        StableParams(alpha=1.0, a_plus=0.0, b_minus=0.1)
    with pytest.raises(ParameterError):
        StableParams(alpha=2.5, a_plus=0.0, b_minus=0.1)
    with pytest.raises(ParameterError):
        StableParams(alpha=1.5, a_plus=0.0, b_minus=0.0)
    # two-sided stable has no exponential moment
    with pytest.raises(ParameterError, match="A = 0"):
        LevyModel(StableParams(alpha=1.5, a_plus=0.1, b_minus=0.1))


def test_sampler_rejects_nonpositive_step():
    with pytest.raises(ParameterError):
        sample_vg_increment(CALIBRATED_VG, 0.0, 0.0, RngStream())


def test_vg_moments_unit_step():
    x = sample_vg_increment(CALIBRATED_VG, DRIFT_VG, 1.0, RngStream(1, 1), N)
    mean = DRIFT_VG + CALIBRATED_VG.theta
    var = CALIBRATED_VG.sigma**2 + CALIBRATED_VG.theta**2 * CALIBRATED_VG.kappa
    assert mean == pytest.approx(0.041101919, abs=1e-8)
    assert var == pytest.approx(0.018190384, abs=1e-8)
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / N)
    # variance of the sample variance from the empirical fourth central moment
    m4 = ((x - x.mean()) ** 4).mean()
    assert abs(x.var() - var) < 3 * math.sqrt((m4 - var**2) / N)


def test_nig_moments_unit_step():
    x = sample_nig_increment(CALIBRATED_NIG, DRIFT_NIG, 1.0, RngStream(1, 2), N)
    mean = DRIFT_NIG + CALIBRATED_NIG.theta
    var = CALIBRATED_NIG.sigma**2 + CALIBRATED_NIG.theta**2 * CALIBRATED_NIG.kappa
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / N)
    m4 = ((x - x.mean()) ** 4).mean()
    assert abs(x.var() - var) < 3 * math.sqrt((m4 - var**2) / N)


def test_nig_symmetric_case_has_zero_skew():
    p = NigParams(sigma=0.1836, theta=0.0, kappa=1.2819)
    x = sample_nig_increment(p, 0.0, 1.0, RngStream(1, 3), N)
    z = (x - x.mean()) / x.std()
    # s.e. of sample skewness via sixth moment: var(m3) ~ (E z^6 - 6 E z^4 + 9) / n
    se = math.sqrt(((z**6).mean() - 6 * (z**4).mean() + 9) / N)
    assert abs((z**3).mean()) < 3 * se


def test_symmetric_stable_median_zero():
    p = StableParams(alpha=1.5597, a_plus=0.1486, b_minus=0.1486)
    x = sample_stable_increment(p, 0.0, 1.0, RngStream(2, 1), N)
    # the median's s.e. is a fraction of IQR / sqrt(n) for unimodal laws
    iqr = np.subtract(*np.percentile(x, [75, 25]))
    assert abs(np.median(x)) < 5 * iqr / math.sqrt(N)


def test_spectrally_negative_tails():
    x = sample_stable_increment(CALIBRATED_STABLE, 0.0, 1.0, RngStream(2, 2), N)
    med = np.median(x)
    upper = np.quantile(x, 0.9999) - med
    lower = med - np.quantile(x, 0.0001)
    assert lower > 10 * upper


def test_stable_self_similarity():
    a = CALIBRATED_STABLE.alpha
    s = RngStream(2, 3)
    x1 = sample_stable_increment(CALIBRATED_STABLE, 0.0, 1.0, s, 10**5)
    xq = sample_stable_increment(CALIBRATED_STABLE, 0.0, 0.25, s, 10**5) * 4 ** (1 / a)
    assert stats.ks_2samp(x1, xq).pvalue > 0.01


@pytest.mark.parametrize("params", [CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE])
@pytest.mark.parametrize("n", [4, 16])
def test_increment_additivity(params, n):
    model = LevyModel(params)
    s = RngStream(9, n)
    one = sample_increments(model, 1.0, s, 20_000)
    parts = sample_increments(model, 1.0 / n, s, (20_000, n)).sum(axis=1)
    assert stats.ks_2samp(one, parts).pvalue > 0.01


@pytest.mark.parametrize("params", [CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE])
def test_char_function_normalised(params):
    model = LevyModel(params)
    for t in (0.1, 1.0, 3.0):
        assert char_function(model, 0.0, t) == pytest.approx(1.0)


def test_vg_char_function_closed_form():
    model = LevyModel(CALIBRATED_VG)
    p = CALIBRATED_VG
    t = p.kappa
    want = np.exp(1j * model.drift * t) / (1 - 1j * p.theta * p.kappa + 0.5 * p.sigma**2 * p.kappa)
    assert char_function(model, 1.0, t) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("params", [CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE])
def test_char_function_monte_carlo(params):
    model = LevyModel(params)
    x = sample_increments(model, 1.0, RngStream(8, 1), N)
    for u in (1.0, 5.0):
        e = np.exp(1j * u * x)
        cf = char_function(model, u, 1.0)
        assert abs(e.real.mean() - cf.real) < 5 * e.real.std() / math.sqrt(N)
        assert abs(e.imag.mean() - cf.imag) < 5 * e.imag.std() / math.sqrt(N)


def test_char_function_conjugate_symmetry():
    for params in (CALIBRATED_VG, CALIBRATED_NIG, CALIBRATED_STABLE):
        model = LevyModel(params)
        for u in (0.5, 2.0):
            assert char_function(model, -u, 0.7) == pytest.approx(np.conj(char_function(model, u, 0.7)))
