import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from timechange import (
    Deterministic,
    DomainError,
    Gamma,
    IncrementPanel,
    InverseGaussian,
    ParameterError,
    TcbmSpec,
    UnsupportedDensityError,
    sample_subordinator_increment,
    sample_tcbm_increments,
    subordinator_cf,
    subordinator_density,
    subordinator_laplace,
    tcbm_cf,
)
from timechange.models import subordinator_mean, subordinator_variance

pos = st.floats(0.2, 8.0)
specs = st.one_of(
    st.builds(Gamma, pos, pos),
    st.builds(InverseGaussian, pos, pos),
    st.builds(Deterministic, pos),
)


def test_spec_validation():
    with pytest.raises(ParameterError):
        Gamma(0, 1)
    with pytest.raises(ParameterError):
        InverseGaussian(1, -1)
    with pytest.raises(ParameterError):
        Deterministic(float("nan"))
    with pytest.raises(ParameterError):
        TcbmSpec(float("inf"), Gamma(1, 1))


def test_deterministic_draws():
    assert list(sample_subordinator_increment(Deterministic(1), 2, 3, seed=0)) == [2, 2, 2]


@pytest.mark.parametrize("t,n", [(1, 0), (0, 5), (-1, 5), (1, 2.5)])
def test_bad_requests(t, n):
    with pytest.raises(ParameterError):
        sample_subordinator_increment(Gamma(5, 5), t, n, seed=0)
    with pytest.raises(ParameterError):
        sample_tcbm_increments(TcbmSpec(0, Gamma(5, 5)), t, n, seed=0)


def test_gamma_mean_against_chi_square_sampler():
    # Gamma(shape 5, rate 5) is chi2(10)/10: a sum of squared normals, no rejection step
    n = 10**6
    ours = sample_subordinator_increment(Gamma(5, 5), 1, n, seed=11)
    brute = (np.random.default_rng(12).standard_normal((n, 10)) ** 2).sum(axis=1) / 10
    tol = 3 * math.sqrt(1 / (5 * n))
    assert abs(ours.mean() - 1) < tol
    assert abs(brute.mean() - 1) < tol
    assert abs(ours.var() - brute.var()) < 0.005


@pytest.mark.parametrize("shape", [0.3, 0.9, 1.0, 2.5, 40.0])
def test_gamma_sampler_distribution(shape):
    x = sample_subordinator_increment(Gamma(shape, 2.0), 1, 50_000, seed=3)
    assert np.all(x >= 0)
    assert stats.kstest(x, stats.gamma(shape, scale=0.5).cdf).pvalue > 1e-3


@pytest.mark.parametrize("delta,gp,t", [(1.0, 1.0, 1.0), (2.0, 0.5, 0.3), (0.5, 3.0, 2.0)])
def test_inverse_gaussian_sampler_distribution(delta, gp, t):
    spec = InverseGaussian(delta, gp)
    x = sample_subordinator_increment(spec, t, 50_000, seed=5)
    mu, lam = delta * t / gp, (delta * t) ** 2
    assert np.all(x > 0)
    assert stats.kstest(x, stats.invgauss(mu / lam, scale=lam).cdf).pvalue > 1e-3
    assert abs(x.mean() - subordinator_mean(spec, t)) < 5 * math.sqrt(subordinator_variance(spec, t) / x.size)


def test_sampling_reproducible_and_clock_shared():
    spec = TcbmSpec(0.3, Gamma(2, 3))
    a = sample_tcbm_increments(spec, 1.5, 1000, seed=42)
    b = sample_tcbm_increments(spec, 1.5, 1000, seed=42)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_tcbm_increments(spec, 1.5, 1000, seed=43))


@settings(max_examples=30, deadline=None)
@given(spec=specs, t=st.floats(0.05, 4.0), seed=st.integers(0, 2**32))
def test_subordinator_nonnegative(spec, t, seed):
    assert np.all(sample_subordinator_increment(spec, t, 200, seed) >= 0)


@settings(max_examples=20, deadline=None)
@given(spec=st.one_of(st.builds(Gamma, pos, pos), st.builds(InverseGaussian, pos, pos)), seed=st.integers(0, 1000))
def test_clock_paths_nondecreasing(spec, seed):
    # cumulative sums of independent increments form a sampled path starting at 0
    steps = sample_subordinator_increment(spec, 0.1, 100, seed)
    path = np.concatenate([[0.0], np.cumsum(steps)])
    assert path[0] == 0 and np.all(np.diff(path) >= 0)


def test_brownian_channel_is_standard_normal():
    n = 10**5
    x = sample_tcbm_increments(TcbmSpec(0, Deterministic(1)), 1, n, seed=7)
    assert stats.kstest(x, "norm").statistic < 1.63 / math.sqrt(n)


def test_brownian_channel_with_drift_mean():
    n = 10**5
    x = sample_tcbm_increments(TcbmSpec(0.5, Deterministic(1)), 4, n, seed=8)
    assert abs(x.mean() - 2.0) < 3 * 2 / math.sqrt(n)


def test_vg_variance_total_variance_law():
    x = sample_tcbm_increments(TcbmSpec(0, Gamma(5, 5)), 1, 10**6, seed=9)
    assert abs(x.var() - 1.0) < 0.01


def test_laplace_values():
    for spec in (Gamma(2, 3), InverseGaussian(1, 2), Deterministic(3)):
        assert subordinator_laplace(spec, 1.3, 0) == 1
    assert subordinator_laplace(Deterministic(2), 1, 1) == pytest.approx(math.exp(-2), rel=1e-15)
    assert subordinator_laplace(Gamma(1, 1), 1, 1) == pytest.approx(0.5, rel=1e-15)
    # quadrature oracle
    quad, _ = integrate.quad(lambda v: math.exp(-v) * math.exp(-v), 0, math.inf)
    assert subordinator_laplace(Gamma(1, 1), 1, 1) == pytest.approx(quad, rel=1e-10)


def test_laplace_domain():
    with pytest.raises(DomainError):
        subordinator_laplace(Gamma(1, 1), 1, -0.1)


@pytest.mark.parametrize("spec", [Gamma(2.0, 1.5), InverseGaussian(1.2, 0.7)])
@pytest.mark.parametrize("s", [0.3, 1.0, 2.0 + 3.0j])
def test_laplace_against_quadrature(spec, s):
    f = lambda v, part: getattr(np.exp(-s * v), part) * subordinator_density(spec, 1.0, v)
    re = integrate.quad(f, 0, np.inf, args=("real",), limit=200)[0]
    im = integrate.quad(f, 0, np.inf, args=("imag",), limit=200)[0]
    assert subordinator_laplace(spec, 1.0, s) == pytest.approx(re + 1j * im, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(spec=specs, t=st.floats(0.1, 3.0))
def test_laplace_real_decreasing(spec, t):
    s = np.linspace(0, 20, 101)
    vals = subordinator_laplace(spec, t, s)
    assert np.all(np.abs(vals.imag) == 0)
    assert np.all((vals.real > 0) & (vals.real <= 1))
    assert np.all(np.diff(vals.real) <= 0)


@settings(max_examples=40, deadline=None)
@given(spec=specs, t=st.floats(0.1, 3.0), w=st.floats(-500, 500))
def test_cf_modulus_and_conjugate(spec, t, w):
    a = subordinator_cf(spec, t, w)
    assert abs(a) <= 1 + 1e-15
    assert subordinator_cf(spec, t, -w) == pytest.approx(np.conj(a), abs=1e-15)


def test_cf_values():
    assert subordinator_cf(Gamma(2, 2), 1, 2) == pytest.approx(0.5j, abs=1e-15)
    assert subordinator_cf(Deterministic(1), 3, 1) == pytest.approx(np.exp(3j), abs=1e-15)
    for spec in (Gamma(2, 3), InverseGaussian(1, 2), Deterministic(3)):
        assert subordinator_cf(spec, 0.7, 0.0) == 1


def test_cf_against_quadrature():
    # E[exp(2i tau)] for tau ~ Gamma(shape 2, rate 2)
    f = lambda v: 4 * v * math.exp(-2 * v)
    re = integrate.quad(f, 0, np.inf, weight="cos", wvar=2)[0]
    im = integrate.quad(f, 0, np.inf, weight="sin", wvar=2)[0]
    assert abs(re) < 1e-10 and im == pytest.approx(0.5, abs=1e-10)


def test_density_values():
    assert subordinator_density(Gamma(1, 1), 1, 0.5) == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert subordinator_density(Gamma(5, 5), 1, 1.0) == pytest.approx(5**5 * math.exp(-5) / 24, rel=1e-14)
    assert subordinator_density(Gamma(5, 5), 1, 1.0) == pytest.approx(0.877337, abs=1e-6)
    assert subordinator_density(Gamma(2, 2), 1, -1.0) == 0
    assert subordinator_density(InverseGaussian(1, 1), 1, 0.0) == 0
    with pytest.raises(UnsupportedDensityError):
        subordinator_density(Deterministic(1), 1, 1.0)


@pytest.mark.parametrize("spec", [Gamma(5, 5), Gamma(2, 2), Gamma(1.5, 0.8), InverseGaussian(1, 1), InverseGaussian(2, 0.5), InverseGaussian(0.6, 2)])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_density_integrates_to_one(spec, t):
    total = integrate.quad(lambda v: subordinator_density(spec, t, v), 0, np.inf, limit=400, epsabs=1e-12)[0]
    assert total == pytest.approx(1.0, abs=1e-6)


def test_tcbm_cf_values():
    assert tcbm_cf(TcbmSpec(0, Deterministic(1)), 1, 1) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert tcbm_cf(TcbmSpec(0, Gamma(5, 5)), 1, 1) == pytest.approx(1.1**-5, rel=1e-14)
    assert tcbm_cf(TcbmSpec(0, Gamma(5, 5)), 1, 1) == pytest.approx(0.620921, abs=1e-6)
    assert tcbm_cf(TcbmSpec(0.4, InverseGaussian(1, 1)), 2, 0) == 1


def test_tcbm_cf_monte_carlo():
    spec = TcbmSpec(0, Gamma(5, 5))
    x = sample_tcbm_increments(spec, 1, 10**6, seed=21)
    assert abs(np.mean(np.exp(1j * x)) - tcbm_cf(spec, 1, 1)) < 4 / math.sqrt(x.size)


@pytest.mark.parametrize("spec", [TcbmSpec(0.0, Gamma(5, 5)), TcbmSpec(0.5, Gamma(2, 2)), TcbmSpec(-0.3, InverseGaussian(1, 1)), TcbmSpec(1.0, Deterministic(1))])
def test_tcbm_cf_monte_carlo_grid(spec):
    n = 10**5
    x = sample_tcbm_increments(spec, 1.0, n, seed=31)
    for w in np.linspace(-5, 5, 11):
        assert abs(np.mean(np.exp(1j * w * x)) - tcbm_cf(spec, 1.0, w)) < 4 / math.sqrt(n)


def test_panel_validation():
    with pytest.raises(ParameterError):
        IncrementPanel({0.0: [1.0]})
    with pytest.raises(ParameterError):
        IncrementPanel({1.0: []})
    with pytest.raises(ParameterError):
        IncrementPanel({1.0: [float("nan")]})
    p = IncrementPanel({2: [1, 2], 1: [3]})
    assert p.lags == [2.0, 1.0] and list(p[2]) == [1.0, 2.0]
