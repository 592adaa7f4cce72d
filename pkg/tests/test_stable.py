import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special, stats

from tailstats.stable import (
    StableSpec,
    sample_one_sided_stable,
    stable_cdf,
    stable_cf,
    stable_negative_moment,
    stable_pdf,
    stable_sf,
    tail_constant,
)

ALPHAS = [0.25, 0.5, 0.75]


def test_spec_rejects_exponent_outside_unit_interval():
    for bad in (0.0, 1.0, 1.5, -0.2):
        with pytest.raises(ValueError):
            StableSpec(bad)


def test_levy_cdf_at_one():
    x = sample_one_sided_stable(StableSpec(0.5), np.random.default_rng(1), 100_000)
    assert np.mean(x <= 1.0) == pytest.approx(special.erfc(1 / np.sqrt(2)), abs=0.01)
    assert special.erfc(1 / np.sqrt(2)) == pytest.approx(0.3173, abs=1e-4)


@pytest.mark.parametrize("a", ALPHAS)
def test_draws_positive(a):
    x = sample_one_sided_stable(StableSpec(a), np.random.default_rng(2), 100_000)
    assert np.all(x > 0)


@pytest.mark.parametrize("a", ALPHAS)
def test_empirical_characteristic_function(a):
    spec = StableSpec(a)
    x = sample_one_sided_stable(spec, np.random.default_rng(3), 1_000_000)
    emp = np.mean(np.exp(1j * x))
    assert abs(emp - stable_cf(spec, 1.0)) < 0.01


def test_cf_at_zero_and_laplace_branch():
    spec = StableSpec(0.5)
    assert stable_cf(spec, 0.0) == 1.0
    t = np.array([0.1, 1.0, 4.0])
    np.testing.assert_allclose(stable_cf(spec, 1j * t), np.exp(-np.sqrt(2 * t)), rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.05, 0.95), w=st.floats(-1e3, 1e3))
def test_cf_bounded(a, w):
    assert abs(stable_cf(StableSpec(a), w)) <= 1.0 + 1e-12


@pytest.mark.parametrize("a", ALPHAS)
def test_stability_under_addition(a):
    spec = StableSpec(a)
    rng = np.random.default_rng(4)
    x1, x2, x = (sample_one_sided_stable(spec, rng, 100_000) for _ in range(3))
    ks = stats.ks_2samp((x1 + x2) / 2 ** (1 / a), x).statistic
    assert ks < 0.01


@pytest.mark.parametrize("a", ALPHAS)
def test_tail_slope(a):
    x = sample_one_sided_stable(StableSpec(a), np.random.default_rng(5), 1_000_000)
    grid = np.logspace(2, 4, 9)
    surv = np.array([np.mean(x > t) for t in grid])
    slope = np.polyfit(np.log(grid), np.log(surv), 1)[0]
    assert slope == pytest.approx(-a, abs=0.05)


def test_levy_density_closed_form():
    spec = StableSpec(0.5)
    x = np.array([0.05, 0.3, 1.0, 2.5, 10.0, 1e3, 1e6])
    np.testing.assert_allclose(stable_pdf(spec, x), stats.levy.pdf(x), rtol=1e-8)
    np.testing.assert_allclose(stable_cdf(spec, x), stats.levy.cdf(x), rtol=1e-8, atol=1e-14)


@pytest.mark.parametrize("a", [0.3, 0.7])
def test_density_against_scipy_levy_stable(a):
    x = np.array([0.2, 1.0, 3.0, 20.0])
    ref = stats.levy_stable.pdf(x, a, 1.0)
    np.testing.assert_allclose(stable_pdf(StableSpec(a), x), ref, rtol=1e-4)


@pytest.mark.parametrize("a", ALPHAS)
def test_density_normalised(a):
    spec = StableSpec(a)
    f = lambda t: stable_pdf(spec, t)[0]
    total = sum(integrate.quad(f, lo, hi, limit=400)[0] for lo, hi in [(0, 1), (1, 100), (100, 1e4)])
    total += stable_sf(spec, 1e4)[0]
    assert total == pytest.approx(1.0, abs=1e-6)
    assert np.all(stable_pdf(spec, [-1.0, 0.0]) == 0.0)


@pytest.mark.parametrize("a", ALPHAS)
def test_survival_function_matches_tail_constant(a):
    spec = StableSpec(a)
    x = 10.0 ** (4 / a)  # next series term is smaller by about x^-a
    assert stable_sf(spec, x)[0] * x**a == pytest.approx(tail_constant(spec), rel=1e-3)


@pytest.mark.parametrize("a", ALPHAS)
def test_negative_moment_monte_carlo(a):
    spec = StableSpec(a)
    x = sample_one_sided_stable(spec, np.random.default_rng(6), 400_000)
    y = x**-0.5
    assert np.mean(y) == pytest.approx(stable_negative_moment(spec, 0.5), abs=4 * y.std() / np.sqrt(y.size))
