import warnings

import numpy as np
import pytest

from tailstats import freeprob as fp
from tailstats.ensembles import EnsembleSpec, sample_gue, trial_rng
from tailstats.stats import gue_tridiagonal_eigenvalues, inverse_ginibre_gram_eigenvalues

Y = fp.DEFAULT_Y_GRID


def _pool(draw, trials, seed, n):
    rows = [draw(trial_rng(seed, "freeprob-test", t)) for t in range(trials)]
    return fp.EmpiricalGreen(np.concatenate(rows), trials, n)


@pytest.fixture(scope="module")
def semicircle():
    n = 200
    return _pool(lambda r: gue_tridiagonal_eigenvalues(n, 1.0, r) / np.sqrt(n), 300, 0, n)


@pytest.fixture(scope="module")
def inverse_gram():
    # macroscopic eigenvalues N lambda of X^dagger X, one inverse Ginibre factor
    n = 200
    return _pool(lambda r: n * inverse_ginibre_gram_eigenvalues(n, r), 1000, 1, n)


@pytest.fixture(scope="module")
def product_two():
    n = 100
    return fp.macroscopic_pool(EnsembleSpec("inverse_ginibre_sum", n, m=2), 400, seed=2)


def test_y_grid_has_ten_points_in_lower_half_plane():
    assert Y.size == 10 and np.all(Y.imag < 0)


def test_semicircle_green_at_2i(semicircle):
    z = 2j
    oracle = (z - np.sqrt(z * z - 4)) / 2  # branch with G ~ 1/z
    assert oracle == pytest.approx(1j * (1 - np.sqrt(2)))
    assert abs(semicircle(z) - oracle) / abs(oracle) < 0.01


def test_herglotz(semicircle, inverse_gram, product_two):
    z = np.array([0.5 + 0.1j, -3 + 1j, 2j, 10 + 0.2j])
    for g in (semicircle, inverse_gram, product_two):
        assert g.estimate(z).herglotz()


def test_green_normalisation_far_away(semicircle):
    z = 100.0 * np.exp(1j * np.array([0.3, 1.2, 2.5]))
    np.testing.assert_allclose(z * semicircle(z), 1.0, atol=1e-3)


def test_empirical_green_helper():
    rows = [np.array([1.0, 2.0]), np.array([3.0, 4.0])]
    est = fp.empirical_green(rows, [1j])
    assert est.sample_size == 2 and est.n == 2
    assert est.values[0] == pytest.approx(np.mean([1 / (1j - v) for v in (1, 2, 3, 4)]))


def test_semicircle_r_is_identity(semicircle):
    r = fp.r_transform_curve(semicircle, Y)
    assert fp.max_relative_deviation(r, Y) < 0.02


def test_inverse_gram_r_transform(inverse_gram):
    ref = fp.reference_r(1)
    assert ref(-1.0) == pytest.approx(1.0)  # R is positive on the negative axis
    assert fp.r_fixed_point_deviation(inverse_gram, 1) < 0.03


def test_product_of_two_r_transform(product_two):
    assert fp.r_fixed_point_deviation(product_two, 2) < 0.05


def test_reference_branch_is_continuous_in_lower_half_plane():
    theta = np.linspace(-np.pi + 1e-9, 0, 400)
    r = fp.reference_r(2)(0.3 * np.exp(1j * theta))
    assert np.max(np.abs(np.diff(r))) < 0.05


def test_additivity_of_two_gues():
    n = 200
    draw = lambda r: sample_gue(n, 1.0, r).entries
    dev = fp.check_r_additivity(draw, draw, Y, trials=150, scale=1 / np.sqrt(n), r_guess=lambda y: y)
    assert dev < 0.03


def test_additivity_with_zero_is_exact():
    n = 30
    draw = lambda r: sample_gue(n, 1.0, r).entries
    zero = lambda r: np.zeros((n, n), dtype=complex)
    assert fp.check_r_additivity(draw, zero, Y, trials=20, scale=1 / np.sqrt(n), r_guess=lambda y: y) < 1e-9


def test_sum_has_same_r_transform_as_single_copy():
    n = 100
    g1 = fp.macroscopic_pool(EnsembleSpec("inverse_ginibre_sum", n, l=1), 300, seed=3)
    g2 = fp.macroscopic_pool(EnsembleSpec("inverse_ginibre_sum", n, l=2), 300, seed=4)
    ref = fp.reference_r(1)
    r1 = fp.r_transform_curve(g1, Y, ref)
    r2 = fp.r_transform_curve(g2, Y, ref)
    assert fp.max_relative_deviation(r2, r1) < 0.05


def test_scaling_rule(semicircle):
    assert fp.check_r_scaling(semicircle, 1.0, Y) == pytest.approx(0.0, abs=1e-9)
    assert fp.check_r_scaling(semicircle, 2.0, 0.5 * Y, r_of_a=lambda y: y) < 0.03


def test_scaling_reproduces_stability(inverse_gram):
    # scaling the single-copy pool by 1/L^{1/alpha} = L^{-2} and summing L copies
    # gives back the same transform; here the scaling half is checked against the reference
    ref = fp.reference_r(1)
    mu = 0.25
    dev = fp.check_r_scaling(inverse_gram, mu, Y / mu, r_of_a=ref)
    assert dev < 0.03


@pytest.mark.parametrize("chi", [-0.2, -0.5, -0.8])
def test_s_transform_of_gram(inverse_gram, chi):
    s = fp.s_transform_numeric(lambda y: fp.r_transform_numeric(inverse_gram, y), chi)
    assert s == pytest.approx(-chi, rel=0.05)


@pytest.mark.parametrize("chi", [-0.2, -0.5, -0.8])
def test_s_transform_is_multiplicative(product_two, chi):
    s = fp.s_transform_numeric(lambda y: fp.r_transform_numeric(product_two, y), chi)
    assert s == pytest.approx(chi**2, rel=0.08)


def test_s_transform_of_identity():
    ident = fp.EmpiricalGreen(np.ones(10), 1, 10)
    for chi in (-0.3, -0.7):
        assert fp.s_transform_numeric(lambda y: fp.r_transform_numeric(ident, y), chi) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        fp.s_transform_numeric(lambda y: y, 0.5)


def test_failed_root_is_flagged_not_dropped(semicircle):
    with pytest.warns(fp.RootFindWarning):
        r = fp.r_transform_numeric(semicircle, 0.3 + 0.3j)
    assert np.isnan(r)
    with pytest.warns(fp.RootFindWarning, match="1 of 3"):
        out = fp.r_transform_curve(semicircle, [Y[0], 0.3 + 0.3j, Y[1]])
    assert np.isnan(out[1]) and np.all(np.isfinite(out[[0, 2]]))
    with pytest.raises(ValueError):
        fp.r_transform_numeric(semicircle, 0.0)


def test_r_stable_under_doubling_the_sample():
    n = 200
    draw = lambda r: n * inverse_ginibre_gram_eigenvalues(n, r)
    ref = fp.reference_r(1)
    half = fp.r_transform_curve(_pool(draw, 500, 5, n), Y, ref)
    full = fp.r_transform_curve(_pool(draw, 1000, 5, n), Y, ref)
    with warnings.catch_warnings():
        warnings.simplefilter("error", fp.RootFindWarning)
        assert fp.max_relative_deviation(half, full) < 0.03
