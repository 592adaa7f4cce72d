import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from tailstats import ensembles as ens
from tailstats.ensembles import (
    EnsembleSpec,
    NearSingular,
    rejection_count,
    sample,
    sample_direct_sum,
    sample_ginibre,
    sample_gue,
    sample_inverse_ginibre,
    sample_stable_gue,
    sample_sum_Y,
    trial_rng,
)
from tailstats.stats import eigenvalues, stable_gue_tridiagonal_eigenvalues


def test_ginibre_entry_moments():
    G = sample_ginibre(400, np.random.default_rng(0)).entries
    assert np.mean(np.abs(G) ** 2) == pytest.approx(1.0, abs=0.01)
    assert abs(np.mean(G)) < 0.01
    assert abs(np.mean(G**2)) < 0.01


def test_scalar_inverse_ginibre_gives_exponential():
    rng = np.random.default_rng(1)
    x = np.array([sample_inverse_ginibre(1, rng).entries[0, 0] for _ in range(20_000)])
    # X^dagger X = 1/|g|^2 and |g|^2 is exponential with unit mean
    assert stats.kstest(np.abs(x) ** -2, "expon").statistic < 0.015


def test_inverse_is_inverse():
    rng = np.random.default_rng(2)
    for n in (3, 20, 100):
        r1, r2 = np.random.default_rng(n), np.random.default_rng(n)
        G = sample_ginibre(n, r1).entries
        X = sample_inverse_ginibre(n, r2).entries
        np.testing.assert_allclose(G @ X, np.eye(n), atol=1e-9)


def test_near_singular_is_rejected():
    with pytest.raises(NearSingular):
        ens._checked_inverse(np.array([[1.0, 1.0], [1.0, 1.0 + 1e-16]], dtype=complex))


@pytest.mark.parametrize("m,l", [(1, 1), (1, 3), (2, 2), (3, 1)])
def test_sum_is_hermitian_positive_definite(m, l):
    rng = np.random.default_rng(3)
    for _ in range(5):
        Y = sample_sum_Y(EnsembleSpec("inverse_ginibre_sum", 12, m=m, l=l), rng)
        assert Y.structure_tag == "hermitian_positive_definite"
        assert np.array_equal(Y.entries, Y.entries.conj().T)
        assert np.all(eigenvalues(Y) > 0)


def test_direct_sum_with_one_block_equals_sum_draw_for_draw():
    spec = EnsembleSpec("inverse_ginibre_direct_sum", 15, m=2, l=1)
    a = sample_sum_Y(spec, trial_rng(9, "x", 4))
    b = sample_direct_sum(spec, trial_rng(9, "x", 4))
    assert np.array_equal(eigenvalues(a), eigenvalues(b))


def test_direct_sum_block_structure():
    spec = EnsembleSpec("inverse_ginibre_direct_sum", 10, m=1, l=3)
    D = sample(spec, np.random.default_rng(4))
    assert D.structure_tag == "block_diagonal" and D.n == 30
    ev = eigenvalues(D)
    assert ev.size == 30
    union = np.sort(np.concatenate([np.linalg.eigvalsh(B) for B in D.blocks]))
    np.testing.assert_allclose(ev, union, rtol=0, atol=0)


def test_unitary_invariance_of_diagonal_entry():
    rng = np.random.default_rng(5)
    spec = EnsembleSpec("inverse_ginibre_sum", 2)
    theta = 0.7
    U = np.array([[np.cos(theta), 1j * np.sin(theta)], [1j * np.sin(theta), np.cos(theta)]])
    y11, uy11 = np.empty(100_000), np.empty(100_000)
    for i in range(y11.size):
        Y = sample_sum_Y(spec, rng).entries
        y11[i] = Y[0, 0].real
        uy11[i] = (U @ Y @ U.conj().T)[0, 0].real
    assert stats.ks_2samp(y11, uy11).statistic < 0.02


@pytest.mark.slow
def test_no_rejections_in_a_million_draws():
    rng = np.random.default_rng(6)
    before = rejection_count()
    for _ in range(1_000_000):
        sample_inverse_ginibre(2, rng)
    for n in (100, 500):
        for _ in range(20):
            sample_inverse_ginibre(n, rng)
    assert rejection_count() == before


def test_gue_scalar_variance():
    rng = np.random.default_rng(7)
    x = np.array([sample_gue(1, 1.5, rng).entries[0, 0] for _ in range(40_000)])
    assert np.all(x.imag == 0)
    assert np.var(x.real) == pytest.approx(2.25, rel=0.03)


def test_gue_trace_square():
    rng = np.random.default_rng(8)
    n, sigma = 10, 1.5
    tr = [np.sum(np.abs(sample_gue(n, sigma, rng).entries) ** 2) for _ in range(10_000)]
    assert np.mean(tr) == pytest.approx(sigma**2 * n**2, rel=0.02)


def test_gue_semicircle():
    rng = np.random.default_rng(9)
    n = 500
    ev = np.concatenate([eigenvalues(sample_gue(n, 1.0, rng)) for _ in range(10)]) / np.sqrt(n)
    semicircle_cdf = lambda x: 0.5 + (x * np.sqrt(4 - x**2) / 4 + np.arcsin(x / 2)) / np.pi
    assert stats.kstest(ev, lambda x: semicircle_cdf(np.clip(x, -2, 2))).statistic < 0.02


def test_gue_rejects_bad_sigma():
    with pytest.raises(ValueError):
        sample_gue(3, 0.0, np.random.default_rng())


def test_stable_gue_hermitian_and_symmetric():
    rng = np.random.default_rng(10)
    signs = []
    for _ in range(300):
        H = sample_stable_gue(20, 1.5, rng)
        assert H.is_hermitian()
        signs.append(np.mean(eigenvalues(H) > 0))
    signs = np.array(signs)
    assert abs(signs.mean() - 0.5) < 3 * signs.std() / np.sqrt(signs.size)


@pytest.mark.slow
def test_stable_gue_density_at_origin():
    # the count per draw scales like x^{-1/2} (coefficient of variation 0.76),
    # so 16000 draws put the standard error near 0.6%
    rng = np.random.default_rng(11)
    n, w = 500, 0.05
    per_draw = []
    for _ in range(16_000):
        lam = stable_gue_tridiagonal_eigenvalues(n, 1.0, rng) / np.sqrt(n)
        per_draw.append(np.sum(np.abs(lam) < w) / (n * 2 * w))
    assert 2 / (np.pi * np.sqrt(2 * np.pi)) == pytest.approx(0.2540, abs=1e-4)
    assert np.mean(per_draw) == pytest.approx(0.2540, rel=0.02)


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("stable_gue", 10, alpha=2.0)
    with pytest.raises(ValueError):
        EnsembleSpec("nope", 10)
    with pytest.raises(ValueError):
        EnsembleSpec("inverse_ginibre_sum", 0)
    assert EnsembleSpec("inverse_ginibre_sum", 5, m=3).stability_exponent == 0.25


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), trial=st.integers(0, 10**6), kind=st.sampled_from(ens.KINDS))
def test_determinism(seed, trial, kind):
    spec = EnsembleSpec(kind, 6, m=2, l=2, alpha=1.2)
    a = sample(spec, trial_rng(seed, "det", trial)).dense()
    b = sample(spec, trial_rng(seed, "det", trial)).dense()
    assert np.array_equal(a, b)


def test_trial_streams_differ():
    x = [trial_rng(0, "e", t).standard_normal() for t in range(3)]
    y = trial_rng(0, "f", 0).standard_normal()
    assert len(set(x + [y])) == 4
