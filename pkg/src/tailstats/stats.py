"""From matrix draws to spectral statistics.

Eigenvalues, the scaling windows (macroscopic, soft edge, inverted tail,
unfolded), histograms that merge exactly across workers, k-indexed spacing
series, rank-run clusters and Kolmogorov-Smirnov distances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats as sps
from scipy.linalg import eigvalsh_tridiagonal

from .densities import AnalyticDensity, unfolding_constant, unfolding_map
from .ensembles import ComplexMatrix, EnsembleSpec
from .stable import StableSpec, sample_one_sided_stable

__all__ = [
    "NonHermitianInput",
    "SpectrumSample",
    "DensityEstimate",
    "SpacingSeries",
    "eigenvalues",
    "gue_tridiagonal_eigenvalues",
    "stable_gue_tridiagonal_eigenvalues",
    "inverse_ginibre_gram_eigenvalues",
    "direct_sum_fast_eigenvalues",
    "macroscopic_transform",
    "soft_edge_transform",
    "tail_transform",
    "unfold",
    "histogram",
    "bin_edges",
    "spacing_distribution",
    "cluster_group",
    "within_cluster_indices",
    "between_cluster_indices",
    "ks_two_sample",
    "ks_against_density",
    "ks_uniform",
    "mean_extreme_position",
    "wigner_surmise_sample",
]

VARIABLE_TAGS = ("macroscopic", "soft_edge", "inverted_tail", "unfolded", "spacing")


class NonHermitianInput(ValueError):
    """The matrix handed to the Hermitian eigensolver is not Hermitian."""


@dataclass
class SpectrumSample:
    """Sorted eigenvalues of one draw together with what produced them."""

    eigenvalues: np.ndarray
    ensemble: EnsembleSpec
    seed: int = 0
    trial: int = 0

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1:
            raise ValueError("eigenvalues must be one dimensional")
        if ev.size > 1 and np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        self.eigenvalues = ev


# ---------------------------------------------------------------------------
# eigenvalues


def eigenvalues(m: ComplexMatrix, rtol: float = 1e-12) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian or block-diagonal Hermitian matrix.

    Blocks are diagonalised one at a time and merged.
    """
    if m.structure_tag == "general":
        raise NonHermitianInput("structure tag 'general' carries no Hermitian guarantee")
    if not m.is_hermitian(rtol):
        raise NonHermitianInput("matrix deviates from Hermitian beyond tolerance")
    mats = m.blocks if m.structure_tag == "block_diagonal" else [m.entries]
    parts = [np.linalg.eigvalsh(A) for A in mats]
    return np.sort(np.concatenate(parts)) if len(parts) > 1 else parts[0]


def _chi(rng, dof, size=None):
    return np.sqrt(rng.chisquare(dof, size))


def gue_tridiagonal_eigenvalues(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """GUE eigenvalues from the Householder-reduced tridiagonal model.

    Diagonal N(0, sigma^2), off-diagonal sigma chi_{2k}/sqrt(2), k = n-1..1;
    the eigenvalue law equals that of ``sample_gue`` (not draw-for-draw).
    """
    d = rng.standard_normal(n) * sigma
    if n == 1:
        return d
    e = _chi(rng, 2.0 * np.arange(n - 1, 0, -1)) * (sigma / np.sqrt(2.0))
    return eigvalsh_tridiagonal(d, e)


def stable_gue_tridiagonal_eigenvalues(n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Stable GUE eigenvalues sqrt(x) * eig(H) using the tridiagonal GUE model."""
    x = sample_one_sided_stable(StableSpec(0.5 * alpha), rng)
    return np.sqrt(x) * gue_tridiagonal_eigenvalues(n, 1.0, rng)


def inverse_ginibre_gram_eigenvalues(n: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of X^dagger X for one inverse Ginibre factor, ascending.

    X^dagger X = (G G^dagger)^{-1}, and the eigenvalues of G G^dagger follow
    from a bidiagonal model B with B_kk = chi_{2(n-k+1)}/sqrt(2) and
    B_{k+1,k} = chi_{2(n-k)}/sqrt(2).  The tridiagonal B B^T is diagonalised.
    """
    b = _chi(rng, 2.0 * np.arange(n, 0, -1)) / np.sqrt(2.0)
    c = _chi(rng, 2.0 * np.arange(n - 1, 0, -1)) / np.sqrt(2.0) if n > 1 else np.empty(0)
    # lower bidiagonal B: T = B B^T has diag b_k^2 + c_{k-1}^2, offdiag b_k c_k
    d = b**2
    d[1:] += c**2
    e = b[:-1] * c
    w = eigvalsh_tridiagonal(d, e) if n > 1 else d
    return np.sort(1.0 / w)


def direct_sum_fast_eigenvalues(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """Direct-sum spectrum for M = 1 from L independent bidiagonal draws."""
    if spec.m != 1:
        raise ValueError("the bidiagonal shortcut exists only for M = 1")
    scale = float(spec.l) ** (-2)
    parts = [inverse_ginibre_gram_eigenvalues(spec.n, rng) * scale for _ in range(spec.l)]
    return np.sort(np.concatenate(parts))


# ---------------------------------------------------------------------------
# scaling windows


def _values(s) -> np.ndarray:
    return s.eigenvalues if isinstance(s, SpectrumSample) else np.asarray(s, dtype=float)


def macroscopic_transform(s: SpectrumSample) -> np.ndarray:
    """N lambda for sums, N^M lambda for product chains, lambda/sqrt(N) for (stable) GUE."""
    spec = s.ensemble
    if spec.kind.startswith("inverse_ginibre"):
        return s.eigenvalues * float(spec.n) ** spec.m
    return s.eigenvalues / np.sqrt(spec.n)


SOFT_EDGE_SCALES = {
    # fluctuation scale of the smallest eigenvalue of (G G^dagger)^{-1}
    "tracy-widom": lambda n: (2.0 * n) ** (2.0 / 3.0),
    # the prefactor N^{2/3} / 2^{1/3}, kept for comparison
    "half": lambda n: n ** (2.0 / 3.0) / 2.0 ** (1.0 / 3.0),
}


def soft_edge_transform(s, n: int | None = None, scale: str = "tracy-widom") -> np.ndarray:
    """s_i = C_N (1 - 4 N lambda_i) around the soft edge lambda = 1/(4N).

    Works on Y_L for any L (the L^{-2} factor is already part of Y_L).  The
    default C_N = (2N)^{2/3} puts the smallest eigenvalues on the Airy scale;
    ``scale="half"`` uses N^{2/3}/2^{1/3}.
    """
    if isinstance(s, SpectrumSample):
        n = s.ensemble.n
    if n is None:
        raise ValueError("n is required for raw eigenvalue arrays")
    lam = _values(s)
    return SOFT_EDGE_SCALES[scale](n) * (1.0 - 4.0 * n * lam)


def tail_transform(s, m: int = 1, n: int | None = None, inverted: bool = False) -> np.ndarray:
    """z_i = (N^{1/(M+1)} / c_M) lambda_i^{-1/(M+1)}; ``inverted`` returns 1/z.

    Large eigenvalues map to small z with mean spacing close to one.
    """
    if isinstance(s, SpectrumSample):
        n, m = s.ensemble.n, s.ensemble.m
    if n is None:
        raise ValueError("n is required for raw eigenvalue arrays")
    lam = _values(s)
    z = float(n) ** (1.0 / (m + 1)) / unfolding_constant(m) * lam ** (-1.0 / (m + 1))
    return 1.0 / z if inverted else z


def unfold(s, alpha: float, n: int | None = None) -> np.ndarray:
    """Map a stable GUE spectrum into (-1/2, 1/2) through mu(lambda / sqrt(N))."""
    if isinstance(s, SpectrumSample):
        n = s.ensemble.n
    if n is None:
        raise ValueError("n is required for raw eigenvalue arrays")
    return unfolding_map(_values(s) / np.sqrt(n), alpha)


# ---------------------------------------------------------------------------
# histograms


@dataclass
class DensityEstimate:
    """Histogram over one spectral variable with exact integer counts.

    ``total_weight`` is the normaliser (number of draws for per-draw
    densities, number of values for probability densities).
    """

    variable_tag: str
    bin_edges: np.ndarray
    counts: np.ndarray
    total_weight: float
    normalization: str = "per-draw"

    def __post_init__(self):
        if self.variable_tag not in VARIABLE_TAGS:
            raise ValueError(f"unknown variable tag {self.variable_tag!r}")
        self.bin_edges = np.asarray(self.bin_edges, dtype=float)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (self.bin_edges.size - 1,):
            raise ValueError("need one count per bin")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def bin_width(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def normalized_height(self) -> np.ndarray:
        if self.total_weight <= 0:
            return np.zeros(self.counts.shape)
        return self.counts / (self.total_weight * self.bin_width)

    def merge(self, other: "DensityEstimate") -> "DensityEstimate":
        if (other.variable_tag != self.variable_tag or other.normalization != self.normalization
                or not np.array_equal(other.bin_edges, self.bin_edges)):
            raise ValueError("can only merge histograms on the same grid and variable")
        return DensityEstimate(self.variable_tag, self.bin_edges, self.counts + other.counts,
                               self.total_weight + other.total_weight, self.normalization)


def histogram(values, edges, variable_tag: str, total_weight: float,
              normalization: str = "per-draw") -> DensityEstimate:
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=np.asarray(edges, dtype=float))
    return DensityEstimate(variable_tag, edges, counts, total_weight, normalization)


def bin_edges(lo: float, hi: float, width: float) -> np.ndarray:
    """Left-anchored grid lo, lo + w, ... covering [lo, hi]."""
    if not width > 0:
        raise ValueError("bin width must be positive")
    nb = int(np.ceil((hi - lo) / width - 1e-9))
    # rounding keeps the CSV edges free of accumulated representation noise
    return np.round(lo + width * np.arange(nb + 1), 12)


# ---------------------------------------------------------------------------
# spacings and clusters


@dataclass
class SpacingSeries:
    """Spacings between the kth and (k+1)st ordered value, divided by their mean."""

    k: int
    values: np.ndarray
    normalization: float = 1.0
    raw: np.ndarray = field(default=None, repr=False)

    @property
    def standard_error(self) -> float:
        return float(np.std(self.values, ddof=1) / np.sqrt(self.values.size)) if self.values.size > 1 else np.inf


def _ordered(x: np.ndarray, from_end: str) -> np.ndarray:
    x = np.sort(np.asarray(x, dtype=float))
    if from_end == "low":
        return x
    if from_end == "high":
        return x[::-1]
    raise ValueError("from_end must be 'low' or 'high'")


def spacing_distribution(samples: Iterable, k: int, from_end: str = "low",
                         normalize: bool = True) -> SpacingSeries:
    """Spacing between the kth and (k+1)st value counted from ``from_end``.

    ``samples`` is an iterable of 1-d spectra already in the unfolded
    variable.  Each spacing is divided by the empirical mean at this k.
    """
    if k < 1:
        raise ValueError("k counts from 1")
    raw = []
    for x in samples:
        x = _ordered(_values(x), from_end)
        if x.size > k:
            raw.append(abs(x[k] - x[k - 1]))
    raw = np.asarray(raw, dtype=float)
    mean = float(raw.mean()) if raw.size and normalize else 1.0
    return SpacingSeries(k, raw / mean, mean, raw)


def cluster_group(values, L: int, from_end: str = "low", n_clusters: int | None = None) -> list:
    """Consecutive rank runs of length L starting at the tail end.

    Cluster j holds ranks (j-1)L+1 ... jL; an incomplete final run is dropped.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    x = _ordered(_values(values), from_end)
    nc = x.size // L if n_clusters is None else min(n_clusters, x.size // L)
    return [x[j * L:(j + 1) * L] for j in range(nc)]


def within_cluster_indices(L: int, n_clusters: int = 1) -> list[int]:
    """Spacing indices k whose two eigenvalues sit in the same cluster."""
    return [j * L + i for j in range(n_clusters) for i in range(1, L)]


def between_cluster_indices(L: int, n_clusters: int = 2) -> list[int]:
    """Spacing indices k that bridge cluster j and cluster j+1."""
    return [j * L for j in range(1, n_clusters)]


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov distances


def ks_two_sample(a, b) -> float:
    """Two-sample KS distance sup |F_a - F_b|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    return float(sps.ks_2samp(a, b).statistic)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _panel_integrals(f: Callable, grid: np.ndarray) -> np.ndarray:
    lo, hi = grid[:-1], grid[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return (vals * _GL_W[None, :]).sum(axis=1) * half


def _cdf_on_grid(f: Callable, a: float, b: float, n_panels: int):
    """CDF nodes of f on [a, b], finite or not, via 8-point Gauss-Legendre panels."""
    # map infinite ends through x = sinh(t) so the panels cover the tails
    ta = np.arcsinh(a) if np.isfinite(a) else -np.arcsinh(1e12)
    tb = np.arcsinh(b) if np.isfinite(b) else np.arcsinh(1e12)
    tgrid = np.linspace(ta, tb, n_panels + 1)

    def g(t):
        return f(np.sinh(t)) * np.cosh(t)

    F = np.concatenate([[0.0], np.cumsum(_panel_integrals(g, tgrid))])
    return tgrid, F


def ks_against_density(values, d: AnalyticDensity | Callable, window=None, n_panels: int = 4000) -> float:
    """One-sample KS distance between ``values`` and the density ``d``.

    The density is integrated numerically; with a ``window`` (lo, hi) both
    the data and the density are conditioned on it, which allows comparison
    with per-eigenvalue densities of infinite mass.
    """
    x = np.sort(np.asarray(values, dtype=float))
    if isinstance(d, AnalyticDensity):
        f = d
        a, b = d.support
    else:
        f = d
        a, b = -np.inf, np.inf
    if window is not None:
        a, b = max(a, window[0]), min(b, window[1])
        x = x[(x >= a) & (x <= b)]
    if x.size == 0:
        raise ValueError("no values inside the comparison window")
    tgrid, F = _cdf_on_grid(f, a, b, n_panels)
    total = F[-1]
    if not total > 0:
        raise ValueError("density has no mass on the comparison window")
    # CDF at each sample: cumulative panels up to its node plus one partial panel
    t = np.arcsinh(x)
    j = np.clip(np.searchsorted(tgrid, t) - 1, 0, tgrid.size - 2)
    part = _partial(f, tgrid[j], t)
    cdf = (F[j] + part) / total
    n = x.size
    i = np.arange(1, n + 1)
    cdf = np.clip(cdf, 0.0, 1.0)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def _partial(f, t0, t1):
    """int_{t0}^{t1} f(sinh t) cosh t dt elementwise, 8-point Gauss-Legendre."""
    half = 0.5 * (t1 - t0)
    mid = 0.5 * (t1 + t0)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    u = nodes.ravel()
    vals = (np.asarray(f(np.sinh(u)), dtype=float) * np.cosh(u)).reshape(nodes.shape)
    return (vals * _GL_W[None, :]).sum(axis=1) * half


def ks_uniform(values, lo: float = -0.5, hi: float = 0.5) -> float:
    """KS distance to the uniform law on (lo, hi)."""
    return float(sps.kstest(np.asarray(values, dtype=float), "uniform", args=(lo, hi - lo)).statistic)


def wigner_surmise_sample(size: int, rng: np.random.Generator) -> np.ndarray:
    """Exact draws from (32/pi^2) s^2 exp(-4 s^2/pi).

    That density is a chi law with three degrees of freedom scaled by sqrt(pi/8).
    """
    return np.sqrt(np.pi / 8.0 * rng.chisquare(3.0, size))


def mean_extreme_position(samples: Sequence, alpha: float) -> tuple[float, float]:
    """Mean unfolded position of the largest and of the smallest eigenvalue."""
    hi, lo = [], []
    for s in samples:
        mu = unfold(s, alpha) if isinstance(s, SpectrumSample) else np.asarray(s, dtype=float)
        hi.append(np.max(mu))
        lo.append(np.min(mu))
    return float(np.mean(hi)), float(np.mean(lo))
