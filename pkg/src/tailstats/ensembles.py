"""Random matrix ensembles: inverse Ginibre sums and direct sums, GUE, stable GUE.

Every sampler takes an explicit ``numpy.random.Generator``; trial ``t`` of an
experiment uses :func:`trial_rng`, so results never depend on how trials are
spread over workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import zlib

import numpy as np
from scipy.linalg import block_diag, lapack

from .stable import StableSpec, sample_one_sided_stable

__all__ = [
    "NearSingular",
    "ComplexMatrix",
    "EnsembleSpec",
    "trial_rng",
    "sample_ginibre",
    "sample_inverse_ginibre",
    "sample_product_chain",
    "sample_sum_Y",
    "sample_direct_sum",
    "sample_gue",
    "sample_stable_gue",
    "sample",
    "rejection_count",
]

COND_LIMIT = 1e14
_MAX_RETRIES = 100
_rejections = 0

KINDS = ("inverse_ginibre_sum", "inverse_ginibre_direct_sum", "gue", "stable_gue")
TAGS = ("general", "hermitian", "hermitian_positive_definite", "block_diagonal")


class NearSingular(ArithmeticError):
    """A Ginibre draw was too ill-conditioned to invert reliably."""


def rejection_count() -> int:
    """Number of near-singular Ginibre draws rejected in this process."""
    return _rejections


@dataclass
class ComplexMatrix:
    """Dense complex matrix, or an ordered list of Hermitian diagonal blocks."""

    entries: np.ndarray | None
    structure_tag: str = "general"
    blocks: list = field(default_factory=list)

    def __post_init__(self):
        if self.structure_tag not in TAGS:
            raise ValueError(f"unknown structure tag {self.structure_tag!r}")
        if self.structure_tag == "block_diagonal" and not self.blocks:
            raise ValueError("block_diagonal matrix needs blocks")

    @property
    def n(self) -> int:
        if self.structure_tag == "block_diagonal":
            return sum(b.shape[0] for b in self.blocks)
        return self.entries.shape[0]

    def dense(self) -> np.ndarray:
        if self.structure_tag == "block_diagonal":
            return block_diag(*self.blocks)
        return self.entries

    def is_hermitian(self, rtol: float = 1e-12) -> bool:
        mats = self.blocks if self.structure_tag == "block_diagonal" else [self.entries]
        for A in mats:
            scale = np.max(np.abs(A)) if A.size else 0.0
            if np.max(np.abs(A - A.conj().T)) > rtol * scale:
                return False
        return True


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to draw from, with its size parameters.

    ``m`` is the product length and ``l`` the number of summands for the
    inverse Ginibre ensembles, ``alpha`` the stability exponent of the stable
    GUE and ``sigma`` the GUE standard deviation.
    """

    kind: str
    n: int
    m: int = 1
    l: int = 1
    alpha: float | None = None
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 1 or self.m < 1 or self.l < 1:
            raise ValueError("n, m and l must all be >= 1")
        if self.kind == "stable_gue":
            if self.alpha is None or not 0.0 < self.alpha < 2.0:
                raise ValueError("stable_gue needs 0 < alpha < 2")
        if self.kind == "gue" and not self.sigma > 0:
            raise ValueError("gue needs sigma > 0")

    @property
    def stability_exponent(self) -> float:
        """alpha; for the inverse Ginibre ensembles this is 1/(M+1)."""
        if self.kind.startswith("inverse_ginibre"):
            return 1.0 / (self.m + 1)
        if self.kind == "stable_gue":
            return float(self.alpha)
        return 2.0

    def as_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "m": self.m, "l": self.l,
                "alpha": self.alpha, "sigma": self.sigma}


def trial_rng(master_seed: int, experiment: str, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from (seed, experiment, trial).

    The experiment name is hashed with CRC-32 so the derivation is stable
    across processes and Python versions.
    """
    tag = zlib.crc32(experiment.encode("utf-8"))
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), tag, int(trial)])
    return np.random.Generator(np.random.PCG64(ss))


# ---------------------------------------------------------------------------
# samplers


def sample_ginibre(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Complex Ginibre matrix with i.i.d. entries, density exp(-|x|^2)/pi."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = rng.standard_normal((n, n, 2))
    return ComplexMatrix((g[..., 0] + 1j * g[..., 1]) * np.sqrt(0.5), "general")


def _checked_inverse(G: np.ndarray) -> np.ndarray:
    """Inverse via LU, rejecting matrices with condition estimate > COND_LIMIT."""
    anorm = np.max(np.sum(np.abs(G), axis=0))
    lu, piv, info = lapack.zgetrf(G)
    if info > 0:
        raise NearSingular("exactly singular LU factor")
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or rcond * COND_LIMIT < 1.0:
        raise NearSingular(f"condition estimate {1.0 / max(rcond, 1e-300):.3g}")
    inv, info = lapack.zgetri(lu, piv)
    if info != 0:
        raise NearSingular("zgetri failed")
    return inv


def sample_inverse_ginibre(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Inverse of a Ginibre draw; ill-conditioned draws are resampled."""
    global _rejections
    for _ in range(_MAX_RETRIES):
        G = sample_ginibre(n, rng).entries
        try:
            return ComplexMatrix(_checked_inverse(G), "general")
        except NearSingular:
            _rejections += 1
    raise NearSingular(f"{_MAX_RETRIES} consecutive near-singular draws")


def sample_product_chain(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """X^{(M)} = X_M ... X_1 of independent inverse Ginibre factors."""
    X = sample_inverse_ginibre(n, rng).entries
    for _ in range(m - 1):
        X = sample_inverse_ginibre(n, rng).entries @ X
    return X


def _gram(X: np.ndarray) -> np.ndarray:
    return X.conj().T @ X


def _symmetrize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.conj().T)


def sample_sum_Y(spec: EnsembleSpec, rng: np.random.Generator) -> ComplexMatrix:
    """Y = L^{-(M+1)} sum_l (X_l^{(M)})^dagger X_l^{(M)}."""
    if spec.kind not in ("inverse_ginibre_sum", "inverse_ginibre_direct_sum"):
        raise ValueError("sample_sum_Y needs an inverse Ginibre spec")
    acc = _gram(sample_product_chain(spec.n, spec.m, rng))
    for _ in range(spec.l - 1):
        acc += _gram(sample_product_chain(spec.n, spec.m, rng))
    acc *= float(spec.l) ** (-(spec.m + 1))
    return ComplexMatrix(_symmetrize(acc), "hermitian_positive_definite")


def sample_direct_sum(spec: EnsembleSpec, rng: np.random.Generator) -> ComplexMatrix:
    """Block-diagonal matrix of the L independent Gram matrices.

    Blocks carry the same L^{-(M+1)} factor as the sum, and the generator is
    consumed in the same order, so L = 1 reproduces ``sample_sum_Y``
    draw for draw.
    """
    if spec.kind not in ("inverse_ginibre_sum", "inverse_ginibre_direct_sum"):
        raise ValueError("sample_direct_sum needs an inverse Ginibre spec")
    scale = float(spec.l) ** (-(spec.m + 1))
    blocks = []
    for _ in range(spec.l):
        W = _gram(sample_product_chain(spec.n, spec.m, rng))
        W *= scale
        blocks.append(_symmetrize(W))
    return ComplexMatrix(None, "block_diagonal", blocks)


def sample_gue(n: int, sigma: float, rng: np.random.Generator) -> ComplexMatrix:
    """GUE matrix with weight exp(-tr H^2 / (2 sigma^2))."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    A = sample_ginibre(n, rng).entries
    H = (A + A.conj().T) * (sigma / np.sqrt(2.0))
    return ComplexMatrix(H, "hermitian")


def sample_stable_gue(n: int, alpha: float, rng: np.random.Generator) -> ComplexMatrix:
    """sqrt(x) H with x one-sided stable of exponent alpha/2 and H ~ GUE(1)."""
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    x = sample_one_sided_stable(StableSpec(0.5 * alpha), rng)
    H = sample_gue(n, 1.0, rng).entries
    return ComplexMatrix(np.sqrt(x) * H, "hermitian")


def sample(spec: EnsembleSpec, rng: np.random.Generator) -> ComplexMatrix:
    """Dispatch on ``spec.kind``."""
    if spec.kind == "inverse_ginibre_sum":
        return sample_sum_Y(spec, rng)
    if spec.kind == "inverse_ginibre_direct_sum":
        return sample_direct_sum(spec, rng)
    if spec.kind == "gue":
        return sample_gue(spec.n, spec.sigma, rng)
    return sample_stable_gue(spec.n, spec.alpha, rng)
