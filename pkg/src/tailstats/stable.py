"""One-sided (totally skewed) stable variables with exponent 0 < a < 1.

Normalisation: the characteristic function is

    E exp(i w X) = exp(-(-i w)^a / cos(pi a / 2)),

principal branch, which is the Laplace transform E exp(-t X) = exp(-t^a / cos(pi a / 2)).
In the Samorodnitsky-Taqqu S1 parametrisation this is S_a(1, 1, 0): unit
scale, full skewness, zero shift.  For a = 1/2 it is the Levy law with
P(X <= x) = erfc(1 / sqrt(2 x)).

Densities are computed from Zolotarev's integral representation, which has
a positive, non-oscillating integrand on a finite interval, with the
convergent large-x series taking over in the far tail.
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np
from scipy import integrate, special

__all__ = [
    "StableSpec",
    "stable_cf",
    "sample_one_sided_stable",
    "stable_pdf",
    "stable_cdf",
    "stable_sf",
    "stable_negative_moment",
    "tail_constant",
]


@dataclass(frozen=True)
class StableSpec:
    """Exponent of a one-sided stable law (0 < alpha_tilde < 1)."""

    alpha_tilde: float

    def __post_init__(self):
        a = float(self.alpha_tilde)
        if not 0.0 < a < 1.0:
            raise ValueError(f"one-sided stable laws need 0 < alpha_tilde < 1, got {a}")
        object.__setattr__(self, "alpha_tilde", a)

    @property
    def k(self) -> float:
        """Laplace exponent prefactor 1/cos(pi a/2)."""
        return 1.0 / np.cos(0.5 * np.pi * self.alpha_tilde)

    @property
    def scale(self) -> float:
        """Ratio to the law with Laplace transform exp(-t^a)."""
        return self.k ** (1.0 / self.alpha_tilde)


def stable_cf(spec: StableSpec, omega):
    """Characteristic function exp(-(-i w)^a / cos(pi a/2)).

    ``omega`` may be complex; for omega = i t (t > 0) this is the Laplace
    transform at t.
    """
    w = np.asarray(omega, dtype=complex)
    a = spec.alpha_tilde
    base = -1j * w
    # principal branch; base = 0 gives 0 ** a = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(base == 0, 0.0, np.exp(a * np.log(np.where(base == 0, 1.0, base))))
    out = np.exp(-pw * spec.k)
    return out if out.ndim else complex(out)


def sample_one_sided_stable(spec: StableSpec, rng: np.random.Generator, size=None):
    """Chambers-Mallows-Stuck draw(s) from the law of ``stable_cf``.

    With beta = 1 and unit S1 scale no rescaling is needed: the generator's
    output has Laplace exponent t^a / cos(pi a/2) exactly.
    """
    a = spec.alpha_tilde
    V = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size)
    W = rng.standard_exponential(size)
    t = np.tan(0.5 * np.pi * a)
    B = np.arctan(t) / a
    S = (1.0 + t * t) ** (1.0 / (2.0 * a))
    aVB = a * (V + B)
    X = S * np.sin(aVB) / np.cos(V) ** (1.0 / a) * (np.cos(V - aVB) / W) ** ((1.0 - a) / a)
    return X


# ---------------------------------------------------------------------------
# density and distribution function


def _zolotarev_A(phi, a):
    """A(phi) = [sin(a phi)/sin(phi)]^{1/(1-a)} sin((1-a) phi)/sin(a phi)."""
    sp = np.sin(phi)
    sap = np.sin(a * phi)
    return (sap / sp) ** (1.0 / (1.0 - a)) * np.sin((1.0 - a) * phi) / sap


def _series_terms(a, k, x, nterms, integrated):
    n = np.arange(1, nterms + 1)[:, None]
    sgn = np.where(n % 2 == 1, 1.0, -1.0)
    lx = np.log(x)[None, :]
    if integrated:
        # survival function: Gamma(na)/n! * x^{-na}
        logc = special.gammaln(n * a) - special.gammaln(n + 1.0)
        pw = -n * a * lx
    else:
        logc = special.gammaln(n * a + 1.0) - special.gammaln(n + 1.0)
        pw = -(n * a + 1.0) * lx
    terms = sgn * np.sin(np.pi * n * a) * np.exp(n * np.log(k) + logc + pw)
    return terms.sum(axis=0) / np.pi


def _series_ok(a, k, x):
    # ratio of successive terms is about k x^{-a} n^{a-1}; 0.25 gives ~30 terms
    return k * x ** (-a) < 0.25


def stable_pdf(spec: StableSpec, x):
    """Density of the one-sided stable law (zero for x <= 0)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    a, k = spec.alpha_tilde, spec.k
    pos = x > 0
    far = pos & _series_ok(a, k, np.where(pos, x, 1.0))
    near = pos & ~far
    if np.any(far):
        out[far] = _series_terms(a, k, x[far], 60, integrated=False)
    for i in np.flatnonzero(near):
        out[i] = _zolotarev_pdf(a, x[i] / spec.scale) / spec.scale
    return out


def stable_cdf(spec: StableSpec, x):
    """Distribution function P(X <= x)."""
    return 1.0 - stable_sf(spec, x)


def stable_sf(spec: StableSpec, x):
    """Survival function P(X > x), accurate in the far tail."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.ones_like(x)
    a, k = spec.alpha_tilde, spec.k
    pos = x > 0
    far = pos & _series_ok(a, k, np.where(pos, x, 1.0))
    near = pos & ~far
    if np.any(far):
        out[far] = _series_terms(a, k, x[far], 60, integrated=True)
    for i in np.flatnonzero(near):
        out[i] = 1.0 - _zolotarev_cdf(a, x[i] / spec.scale)
    return out


def _zolotarev_pdf(a, x):
    """Density of the law with Laplace transform exp(-t^a)."""
    z = x ** (-a / (1.0 - a))

    def f(phi):
        A = _zolotarev_A(phi, a)
        return A * np.exp(-A * z)

    # integrand peaks where A z ~ 1; help quad by supplying that location
    val, _ = integrate.quad(f, 0.0, np.pi, limit=200, epsabs=0.0, epsrel=1e-11,
                            points=_peak_hint(a, z))
    # d/dx of the distribution function: dz/dx = -(a/(1-a)) z/x
    return a / (1.0 - a) * (z / x) * val / np.pi


def _zolotarev_cdf(a, x):
    z = x ** (-a / (1.0 - a))
    val, _ = integrate.quad(lambda phi: np.exp(-_zolotarev_A(phi, a) * z), 0.0, np.pi,
                            limit=200, epsabs=1e-15, epsrel=1e-11, points=_peak_hint(a, z))
    return val / np.pi


def _peak_hint(a, z):
    # A increases monotonically from A(0) to infinity on (0, pi); locate A = 1/z
    grid = np.linspace(1e-6, np.pi - 1e-6, 257)
    A = _zolotarev_A(grid, a)
    i = int(np.searchsorted(A, 1.0 / z))
    if 0 < i < len(grid):
        return [grid[i]]
    return None


def stable_negative_moment(spec: StableSpec, s: float) -> float:
    """E[X^{-s}] = k^{-s/a} Gamma(1 + s/a) / Gamma(1 + s) for s > -a."""
    a = spec.alpha_tilde
    return float(spec.k ** (-s / a) * special.gamma(1.0 + s / a) / special.gamma(1.0 + s))


def tail_constant(spec: StableSpec) -> float:
    """C with P(X > x) ~ C x^{-a} as x -> infinity."""
    return float(spec.k / special.gamma(1.0 - spec.alpha_tilde))
