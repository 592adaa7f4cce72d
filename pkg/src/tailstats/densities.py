"""Analytic reference curves: macroscopic and microscopic densities, spacing laws,
Fuss-Catalan moments and the unfolding map of the stable GUE.

Conventions
-----------
* ``mp_density`` is the squared-singular-value law of a Ginibre matrix with
  E|x|^2 = 1 on [0, 4]; ``inv_mp_density`` is the law of N X^dagger X for
  X = G^{-1}, supported on [1/4, inf).
* Fuss-Catalan moments are indexed so that n = 1 is the normalisation:
  ``fuss_catalan_moment(n, M)`` = int lambda^{n-1} rho_FC(lambda) dlambda.
* The Meijer G-kernel density is normalised to mean spacing one at large
  argument (rho -> 1); ``inverse_meijer_density`` is its image under
  lambda -> 1/lambda.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import hashlib
import os
import warnings
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .special import MeijerGParams, NonConvergence, airy_ai, bessel_j, gamma_fn, meijer_g_batch
from .stable import StableSpec, stable_cdf, stable_negative_moment, stable_pdf, tail_constant

__all__ = [
    "AnalyticDensity",
    "mp_density",
    "inv_mp_density",
    "airy_edge_density",
    "bessel_hard_edge_density",
    "inverse_bessel_density",
    "tail_density_L",
    "fuss_catalan_density",
    "inverse_fuss_catalan_density",
    "fuss_catalan_moment",
    "fuss_catalan_moment_numeric",
    "fuss_catalan_edge",
    "unfolding_constant",
    "meijer_kernel_density",
    "inverse_meijer_density",
    "poisson_spacing",
    "wigner_surmise",
    "averaged_semicircle",
    "averaged_semicircle_asymptote",
    "averaged_semicircle_at_zero",
    "cauchy_density",
    "unfolding_map",
    "inverse_unfolding_map",
    "stable_gue_tables",
    "get_density",
    "DENSITIES",
]


@dataclass(frozen=True)
class AnalyticDensity:
    """A reference curve with its support and normalisation convention.

    ``normalization`` is one of ``probability``, ``mean-spacing-one`` or
    ``per-eigenvalue``.
    """

    name: str
    evaluator: Callable
    support: tuple
    normalization: str = "probability"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        out = np.zeros(x.shape)
        if np.any(inside):
            out[inside] = np.asarray(self.evaluator(x[inside]), dtype=float)
        return out if out.ndim else float(out)


def _arr(x):
    return np.asarray(x, dtype=float)


# ---------------------------------------------------------------------------
# Marchenko-Pastur pair


def mp_density(lam):
    """sqrt((4 - lambda)/lambda) / (2 pi) on (0, 4]."""
    lam = _arr(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where((lam > 0) & (lam < 4), np.sqrt((4.0 - lam) / lam) / (2 * np.pi), 0.0)
    return out if out.ndim else float(out)


def inv_mp_density(lam):
    """lambda^{-2} rho_MP(1/lambda) = sqrt(4 lambda - 1) / (2 pi lambda^2) on [1/4, inf)."""
    lam = _arr(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(lam > 0.25, np.sqrt(4.0 * lam - 1.0) / (2 * np.pi * lam**2), 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# edge densities


def airy_edge_density(s):
    """Ai'(s)^2 - s Ai(s)^2."""
    s = _arr(s)
    # beyond s = 100 the density is below 1e-580; Ai itself turns into NaN far out
    sc = np.minimum(s, 100.0)
    ai, aip = airy_ai(sc)
    return np.where(s < 100.0, aip**2 - sc * ai**2, 0.0)


def bessel_hard_edge_density(lam):
    """(pi^2/2) lambda [J0(pi lambda)^2 + J1(pi lambda)^2]; mean spacing one."""
    lam = _arr(lam)
    x = np.pi * lam
    out = 0.5 * np.pi**2 * lam * (bessel_j(0, x) ** 2 + bessel_j(1, x) ** 2)
    return np.where(lam >= 0, out, 0.0)


def inverse_bessel_density(lam):
    """lambda^{-2} rho_Bessel(1/lambda)."""
    lam = _arr(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(lam > 0, 1.0 / np.where(lam > 0, lam, 1.0), 0.0)
        out = np.where(lam > 0, inv**2 * bessel_hard_edge_density(inv), 0.0)
    return out


def tail_density_L(lam, L: int):
    """L^2 rho_invB(L lambda), the tail law of the rescaled sum of L copies."""
    return L**2 * inverse_bessel_density(L * _arr(lam))


# ---------------------------------------------------------------------------
# Fuss-Catalan


def fuss_catalan_edge(M: int) -> float:
    """Right end (M+1)^{M+1}/M^M of the Fuss-Catalan support."""
    return (M + 1) ** (M + 1) / M**M


def _fc_params(M: int) -> MeijerGParams:
    a = tuple((j + 1 - M) / M for j in range(1, M + 1))
    b = tuple((j - 1 - M) / (M + 1) for j in range(1, M + 1))
    return MeijerGParams(m=M, n=0, a=a, b=b)


def fuss_catalan_density(lam, M: int):
    """Limiting density of N^M times the squared singular values of a product of M Ginibre matrices.

    rho(lambda) = M^{M-3/2} / (sqrt(2 pi) (M+1)^{M+1/2})
                  * G^{M,0}_{M,M}(a; b | lambda M^M/(M+1)^{M+1})
    with a_j = (j+1-M)/M and b_j = (j-1-M)/(M+1), j = 1..M.
    """
    lam = np.atleast_1d(_arr(lam))
    out = np.zeros_like(lam)
    inside = (lam > 0) & (lam < fuss_catalan_edge(M))
    if np.any(inside):
        pref = M ** (M - 1.5) / (np.sqrt(2 * np.pi) * (M + 1) ** (M + 0.5))
        z = lam[inside] * M**M / (M + 1) ** (M + 1)
        out[inside] = pref * meijer_g_batch(_fc_params(M), z)
    return out


def inverse_fuss_catalan_density(lam, M: int):
    """lambda^{-2} rho_FC(1/lambda): macroscopic law of N^M Y for products of inverses."""
    lam = np.atleast_1d(_arr(lam))
    out = np.zeros_like(lam)
    pos = lam > 1.0 / fuss_catalan_edge(M)
    out[pos] = lam[pos] ** -2 * fuss_catalan_density(1.0 / lam[pos], M)
    return out


def fuss_catalan_moment(n: int, M: int) -> float:
    """Gamma((M+1)n - M) / (Gamma(Mn - M + 2) Gamma(n)), the (n-1)-th moment."""
    if n < 1:
        raise ValueError("moment index starts at n = 1")
    num = special.gammaln((M + 1) * n - M)
    den = special.gammaln(M * n - M + 2) + special.gammaln(n)
    return float(np.round(np.exp(num - den)))


@lru_cache(maxsize=8)
def _fc_quadrature(M: int, nodes: int):
    """Gauss-Jacobi rule for int_0^edge f(lambda) rho_FC(lambda) dlambda.

    lambda = edge * v^{M+1} removes the lambda^{-M/(M+1)} singularity at the
    origin; the square-root edge goes into the Jacobi weight (1 - v)^{1/2}.
    """
    edge = fuss_catalan_edge(M)
    x, w = special.roots_jacobi(nodes, 0.5, 0.0)
    v = 0.5 * (x + 1.0)
    w = w * 0.5 ** 1.5  # (1 - v)^{1/2} dv on [0, 1]
    lam = edge * v ** (M + 1)
    jac = edge * (M + 1) * v**M
    rho = fuss_catalan_density(lam, M)
    return lam, w * jac * rho / np.sqrt(1.0 - v)


def fuss_catalan_moment_numeric(n: int, M: int, nodes: int = 48) -> float:
    """int lambda^{n-1} rho_FC(lambda) by quadrature of the Meijer G density."""
    lam, weights = _fc_quadrature(M, nodes)
    return float(np.sum(weights * lam ** (n - 1)))


# ---------------------------------------------------------------------------
# Meijer G-kernel hard edge


def unfolding_constant(M: int) -> float:
    """c_M = Gamma((M+2)/(M+1)) Gamma(M/(M+1))."""
    return float(gamma_fn((M + 2) / (M + 1)) * gamma_fn(M / (M + 1)))


def _kernel_params(M: int):
    zeros = (0.0,) * (M + 1)
    return MeijerGParams(m=1, n=0, b=zeros), MeijerGParams(m=M, n=0, b=zeros)


def meijer_kernel_density(lam, M: int, tol: float = 1e-8):
    """Hard-edge density of Y^{(M)} on the mean-spacing scale.

    rho(lambda) = (M+1) c^{M+1} lambda^M int_0^1 G^{1,0}_{0,M+1}(-; 0..0 | tX)
                  G^{M,0}_{0,M+1}(-; 0..0 | tX) dt,  X = (c_M lambda)^{M+1}.
    For M = 1 this is the Bessel kernel density.  The t integral is done by
    Gauss-Legendre in u = t^{1/(M+1)}, doubling the node count until stable.
    """
    lam = np.atleast_1d(_arr(lam))
    out = np.zeros_like(lam)
    c = unfolding_constant(M)
    g1, gm = _kernel_params(M)
    for i, l in enumerate(lam):
        if l <= 0:
            continue
        X = (c * l) ** (M + 1)
        n = int(32 + 6 * c * l)
        prev = None
        for _ in range(6):
            x, w = special.roots_legendre(n)
            u = 0.5 * (x + 1.0)
            w = 0.5 * w
            t = u ** (M + 1)
            z = t * X
            val = np.sum(w * (M + 1) * u**M * meijer_g_batch(g1, z) * meijer_g_batch(gm, z))
            if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
                break
            prev = val
            n *= 2
        else:
            raise NonConvergence(f"kernel density quadrature at lambda={l}")
        out[i] = (M + 1) * c ** (M + 1) * l**M * val
    return out


def inverse_meijer_density(lam, M: int):
    """lambda^{-2} rho_MeijerG(1/lambda)."""
    lam = np.atleast_1d(_arr(lam))
    out = np.zeros_like(lam)
    pos = lam > 0
    out[pos] = lam[pos] ** -2 * meijer_kernel_density(1.0 / lam[pos], M)
    return out


# ---------------------------------------------------------------------------
# spacing laws


def poisson_spacing(s):
    s = _arr(s)
    return np.where(s >= 0, np.exp(-s), 0.0)


def wigner_surmise(s):
    """(32/pi^2) s^2 exp(-4 s^2/pi), unit mean."""
    s = _arr(s)
    return np.where(s >= 0, 32.0 / np.pi**2 * s**2 * np.exp(-4.0 * s**2 / np.pi), 0.0)


def cauchy_density(lam, c: float):
    """(1/pi) c / (1 + c^2 lambda^2)."""
    lam = _arr(lam)
    return c / (np.pi * (1.0 + (c * lam) ** 2))


# ---------------------------------------------------------------------------
# stable GUE: averaged semicircle and its integral

_TABLE_VERSION = 4
_T_MAX = float(np.arcsinh(1e12))
_N_T = 621


def _table_grid():
    # rho has a non-analytic cusp at the origin (small-variance mixture
    # components), so nodes are geometric in lambda up to 1/2 and uniform in
    # t = asinh(lambda) beyond
    near = np.arcsinh(np.geomspace(1e-7, 0.5, 171))
    far = np.linspace(np.arcsinh(0.5), _T_MAX, _N_T - 171)[1:]
    return np.concatenate([[0.0], near, far])


def _semicircle_cdf(u):
    """int_0^u sqrt(4 - v^2)/(2 pi) dv, saturating at +-1/2."""
    u = np.clip(_arr(u), -2.0, 2.0)
    return (u * np.sqrt(4.0 - u * u) + 4.0 * np.arcsin(0.5 * u)) / (4.0 * np.pi)


def averaged_semicircle_asymptote(alpha: float) -> float:
    """D with rho_alpha(lambda) ~ D |lambda|^{-1-alpha}."""
    a = 0.5 * alpha
    spec = StableSpec(a)
    C = a * tail_constant(spec)
    return float(2.0 * C / np.pi * 4.0**a * special.beta(1.5, a + 0.5))


def _cache_dir() -> Path | None:
    if os.environ.get("TAILSTATS_NO_DISK_CACHE"):
        return None
    root = os.environ.get("TAILSTATS_CACHE_DIR")
    return Path(root) if root else Path.home() / ".cache" / "tailstats"


class _StableGUETables:
    """Tabulated rho_alpha and the tail mass 1/2 - mu(lambda) on t = asinh(lambda).

    The tail mass is kept instead of mu itself so that it stays accurate
    relative to its own size out to lambda = 1e12, where it falls far below
    the spacing of doubles near 1/2.
    """

    def __init__(self, alpha: float, t, rho, tail):
        self.alpha = alpha
        self.t = t
        self.rho = rho
        self.tail = tail
        self.mu = 0.5 - tail
        # d log(tail) / dt = -rho(lambda) cosh(t) / tail
        self._logtail = CubicHermiteSpline(t, np.log(tail), -rho * np.cosh(t) / tail)
        self._logrho = CubicSpline(t, np.log(rho))
        lam_max = np.sinh(t[-1])
        self.K = tail[-1] * lam_max**alpha
        self.D = self.K * alpha

    @classmethod
    def build(cls, alpha: float):
        a = 0.5 * alpha
        spec = StableSpec(a)
        tab = _PdfTable(spec)
        t = _table_grid()
        lam = np.sinh(t)
        with warnings.catch_warnings():
            # QUADPACK reports roundoff once the 1e-12 target is met to
            # machine precision; values are cross-checked in the test suite
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            rho = np.array([_rho_quad(l, tab) for l in lam])
            tail = np.array([_tail_quad(l, tab) for l in lam])
        return cls(alpha, t, rho, tail)

    def density(self, lam):
        lam = np.abs(_arr(lam))
        t = np.arcsinh(lam)
        inside = t <= self.t[-1]
        out = np.empty(lam.shape)
        out[inside] = np.exp(self._logrho(t[inside]))
        far = ~inside
        out[far] = self.D * lam[far] ** (-1.0 - self.alpha)
        return out

    def tail_mass(self, lam):
        """1/2 - mu(|lambda|)."""
        a = np.abs(_arr(lam))
        t = np.arcsinh(a)
        inside = t <= self.t[-1]
        out = np.empty(a.shape)
        out[inside] = np.exp(self._logtail(t[inside]))
        out[~inside] = self.K * a[~inside] ** (-self.alpha)
        return out

    def cdf_mu(self, lam):
        lam = _arr(lam)
        return np.sign(lam) * (0.5 - self.tail_mass(lam))

    def inverse(self, mu, tol: float = 1e-13):
        mu = _arr(mu)
        if np.any(np.abs(mu) >= 0.5):
            raise ValueError("mu must lie in the open interval (-1/2, 1/2)")
        sgn = np.sign(mu)
        r = 0.5 - np.abs(mu)
        out = np.empty(r.shape)
        far = r < self.tail[-1]
        out[far] = (self.K / r[far]) ** (1.0 / self.alpha)
        for idx in np.flatnonzero(~far):
            out[idx] = self._invert_one(r[idx], tol)
        return sgn * out

    def _invert_one(self, r, tol):
        # bracket on the table, bisection in t on log(tail), then Newton in lambda
        if r >= 0.5:
            return 0.0
        lr = np.log(r)
        j = int(np.searchsorted(-self.tail, -r))
        j = min(max(j, 1), len(self.t) - 1)
        lo, hi = self.t[j - 1], self.t[j]
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            if self._logtail(mid) > lr:
                lo = mid
            else:
                hi = mid
        lam = np.sinh(0.5 * (lo + hi))
        for _ in range(20):
            f = r - float(self.tail_mass(lam))
            step = f / float(self.density(lam))
            lam -= step
            if abs(step) <= tol * max(lam, 1e-300):
                break
        return lam


class _PdfTable:
    """Fast evaluation of a one-sided stable density for the table builder.

    log p is splined on u = log x up to the point where the tail series
    converges quickly; beyond it the series itself is used.  Below ``u_lo``
    the density is under 1e-290 and treated as zero.
    """

    def __init__(self, spec: StableSpec):
        self.spec = spec
        a, k = spec.alpha_tilde, spec.k
        self.x_series = (4.0 * k) ** (1.0 / a)
        self.u_hi = float(np.log(self.x_series))
        u_lo = self.u_hi - 8.0
        while stable_pdf(spec, np.exp(u_lo))[0] > 1e-290:
            u_lo -= 2.0
        self.u_lo = u_lo
        u = np.linspace(u_lo, self.u_hi, 800)
        logp = np.log(np.maximum(stable_pdf(spec, np.exp(u)), 1e-300))
        self._spl = CubicSpline(u, logp)
        # location of the maximum of p(x) x, used as a quadrature breakpoint
        self.u_peak = float(u[np.argmax(logp + u)])

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        with np.errstate(divide="ignore"):
            lx = np.log(x)
        mid = (lx > self.u_lo) & (x <= self.x_series)
        out[mid] = np.exp(self._spl(lx[mid]))
        big = x > self.x_series
        if np.any(big):
            out[big] = stable_pdf(self.spec, x[big])
        return out if out.ndim else float(out)


def _quad(f, lo, hi, points=None, **kw):
    if not hi > lo:
        return 0.0
    pts = [p for p in (points or []) if lo < p < hi] or None
    opts = dict(limit=400, epsabs=1e-16, epsrel=1e-12)
    opts.update(kw)
    val, _ = integrate.quad(f, lo, hi, points=pts, **opts)
    return val


def _rho_quad(lam, tab: _PdfTable):
    """rho(lambda) = int_{x > lambda^2/4} p(x) sqrt(4x - lambda^2) / (2 pi x) dx.

    With x = x* e^d, x* = lambda^2/4, the measure becomes
    p(x) lambda sqrt(expm1(d)) / (2 pi) dd; the sqrt(d) edge is handled by an
    algebraic weight on the first unit interval.
    """
    a = tab.spec.alpha_tilde
    if lam == 0.0:
        return stable_negative_moment(tab.spec, 0.5) / np.pi
    us = 2.0 * np.log(0.5 * lam)
    d_end = max(us, tab.u_peak) - us + 45.0 / (a + 0.5) + 10.0
    d_peak = tab.u_peak - us

    def g(d):
        return tab.pdf(np.exp(us + d)) * lam * np.sqrt(np.expm1(d)) / (2.0 * np.pi)

    d0 = max(0.0, tab.u_lo - us)
    if d0 > 0.0:
        return _quad(g, d0, d_end, points=[d_peak])

    def g_edge(d):
        # g(d) / sqrt(d), smooth at d = 0
        r = np.expm1(d) / d if d > 0 else 1.0
        return tab.pdf(np.exp(us + d)) * lam * np.sqrt(r) / (2.0 * np.pi)

    first, _ = integrate.quad(g_edge, 0.0, 1.0, weight="alg", wvar=(0.5, 0.0), limit=200,
                              epsabs=1e-16, epsrel=1e-12)
    return first + _quad(g, 1.0, d_end, points=[d_peak])


def _tail_quad(lam, tab: _PdfTable):
    """1/2 - mu(lambda), where mu(lambda) = int p(x) Gsc(lambda / sqrt(x)) dx.

    For lambda <= 1, mu is integrated directly.  Above that the complement
    int_{x > x*} p(x) [1/2 - Gsc(lambda / sqrt(x))] dx has a positive
    integrand and keeps full relative accuracy in the tail.
    """
    if lam == 0.0:
        return 0.5
    a = tab.spec.alpha_tilde
    us = 2.0 * np.log(0.5 * lam)
    d_peak = tab.u_peak - us
    d0 = max(0.0, tab.u_lo - us)
    if lam <= 1.0:
        d_end = max(us, tab.u_peak) - us + 45.0 / (a + 0.5) + 10.0

        def f(d):
            x = np.exp(us + d)
            return tab.pdf(x) * x * _semicircle_cdf(2.0 * np.exp(-0.5 * d))

        below = 0.5 * float(stable_cdf(tab.spec, np.exp(us))[0])
        return 0.5 - below - _quad(f, d0, d_end, points=[d_peak])
    d_end = max(us, tab.u_peak) - us + 40.0 / a + 10.0

    def h(d):
        x = np.exp(us + d)
        return tab.pdf(x) * x * (0.5 - _semicircle_cdf(2.0 * np.exp(-0.5 * d)))

    return _quad(h, d0, d_end, points=[d_peak], epsabs=0.0)


def _table_path(alpha: float) -> Path | None:
    d = _cache_dir()
    if d is None:
        return None
    key = hashlib.sha1(f"{_TABLE_VERSION}:{alpha!r}:{_N_T}:{_T_MAX!r}".encode()).hexdigest()[:16]
    return d / f"stable_gue_{alpha:g}_{key}.npz"


@lru_cache(maxsize=16)
def stable_gue_tables(alpha: float) -> _StableGUETables:
    """Tables for rho_alpha and mu, built once per alpha and cached on disk."""
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    path = _table_path(alpha)
    if path is not None and path.exists():
        try:
            with np.load(path) as z:
                return _StableGUETables(alpha, z["t"], z["rho"], z["tail"])
        except (OSError, KeyError, ValueError):
            pass
    tab = _StableGUETables.build(alpha)
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(f".{os.getpid()}.tmp.npz")
            np.savez(tmp, t=tab.t, rho=tab.rho, tail=tab.tail)
            os.replace(tmp, path)
        except OSError:
            pass
    return tab


def averaged_semicircle(lam, alpha: float):
    """Macroscopic density of H/sqrt(N) for the stable GUE (symmetric, heavy tailed)."""
    return stable_gue_tables(alpha).density(lam)


def averaged_semicircle_at_zero(alpha: float) -> float:
    """Closed form rho_alpha(0) = E[x^{-1/2}] / pi."""
    return stable_negative_moment(StableSpec(0.5 * alpha), 0.5) / np.pi


def unfolding_map(lam, alpha: float):
    """mu(lambda) = int_0^lambda rho_alpha, mapping R onto (-1/2, 1/2)."""
    return stable_gue_tables(alpha).cdf_mu(lam)


def inverse_unfolding_map(mu, alpha: float):
    return stable_gue_tables(alpha).inverse(mu)


# ---------------------------------------------------------------------------
# registry used by the CLI ``reference`` command


def get_density(name: str, **kw) -> AnalyticDensity:
    """Look up a reference curve by name; keyword arguments fix its parameters."""
    if name not in DENSITIES:
        raise KeyError(f"unknown density {name!r}; choose from {sorted(DENSITIES)}")
    return DENSITIES[name](**kw)


DENSITIES = {
    "mp": lambda: AnalyticDensity("mp", mp_density, (0.0, 4.0)),
    "inv-mp": lambda: AnalyticDensity("inv-mp", inv_mp_density, (0.25, np.inf)),
    "airy": lambda: AnalyticDensity("airy", airy_edge_density, (-np.inf, np.inf), "per-eigenvalue"),
    "bessel": lambda: AnalyticDensity("bessel", bessel_hard_edge_density, (0.0, np.inf), "mean-spacing-one"),
    "inv-bessel": lambda: AnalyticDensity("inv-bessel", inverse_bessel_density, (0.0, np.inf), "per-eigenvalue"),
    "tail": lambda L=1: AnalyticDensity(f"tail-L{L}", lambda x: tail_density_L(x, L), (0.0, np.inf),
                                        "per-eigenvalue"),
    "fuss-catalan": lambda M=1: AnalyticDensity(f"fuss-catalan-M{M}", lambda x: fuss_catalan_density(x, M),
                                                (0.0, fuss_catalan_edge(M))),
    "inv-fuss-catalan": lambda M=1: AnalyticDensity(
        f"inv-fuss-catalan-M{M}", lambda x: inverse_fuss_catalan_density(x, M), (1.0 / fuss_catalan_edge(M), np.inf)),
    "meijer-kernel": lambda M=1: AnalyticDensity(f"meijer-kernel-M{M}", lambda x: meijer_kernel_density(x, M),
                                                 (0.0, np.inf), "mean-spacing-one"),
    "inv-meijer": lambda M=1: AnalyticDensity(f"inv-meijer-M{M}", lambda x: inverse_meijer_density(x, M),
                                              (0.0, np.inf), "per-eigenvalue"),
    "poisson": lambda: AnalyticDensity("poisson", poisson_spacing, (0.0, np.inf)),
    "wigner": lambda: AnalyticDensity("wigner", wigner_surmise, (0.0, np.inf)),
    "stable-semicircle": lambda alpha=1.0: AnalyticDensity(
        f"stable-semicircle-a{alpha:g}", lambda x: averaged_semicircle(x, alpha), (-np.inf, np.inf)),
    "cauchy": lambda c=1.0: AnalyticDensity(f"cauchy-c{c:g}", lambda x: cauchy_density(x, c),
                                            (-np.inf, np.inf)),
}
