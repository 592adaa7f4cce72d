"""Special functions used by the analytic reference densities.

Gamma, Bessel and Airy functions are thin wrappers over ``scipy.special``.
The Meijer G-function is evaluated here from its Mellin-Barnes integral

    G^{m,n}_{p,q}(a; b | z) = 1/(2 pi i) \\int_C Phi(s) z^{-s} ds,

    Phi(s) = prod_{j<m} Gamma(b_j + s) prod_{j<n} Gamma(1 - a_j - s)
             / [prod_{j>=m} Gamma(1 - b_j - s) prod_{j>=n} Gamma(a_j + s)]

(standard two-list convention; indices are zero based above).  The
contour separates the poles of Gamma(b_j + s), j < m, which must lie to its
left, from those of Gamma(1 - a_j - s), j < n, which must lie to its right.

Contours are picked by the large-|Im s| behaviour of Phi on a vertical
line, which is governed by c* = m + n - (p + q)/2:

* ``c* > 0``: straight vertical line Re s = s0, adaptive Gauss-Kronrod on
  |Im s| <= T with T doubled until a Stirling bound on the discarded tail
  falls below the tolerance.  When the separation strip is unbounded on the
  right, s0 is moved to the real part of the asymptotic saddle points, which
  keeps the integrand the size of the result for large z.
* ``c* <= 0`` with ``n == 0`` (the p < q kernels, and the p == q densities
  for z < 1): the vertical line diverges or decays only algebraically, so
  the contour is bent into a parabola s(u) = s0 + iu - kappa u^2 opening to
  the left and integrated with the trapezoid rule, which converges
  geometrically for this analytic, rapidly decaying integrand.
* ``p == q`` within 1e-6 of z = 1, where the parabola would have to be very
  long: the vertical line folded onto [0, inf) as a Fourier integral with
  frequency log z (QUADPACK QAWF).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import warnings

import numpy as np
from scipy import integrate, special

__all__ = [
    "ContourSeparationError",
    "NonConvergence",
    "MeijerGParams",
    "gamma_fn",
    "loggamma_fn",
    "bessel_j",
    "airy_ai",
    "meijer_g",
    "meijer_g_batch",
    "separation_strip",
]


class ContourSeparationError(ValueError):
    """No straight contour separates the two families of Gamma poles."""


class NonConvergence(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


# ---------------------------------------------------------------------------
# elementary special functions


def gamma_fn(x):
    """Gamma function for real or complex arguments."""
    return special.gamma(x)


def loggamma_fn(x):
    """Principal branch of log Gamma, analytic off the negative real axis."""
    return special.loggamma(x)


def bessel_j(order: int, x):
    """Bessel function of the first kind, order 0 or 1."""
    if order == 0:
        return special.j0(x)
    if order == 1:
        return special.j1(x)
    raise ValueError(f"only orders 0 and 1 are supported, got {order}")


def airy_ai(x):
    """Return ``(Ai(x), Ai'(x))``."""
    ai, aip, _, _ = special.airy(x)
    return ai, aip


# ---------------------------------------------------------------------------
# Meijer G


@dataclass(frozen=True)
class MeijerGParams:
    """Parameters of G^{m,n}_{p,q}(a_1..a_p; b_1..b_q | z).

    ``a[:n]`` enter as Gamma(1 - a - s) in the numerator, ``a[n:]`` as
    Gamma(a + s) in the denominator, ``b[:m]`` as Gamma(b + s) in the
    numerator and ``b[m:]`` as Gamma(1 - b - s) in the denominator.
    """

    m: int
    n: int
    a: tuple = ()
    b: tuple = ()
    z: complex = 1.0
    s0: float | None = None
    tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError("need 0 <= m <= q and 0 <= n <= p")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def decay(self) -> float:
        """Exponential decay rate c* of |Phi(s0 + it)| in units of pi |t|."""
        return self.m + self.n - 0.5 * (self.p + self.q)

    def with_z(self, z) -> "MeijerGParams":
        return MeijerGParams(self.m, self.n, self.a, self.b, z, self.s0, self.tol)


def separation_strip(params: MeijerGParams) -> tuple[float, float]:
    """Open interval of Re s for a straight separating contour."""
    lo = max((-bj for bj in params.b[: params.m]), default=-np.inf)
    hi = min((1.0 - aj for aj in params.a[: params.n]), default=np.inf)
    if not lo < hi:
        raise ContourSeparationError(
            f"poles overlap: need {lo} < Re s < {hi} for a=({params.a}), b=({params.b})"
        )
    return lo, hi


def _default_s0(params: MeijerGParams) -> float:
    lo, hi = separation_strip(params)
    if params.s0 is not None:
        if not lo < params.s0 < hi:
            raise ContourSeparationError(f"s0={params.s0} outside strip ({lo}, {hi})")
        return float(params.s0)
    if np.isfinite(lo) and np.isfinite(hi):
        return 0.5 * (lo + hi)
    if np.isfinite(lo):
        return lo + 0.5
    if np.isfinite(hi):
        return hi - 0.5
    return 0.0


def _log_phi(s, a, b, m, n):
    s = np.asarray(s, dtype=complex)
    out = np.zeros_like(s)
    for j, bj in enumerate(b):
        out += special.loggamma(bj + s) if j < m else -special.loggamma(1.0 - bj - s)
    for j, aj in enumerate(a):
        out += special.loggamma(1.0 - aj - s) if j < n else -special.loggamma(aj + s)
    return out


def meijer_g(params: MeijerGParams) -> float:
    """Evaluate a real-valued Meijer G-function at real z > 0.

    Raises
    ------
    ContourSeparationError
        if the pole families cannot be separated.
    NonConvergence
        if truncation or refinement cannot reach ``params.tol``.
    """
    return float(meijer_g_batch(params, np.array([params.z], dtype=float))[0])


def meijer_g_batch(params: MeijerGParams, z) -> np.ndarray:
    """Evaluate G for every positive real value in ``z`` (same parameters)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z <= 0):
        raise ValueError("meijer_g is implemented for z > 0 only")
    s0 = _default_s0(params)
    c = params.decay
    if c > 0:
        return _vertical_line(params, z, s0)
    if c == 0 and params.p == params.q:
        # left loop converges like z^{kappa u^2}: use it away from z = 1
        out = np.empty_like(z)
        near = z > _LOOP_ZMAX
        if np.any(~near):
            out[~near] = _parabolic_loop(params, z[~near], s0)
        for i in np.flatnonzero(near):
            out[i] = _fourier_line(params, z[i], s0)
        return out
    if params.n == 0 and params.p < params.q:
        return _parabolic_loop(params, z, s0)
    raise NotImplementedError(
        f"no contour strategy for (m,n,p,q)=({params.m},{params.n},{params.p},{params.q})"
    )


def _saddle_s0(params, lz, lo):
    """Real part of the saddle points of Phi(s) z^{-s} (n = 0, q > p).

    For large |s|, d/ds log Phi ~ (m - p) log s + (q - m) log(-s), so the
    saddles sit near |s| = z^{1/(q-p)}, arg s = +-(q - m) pi / (q - p).  A
    vertical line through their common real part passes over both and the
    integrand stays of the size of the result, which keeps cancellation at
    rounding level for large z.  Falls back to lo + 1/2 when that real part
    is not to the right of it.
    """
    start = lo + 0.5
    d = params.q - params.p
    if d <= 0:
        return np.full(lz.shape, start)
    theta = (params.q - params.m) * np.pi / d
    re = np.exp(lz / d) * np.cos(theta)
    return np.maximum(re, start)


def _vertical_line(params, z, s0):
    # integrands for very different z need very different subdivisions, so
    # the vector quadrature is run on groups of comparable log z
    key = np.floor(np.log(z))
    out = np.empty_like(z)
    for k in np.unique(key):
        sel = key == k
        out[sel] = _vertical_line_group(params, z[sel], s0)
    return out


def _vertical_line_group(params, z, s0):
    """Re s = s0 line; integrand decays like exp(-pi c* |t|).

    When no explicit s0 is given and the separation strip is unbounded on
    the right, each z gets its own s0 at the saddle point (any point of the
    strip gives the same value; the saddle minimises cancellation).
    """
    a, b, m, n = params.a, params.b, params.m, params.n
    lz = np.log(z)
    c = params.decay
    lo, hi = separation_strip(params)
    if params.s0 is None and not np.isfinite(hi) and n == 0:
        s0 = _saddle_s0(params, lz, lo)
    else:
        s0 = np.full(lz.shape, s0)
    # keep off the zeros of 1/Gamma(1 - b_j - s) on the real axis
    for bj in b[m:]:
        frac = (s0 + bj) - np.round(s0 + bj)
        s0 = np.where((np.abs(frac) < 0.05) & (s0 + bj > 0.5), s0 + 0.1, s0)
    # normalise every component by its integrand size at t = 0
    logscale = _log_phi(s0, a, b, m, n).real - s0 * lz
    scale = np.exp(logscale)

    def f(t):
        # integrand is conjugate-symmetric in t, so the line is 2 Re over t > 0
        s = s0 + 1j * t
        return (np.exp(_log_phi(s, a, b, m, n) - s * lz - logscale)).real / np.pi

    T = 8.0
    total = np.zeros_like(z)
    lo_t = 0.0
    for _ in range(12):
        piece, _err, info = integrate.quad_vec(f, lo_t, T, epsabs=1e-15, epsrel=1e-13, norm="max",
                                               limit=2000, full_output=True)
        # status 2 (rounding error) means the integrand is resolved to machine
        # precision; only running out of subintervals is a failure
        if info.status == 1:
            raise NonConvergence(f"vertical contour quadrature on [{lo_t}, {T}]: {info.message}")
        total = total + piece
        # Stirling: |Phi(s0+it)| ~ C t^beta exp(-pi c t), so for large T the
        # discarded tail is bounded by about 2 |f(T)| / (pi c)
        tail = np.exp(_log_phi(s0 + 1j * T, a, b, m, n).real - s0 * lz - logscale) / np.pi
        bound = 2.0 * tail / (np.pi * c)
        if np.all(bound <= params.tol * np.maximum(np.abs(total), 1e-6)):
            return total * scale
        lo_t, T = T, 2.0 * T
    raise NonConvergence("vertical contour truncation bound not met")


def _fourier_line(params, z, s0):
    """Algebraically decaying vertical line, folded into a Fourier integral.

    With s = s0 + it and w = log z, Phi(s) z^{-s} = z^{-s0} Phi(s) e^{-iwt};
    conjugate symmetry gives G = z^{-s0}/pi int_0^inf [Re Phi cos(wt) + Im Phi sin(wt)] dt.
    """
    a, b, m, n = params.a, params.b, params.m, params.n
    w = float(np.log(z))

    def phi(t):
        return np.exp(_log_phi(s0 + 1j * t, a, b, m, n))

    opts = dict(limlst=200, limit=500, epsabs=1e-13, full_output=1)
    with warnings.catch_warnings():
        # QUADPACK flags slow cycles even when the returned error estimate is
        # tiny; convergence is judged on that estimate below instead.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if w == 0.0:
            res = integrate.quad(lambda t: phi(t).real, 0.0, np.inf, limit=500, epsabs=1e-13,
                                 full_output=1)
            val, err = res[0], res[1]
        else:
            om = abs(w)
            sgn = -1.0 if w < 0 else 1.0
            # cos(wt) = cos(|w|t) and sin(wt) = sgn * sin(|w|t)
            rc = integrate.quad(lambda t: phi(t).real, 0.0, np.inf, weight="cos", wvar=om, **opts)
            rs = integrate.quad(lambda t: phi(t).imag, 0.0, np.inf, weight="sin", wvar=om, **opts)
            val, err = rc[0] + sgn * rs[0], rc[1] + rs[1]
    if not np.isfinite(val) or err > max(params.tol * abs(val), 1e-10):
        raise NonConvergence(f"Fourier contour integral at z={z}: value {val}, error {err}")
    pref = z ** (-s0) / np.pi
    return pref * val


@lru_cache(maxsize=64)
def _loop_nodes(a, b, m, n, s0, kappa, h, U):
    u = np.arange(-U, U + 0.5 * h, h)
    s = s0 + 1j * u - kappa * u * u
    ds = 1j - 2.0 * kappa * u
    lphi = _log_phi(s, a, b, m, n)
    return s, ds, lphi


_LOOP_ZMAX = 1.0 - 1e-6
_KAPPAS = (0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)


def _lz_bound(lz):
    """Conservative, coarsely rounded upper bound on log z for contour reuse."""
    if lz >= 0:
        return float(np.ceil(lz * 64.0) / 64.0)
    # round |log z| down to a power of two: decay is then underestimated
    return -float(2.0 ** np.floor(np.log2(-lz)))


def _parabolic_loop(params, z, s0):
    lz = np.log(z)
    bounds = np.array([_lz_bound(v) for v in lz])
    out = np.empty_like(z)
    for lzc in np.unique(bounds):
        sel = bounds == lzc
        out[sel] = _parabolic_loop_group(params, z[sel], s0, lzc)
    return out


def _parabolic_loop_group(params, z, s0, lzc):
    """Left-opening parabola; kappa chosen per z to minimise rounding error.

    The rounding error of the trapezoid sum is about eps * peak|integrand| *
    (number of nodes), so each z takes the kappa that minimises
    log(peak) + log(U) among the candidates whose contour closes.
    """
    a, b, m, n = params.a, params.b, params.m, params.n
    lz = np.log(z)
    out = np.empty_like(z)
    best = np.full(z.shape, np.inf)
    chosen = np.full(z.shape, -1)
    extents = {}
    for ik, kappa in enumerate(_KAPPAS):
        try:
            U = _loop_extent(a, b, m, n, s0, kappa, lzc)
        except NonConvergence:
            continue
        extents[ik] = U
        s, ds, lphi = _loop_nodes(a, b, m, n, s0, kappa, 0.05, U)
        mag = np.max(lphi.real[None, :] - np.outer(lz, s.real), axis=1) + np.log(U)
        better = mag < best
        best[better] = mag[better]
        chosen[better] = ik
    if np.any(chosen < 0):
        raise NonConvergence("no parabolic contour closes for these arguments")
    # the trapezoid error decays like exp(-2 pi d / h) with d the distance
    # from s0 to the nearest pole, so the starting step scales with d
    lo, hi = separation_strip(params)
    d = min(s0 - lo, hi - s0)
    for ik in np.unique(chosen):
        sel = chosen == ik
        kappa, U = _KAPPAS[ik], extents[ik]
        h = min(0.1, 0.5 * d)
        prev = _loop_sum(a, b, m, n, s0, kappa, h, U, lz[sel])
        for _ in range(8):
            h *= 0.5
            cur = _loop_sum(a, b, m, n, s0, kappa, h, U, lz[sel])
            noise = np.exp(best[sel]) * 1e-15 * 2.0 / h
            if np.all(np.abs(cur - prev) <= np.maximum(params.tol * np.abs(cur), noise)):
                out[sel] = cur
                break
            prev = cur
        else:
            raise NonConvergence("parabolic contour refinement did not converge")
    return out


@lru_cache(maxsize=256)
def _loop_extent(a, b, m, n, s0, kappa, lzc):
    """Half-length U of the parabola beyond which |Phi z^-s| has decayed by e^-60.

    ``lzc`` is an upper bound on log z; z^{-s} grows along the left branch
    when z > 1 and decays when z < 1, so the extent has to account for it.
    """
    U = 4.0
    ref = _log_phi(np.array([s0]), a, b, m, n).real[0] - s0 * lzc
    while U < 2e4:
        s = s0 + 1j * U - kappa * U * U
        end = _log_phi(np.array([s]), a, b, m, n).real[0] - s.real * lzc
        if end - ref < -60.0:
            return U
        U *= 1.25
    raise NonConvergence("parabolic contour does not decay")


def _loop_sum(a, b, m, n, s0, kappa, h, U, lz):
    s, ds, lphi = _loop_nodes(a, b, m, n, s0, kappa, h, U)
    vals = np.exp(lphi[None, :] - np.outer(lz, s)) * ds[None, :]
    return (h * vals.sum(axis=1) / (2j * np.pi)).real
