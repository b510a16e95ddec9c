"""Complex gamma, hypergeometric series and classical orthogonal polynomials.

Everything here accepts numpy arrays and broadcasts; scalars in give
scalars out.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.special as sps

from .errors import DomainError, NoConvergence, PoleError

__all__ = [
    "SeriesConfig", "PolyParams", "DEFAULT_SERIES",
    "gamma_complex", "loggamma_complex", "rgamma_complex", "poch",
    "hyp_series", "hyp0f1", "hyp1f1", "hyp2f1",
    "laguerre", "hermite", "jacobi", "bessel_j",
    "meixner", "meixner_pollaczek", "mp_weight",
    "meixner_bilinear_closed", "meixner_poisson_closed",
    "mp_poisson_closed", "bilinear_generating_closed",
]


@dataclass(frozen=True)
class SeriesConfig:
    """Stopping rule for power series."""

    tol: float = 1e-16
    max_terms: int = 20000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesConfig()


@dataclass(frozen=True)
class PolyParams:
    """Parameters of one polynomial family.

    Only the fields relevant to ``family`` are validated.
    """

    family: str
    alpha: float = 0.0
    beta: float = 0.0
    gamma: complex = 1.0
    mu: complex = 0.5
    lam: float = 1.0
    phi: float = math.pi / 2

    def __post_init__(self):
        fam = self.family.lower()
        if fam not in ("laguerre", "hermite", "jacobi", "meixner", "meixnerpollaczek"):
            raise ValueError(f"unknown family {self.family!r}")
        if fam == "jacobi" and not (self.alpha > -1 and self.beta > -1):
            raise DomainError("Jacobi parameters must exceed -1")
        if fam == "meixnerpollaczek" and not (self.lam > 0 and 0 < self.phi < math.pi):
            raise DomainError("need lam > 0 and 0 < phi < pi")

    def evaluate(self, n, x):
        fam = self.family.lower()
        if fam == "laguerre":
            return laguerre(n, self.alpha, x)
        if fam == "hermite":
            return hermite(n, x)
        if fam == "jacobi":
            return jacobi(n, self.alpha, self.beta, x)
        if fam == "meixner":
            return meixner(n, self.gamma, self.mu, x)
        return meixner_pollaczek(n, self.lam, self.phi, x)


def _out(arr):
    arr = np.asarray(arr)
    return arr[()] if arr.ndim == 0 else arr


# ---------------------------------------------------------------- gamma ----

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
])
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def _check_poles(z, tol=1e-12):
    re = z.real
    near = (np.abs(z.imag) < tol) & (re < 0.5) & (np.abs(re - np.round(re)) < tol)
    if np.any(near):
        bad = z[near].ravel()[0]
        raise PoleError(f"gamma has a pole at {bad}")


def _lanczos_log(z):
    # log Gamma(z) for Re z >= 0.5
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS[0], dtype=complex)
    for k in range(1, 9):
        acc = acc + _LANCZOS[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def loggamma_complex(z):
    """Logarithm of Gamma(z), continuous-enough branch for exponentiation.

    The imaginary part is not reduced to the principal strip; only
    exp(loggamma_complex(z)) is meaningful in general.
    """
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _lanczos_log(1.0 - zl)
    return _out(out)


def _log_sin_pi(z):
    # log(sin(pi z)) stable for large |Im z|
    y = z.imag
    big = np.abs(y) > 20
    res = np.empty(z.shape, dtype=complex)
    if np.any(~big):
        res[~big] = np.log(np.sin(np.pi * z[~big]))
    if np.any(big):
        zb = z[big]
        s = np.sign(zb.imag)
        # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential
        dom = -1j * s * np.pi * zb
        ratio = np.exp(2j * s * np.pi * zb)
        res[big] = dom + np.log((1 - ratio) / (2j) * (-s)) + 0j
    return res


def gamma_complex(z):
    """Gamma function for complex arguments (Lanczos, g=7, 9 terms)."""
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = np.exp(_lanczos_log(z[right]))
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = np.pi / (np.sin(np.pi * zl) * np.exp(_lanczos_log(1.0 - zl)))
    return _out(out)


def rgamma_complex(z):
    """1/Gamma(z), equal to zero at the poles."""
    z = np.asarray(z, dtype=complex)
    re = z.real
    pole = (np.abs(z.imag) < 1e-12) & (re < 0.5) & (np.abs(re - np.round(re)) < 1e-12)
    out = np.zeros(z.shape, dtype=complex)
    if np.any(~pole):
        out[~pole] = 1.0 / gamma_complex(z[~pole])
    return _out(out)


def poch(a, n):
    """Rising factorial (a)_n for a nonnegative integer n."""
    a = np.asarray(a)
    dtype = complex if np.iscomplexobj(a) else float
    out = np.ones(a.shape, dtype=dtype)
    for k in range(int(n)):
        out = out * (a + k)
    return _out(out)


# ------------------------------------------------------ hypergeometric ----

def _is_nonpos_int(v, tol=1e-12):
    v = np.asarray(v, dtype=complex)
    return (np.abs(v.imag) < tol) & (v.real < tol) & (np.abs(v.real - np.round(v.real)) < tol)


def hyp_series(a_list, b_list, z, cfg=DEFAULT_SERIES, return_stats=False):
    """Sum the generalized hypergeometric series pFq(a; b; z).

    Terms are generated by their ratio and accumulated with Kahan
    compensation. A series whose numerator parameter is a nonpositive
    integer stops exactly at its last nonzero term. With
    ``return_stats`` the sum of absolute term values is returned as well,
    which bounds the rounding error of the result.
    """
    arrays = np.broadcast_arrays(*[np.asarray(p, dtype=complex) for p in a_list],
                                 *[np.asarray(p, dtype=complex) for p in b_list],
                                 np.asarray(z, dtype=complex))
    shape = arrays[-1].shape
    na = len(a_list)
    A = [np.array(p, dtype=complex).ravel() for p in arrays[:na]]
    B = [np.array(p, dtype=complex).ravel() for p in arrays[na:-1]]
    zz = np.array(arrays[-1], dtype=complex).ravel()
    size = zz.size

    # a denominator pole is only harmless if a numerator terminates first
    stop = np.full(size, np.inf)
    for p in A:
        m = _is_nonpos_int(p)
        stop[m] = np.minimum(stop[m], -np.round(p[m].real))
    for q in B:
        m = _is_nonpos_int(q)
        bad = m & ~(stop < -np.round(q.real) + 0.5)
        if np.any(bad):
            raise DomainError("denominator parameter is a nonpositive integer")

    total = np.ones(size, dtype=complex)
    comp = np.zeros(size, dtype=complex)
    term = np.ones(size, dtype=complex)
    abs_sum = np.ones(size)
    active = np.ones(size, dtype=bool)
    active &= zz != 0
    active &= stop > 0
    small_run = np.zeros(size, dtype=int)
    k = 0
    while np.any(active):
        if k >= cfg.max_terms:
            raise NoConvergence(f"series did not converge in {cfg.max_terms} terms")
        idx = np.nonzero(active)[0]
        ratio = zz[idx] / (k + 1)
        for p in A:
            ratio = ratio * (p[idx] + k)
        for q in B:
            ratio = ratio / (q[idx] + k)
        t = term[idx] * ratio
        term[idx] = t
        # Kahan step
        y = t - comp[idx]
        s = total[idx] + y
        comp[idx] = (s - total[idx]) - y
        total[idx] = s
        abs_sum[idx] += np.abs(t)
        k += 1
        finished = stop[idx] <= k
        r = np.abs(ratio)
        tail_ok = (r < 1) & (np.abs(t) * np.where(r < 1, 1 / (1 - np.minimum(r, 0.999999)), np.inf)
                             <= cfg.tol * np.abs(s))
        tail_ok |= t == 0
        small_run[idx] = np.where(tail_ok, small_run[idx] + 1, 0)
        done = finished | (small_run[idx] >= 2)
        active[idx[done]] = False
    val = _out(total.reshape(shape))
    if return_stats:
        return val, _out(abs_sum.reshape(shape))
    return val


_BESSEL_SWITCH = -25.0


def hyp0f1(c, z, cfg=DEFAULT_SERIES):
    """0F1(; c; z).

    Power series, except for real z < -25 with real c > 0 where the
    alternating series loses all accuracy; there the identity
    0F1(; c; -y) = Gamma(c) y^((1-c)/2) J_{c-1}(2 sqrt(y)) is used.
    """
    if np.any(_is_nonpos_int(c)):
        raise DomainError("c must not be a nonpositive integer")
    c, z = np.broadcast_arrays(np.asarray(c, dtype=complex), np.asarray(z, dtype=complex))
    shape = z.shape
    c, z = c.ravel(), z.ravel()
    far = ((z.real < _BESSEL_SWITCH) & (np.abs(z.imag) <= 1e-14 * np.abs(z))
           & (np.abs(c.imag) == 0) & (c.real > 0))
    out = np.empty(z.shape, dtype=complex)
    if np.any(~far):
        out[~far] = hyp_series([], [c[~far]], z[~far], cfg)
    if np.any(far):
        cr, y = c[far].real, -z[far].real
        logpre = sps.gammaln(cr) + 0.5 * (1 - cr) * np.log(y)
        out[far] = np.exp(logpre) * sps.jv(cr - 1, 2 * np.sqrt(y))
    return _out(out.reshape(shape))


def hyp1f1(a, c, z, cfg=DEFAULT_SERIES):
    """Confluent hypergeometric function 1F1(a; c; z)."""
    return hyp_series([a], [c], z, cfg)


def hyp2f1(a, b, c, z, cfg=DEFAULT_SERIES):
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Terminating series are summed exactly for any z. Otherwise the
    Pfaff transformation z -> z/(z-1) is used whenever it shrinks the
    argument, which also covers |z| >= 1 with Re z < 1/2. Near z = 1 the
    connection formula in 1 - z is used unless c - a - b is close to an
    integer. Remaining arguments with |z| >= 1 raise DomainError.
    """
    a, b, c, z = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, z)))
    shape = z.shape
    a, b, c, z = (np.array(v).ravel() for v in (a, b, c, z))
    term = _is_nonpos_int(a) | _is_nonpos_int(b)
    w = np.where(z != 1, z / np.where(z != 1, z - 1, 1), np.inf)
    pfaff = ~term & (np.abs(w) < np.abs(z)) & (np.abs(w) < 1)
    s = c - a - b
    near_int = np.abs(s - np.round(s.real)) < 1e-4
    conn = ~term & ~pfaff & (np.abs(1 - z) < 0.25) & ~near_int & (z != 1)
    direct = ~pfaff & ~conn
    if np.any(direct & ~term & (np.abs(z) >= 1)):
        raise DomainError("non-terminating 2F1 needs |z| < 1 or Re z < 1/2")
    out = np.empty(z.shape, dtype=complex)
    if np.any(direct):
        out[direct] = hyp_series([a[direct], b[direct]], [c[direct]], z[direct], cfg)
    if np.any(pfaff):
        ap, bp, cp, zp = a[pfaff], b[pfaff], c[pfaff], z[pfaff]
        out[pfaff] = (1 - zp) ** (-ap) * hyp_series([ap, cp - bp], [cp], w[pfaff], cfg)
    if np.any(conn):
        ac, bc, cc, zc, sc = a[conn], b[conn], c[conn], z[conn], s[conn]
        u = 1 - zc
        g = sps.gamma(cc)
        t1 = (g * sps.gamma(sc) * sps.rgamma(cc - ac) * sps.rgamma(cc - bc)
              * hyp_series([ac, bc], [1 - sc], u, cfg))
        t2 = (g * sps.gamma(-sc) * sps.rgamma(ac) * sps.rgamma(bc) * u ** sc
              * hyp_series([cc - ac, cc - bc], [1 + sc], u, cfg))
        out[conn] = t1 + t2
    return _out(out.reshape(shape))


# ----------------------------------------------------------- polynomials ----

def laguerre(k, alpha, x):
    """Generalized Laguerre polynomial L_k^alpha(x)."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if k == 0:
        return _out(p0)
    p1 = 1.0 + alpha - x
    for j in range(1, k):
        p0, p1 = p1, ((2 * j + 1 + alpha - x) * p1 - (j + alpha) * p0) / (j + 1)
    return _out(p1)


def hermite(N, x):
    """Physicists' Hermite polynomial H_N(x)."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if N == 0:
        return _out(p0)
    p1 = 2 * x
    for j in range(1, N):
        p0, p1 = p1, 2 * x * p1 - 2 * j * p0
    return _out(p1)


def jacobi(n, alpha, beta, x):
    """Jacobi polynomial P_n^(alpha, beta)(x)."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if n == 0:
        return _out(p0)
    p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2) * x
    ab = alpha + beta
    for k in range(1, n):
        c = 2 * k + ab
        a1 = 2 * (k + 1) * (k + ab + 1) * c
        a2 = (c + 1) * (alpha * alpha - beta * beta)
        a3 = c * (c + 1) * (c + 2)
        a4 = 2 * (k + alpha) * (k + beta) * (c + 2)
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return _out(p1)


def meixner_pollaczek(n, lam, phi, x):
    """Meixner-Pollaczek polynomial P_n^lam(x, phi), real for real x."""
    if not (lam > 0 and 0 < phi < math.pi):
        raise DomainError("need lam > 0 and 0 < phi < pi")
    x = np.asarray(x, dtype=float)
    s, c = math.sin(phi), math.cos(phi)
    p0 = np.ones_like(x)
    if n == 0:
        return _out(p0)
    p1 = 2 * (x * s + lam * c)
    for k in range(1, n):
        p0, p1 = p1, (2 * (x * s + (lam + k) * c) * p1 - (2 * lam + k - 1) * p0) / (k + 1)
    return _out(p1)


def mp_weight(x, lam, phi):
    """Orthogonality weight of the Meixner-Pollaczek polynomials."""
    x = np.asarray(x, dtype=float)
    lg = loggamma_complex(lam + 1j * x)
    logw = (2 * lam * math.log(2 * math.sin(phi)) + 2 * np.real(lg)
            + (2 * phi - math.pi) * x - math.log(2 * math.pi))
    return _out(np.exp(logw))


def meixner(n, gamma, mu, x):
    """Meixner polynomial m_n^(gamma, mu)(x) from its terminating 2F1."""
    if np.any(np.asarray(mu) == 0):
        raise DomainError("mu must be nonzero")
    if np.any(_is_nonpos_int(gamma)):
        raise DomainError("gamma must not be a nonpositive integer")
    x = np.asarray(x, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    s = hyp_series([np.full(x.shape, -float(n)), -x], [gamma], 1 - 1 / mu)
    return _out(poch(np.asarray(gamma, dtype=complex), n) * s)


def bessel_j(nu, z, cfg=DEFAULT_SERIES):
    """Bessel function J_nu(z) for z >= 0 from 0F1(; nu+1; -z^2/4)."""
    if not nu > -1:
        raise DomainError("nu must exceed -1")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("z must be nonnegative")
    series = np.real(hyp0f1(nu + 1.0, -0.25 * z * z, cfg))
    with np.errstate(divide="ignore", invalid="ignore"):
        logpre = nu * np.log(0.5 * z) - math.lgamma(nu + 1)
    pre = np.where(z > 0, np.exp(logpre), 1.0 if nu == 0 else 0.0)
    return _out(pre * series)


# -------------------------------------------------- generating functions ----

def _check_t(t):
    if np.any(np.abs(t) > 1 - 1e-6):
        raise DomainError("closed form requires |t| <= 1 - 1e-6")


def meixner_bilinear_closed(n, l, gamma, mu, t):
    """Closed form of sum_k m_n(k) m_l(k) (mu t)^k (gamma)_k / k!."""
    _check_t(t)
    t = np.asarray(t, dtype=complex)
    arg = (1 - mu) ** 2 * t / (mu * (1 - t) ** 2)
    f = hyp_series([np.full(t.shape, -float(n)), -float(l)], [gamma], arg)
    pre = poch(complex(gamma), n) * poch(complex(gamma), l)
    return _out(pre * (1 - t) ** (n + l) / (1 - mu * t) ** (n + l + gamma) * f)


def meixner_poisson_closed(x, y, gamma, mu, t):
    """Closed form of sum_n m_n(x) m_n(y) (mu t)^n / ((gamma)_n n!)."""
    _check_t(t)
    t = np.asarray(t, dtype=complex)
    arg = (1 - mu) ** 2 * t / (mu * (1 - t) ** 2)
    f = hyp2f1(-np.asarray(x, dtype=complex), -np.asarray(y, dtype=complex), gamma, arg)
    return _out((1 - t) ** (x + y) / (1 - mu * t) ** (x + y + gamma) * f)


def mp_poisson_closed(x, y, lam, phi, t):
    """Closed form of sum_n n!/(2 lam)_n t^n P_n(x) P_n(y)."""
    _check_t(t)
    t = np.asarray(t, dtype=complex)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    arg = -4 * t * math.sin(phi) ** 2 / (1 - t) ** 2
    f = hyp2f1(lam - 1j * x, lam - 1j * y, 2 * lam, arg)
    ratio = (1 - t) / (1 - np.exp(-2j * phi) * t)
    return _out((1 - t) ** (-2 * lam) * ratio ** (1j * (x + y)) * f)


def bilinear_generating_closed(r, p, q, s, u, v):
    """Closed form of the bilinear generating sum over products of two 2F1(-k, .; -r; .).

    Needs integers p, q >= 0 so the right-hand side terminates.
    """
    a = 1 + s - s * u
    b = 1 + s - s * v
    arg = -s * u * v / (a * b)
    f = hyp_series([-float(p), -float(q)], [-r], arg)
    return _out((1 + s) ** (r - p - q) * a ** p * b ** q * f)
