"""Discrete-series SU(1,1) machinery.

Bargmann functions v^j_{mm'}(tau), the Green function u_{mm'}(t) of the
tridiagonal system i du_m/dt = (m+j) u_{m-1} + (m-j) u_{m+1}, its
general-phi sibling, the Meixner-Pollaczek Fourier integral and the
rotation kernels G^j_alpha.

Terminating 2F1 factors with argument -1/sinh^2 are rewritten as
polynomials in sinh, which is finite at every tau including tau = 0.
Integer phases such as i^(m'-m) are computed from the integer
differences p = m - j - 1 and q = m' - j - 1, so no quarter-integer
powers of i are ever formed: i^(m'-m) (-1)^q = (-i)^(p+q) exactly.
"""

from dataclasses import dataclass, replace
import math
import warnings

import numpy as np
from scipy.special import gammaln

from .errors import CancellationWarning, DomainError, SingularAngle, SingularPoint
from .specfun import hyp0f1, laguerre

__all__ = [
    "BargmannArgs", "TruncatedSystem", "ladder_index", "bargmann_v",
    "bargmann_matrix", "greens_u", "sys_u", "mp_fourier_closed",
    "mp_fourier_integrand", "tridiagonal_matrix", "rk4_truncated",
    "rotation_kernel", "rotation_kernel_quarter", "laguerre_poisson",
    "laguerre_bilinear_kernel", "laguerre_poisson_sum", "CANCELLATION_LIMIT",
]

CANCELLATION_LIMIT = 1e-6
_EPS = np.finfo(float).eps


def ladder_index(j, m):
    """Integer p = m - j - 1 >= 0 of a discrete-series label."""
    d = m - j - 1
    p = int(round(d))
    if p < 0 or abs(d - p) > 1e-9:
        raise DomainError(f"m - j - 1 must be a nonnegative integer (j={j}, m={m})")
    return p


@dataclass(frozen=True)
class BargmannArgs:
    j: float
    m: float
    mp: float
    tau: complex

    def __post_init__(self):
        if not self.j > -1:
            raise DomainError("need j > -1")
        ladder_index(self.j, self.m)
        ladder_index(self.j, self.mp)


def _poly_terms(p, q, b, s, c, logpref, extra_power, weight=1.0):
    """Terms of prefactor * sum_k (-1)^k C_k w^k s^(p+q-2k) / c^(p+q+extra).

    C_k = p! q! / ((p-k)! (q-k)! (b)_k k!), computed in log space.
    Returns (value, sum of |terms|).
    """
    kmax = min(p, q)
    k = np.arange(kmax + 1)
    logc = (gammaln(p + 1) - gammaln(p - k + 1) + gammaln(q + 1) - gammaln(q - k + 1)
            - (gammaln(b + k) - gammaln(b)) - gammaln(k + 1))
    s = np.asarray(s, dtype=complex)[..., None]
    c = np.asarray(c, dtype=complex)[..., None]
    expo = p + q - 2 * k
    logw = math.log(weight) if weight != 1.0 else 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(s == 0, -np.inf, np.log(np.where(s == 0, 1, s)))
        logterm = logpref + logc + k * logw + expo * logs - (p + q + extra_power) * np.log(c)
        terms = np.where(expo == 0, np.exp(logpref + logc + k * logw - (p + q + extra_power) * np.log(c)),
                         np.exp(logterm))
    terms = terms * (-1.0) ** k
    # compensated sum along k
    total = np.zeros(terms.shape[:-1], dtype=complex)
    comp = np.zeros_like(total)
    for col in range(terms.shape[-1]):
        y = terms[..., col] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total, np.sum(np.abs(terms), axis=-1)


def _warn_cancellation(value, abs_sum, what):
    v = np.abs(np.asarray(value))
    ratio = np.where(v > 0, _EPS * np.asarray(abs_sum) / np.where(v > 0, v, 1), 0.0)
    worst = float(np.max(ratio)) if np.size(ratio) else 0.0
    if worst > CANCELLATION_LIMIT:
        warnings.warn(f"{what}: estimated relative cancellation error {worst:.2e}",
                      CancellationWarning, stacklevel=3)
    return worst


def _out(v):
    v = np.asarray(v)
    return v[()] if v.ndim == 0 else v


# extended precision is used above this estimated relative error
_AUTO_LIMIT = 1e-13


def _mp_poly_sum(p, q, b, s, w):
    # sum_k (-1)^k C_k w^k s^(p+q-2k) in the current mpmath precision
    term = s ** (p + q)
    total = term
    for k in range(min(p, q)):
        term *= -(p - k) * (q - k) * w / ((b + k) * (k + 1) * s * s)
        total += term
    return total


def _lost_digits(err):
    return max(0, int(math.ceil(math.log10(max(err, _EPS) / _EPS))))


def bargmann_v(j, m, mp, tau, precision="double", return_error=False):
    """Bargmann function v^j_{m m'}(tau) = <jm| exp(-i tau J_y) |jm'>.

    Real for real tau; complex tau is accepted (imaginary-time use).
    With ``precision="double"`` severe cancellation is reported by a
    CancellationWarning. With ``precision="auto"`` the alternating sum is
    re-evaluated in extended precision (mpmath) whenever the estimated
    error exceeds 1e-13; the returned error estimate
    then refers to the final value.
    """
    if precision not in ("double", "auto"):
        raise ValueError("precision must be 'double' or 'auto'")
    p, q = ladder_index(j, m), ladder_index(j, mp)
    if not j > -1:
        raise DomainError("need j > -1")
    tau_arr = np.asarray(tau)
    b = 2 * j + 2
    logpref = (-gammaln(b) + 0.5 * (gammaln(p + b) + gammaln(q + b)
                                    - gammaln(p + 1) - gammaln(q + 1)))
    s = np.sinh(tau_arr / 2)
    c = np.cosh(tau_arr / 2)
    val, abs_sum = _poly_terms(p, q, b, s, c, logpref, b)
    val = (-1) ** p * val
    v = np.abs(val)
    err = float(np.max(np.where(v > 0, _EPS * abs_sum / np.where(v > 0, v, 1), 0.0)))
    if err > _AUTO_LIMIT and precision == "auto":
        val = _bargmann_mp(j, p, q, tau_arr, _lost_digits(err) + 20)
        err = _EPS
    elif err > CANCELLATION_LIMIT:
        warnings.warn(f"bargmann_v: estimated relative cancellation error {err:.2e}",
                      CancellationWarning, stacklevel=2)
    if not np.iscomplexobj(tau_arr):
        val = np.real(val)
    val = _out(val)
    return (val, err) if return_error else val


def _bargmann_mp(j, p, q, tau, dps):
    import mpmath

    out = np.empty(tau.shape, dtype=complex)
    with mpmath.workdps(dps):
        b = 2 * mpmath.mpf(j) + 2
        pref = ((-1) ** p / mpmath.gamma(b)
                * mpmath.sqrt(mpmath.gamma(p + b) * mpmath.gamma(q + b)
                              / (mpmath.factorial(p) * mpmath.factorial(q))))
        for idx, tv in np.ndenumerate(tau):
            tv = complex(tv)
            half = (mpmath.mpc(tv.real, tv.imag) if tv.imag else mpmath.mpf(tv.real)) / 2
            s, c = mpmath.sinh(half), mpmath.cosh(half)
            if s == 0:
                out[idx] = 1.0 if p == q else 0.0
                continue
            out[idx] = complex(pref * _mp_poly_sum(p, q, b, s, 1) / c ** (p + q + b))
    return out


def bargmann_matrix(j, size, tau):
    """Matrix V[p, q] = v^j_{j+1+p, j+1+q}(tau) for p, q < size.

    Entries are evaluated with ``precision="auto"``; complex for complex tau.
    """
    cplx = np.iscomplexobj(np.asarray(tau))
    V = np.empty((size, size), dtype=complex if cplx else float)
    for p in range(size):
        for q in range(p, size):
            v = bargmann_v(j, j + 1 + p, j + 1 + q, tau, precision="auto")
            V[p, q] = v
            V[q, p] = v * (-1) ** (p - q)
    return V


def greens_u(m, mp, j, t, return_error=False):
    """Green function u_{m m'}(t) of i du_m/dt = (m+j) u_{m-1} + (m-j) u_{m+1}."""
    p, q = ladder_index(j, m), ladder_index(j, mp)
    b = 2 * j + 2
    t = np.asarray(t, dtype=float)
    logpref = gammaln(p + b) - gammaln(p + 1) - gammaln(b)
    val, abs_sum = _poly_terms(p, q, b, np.sinh(t), np.cosh(t), logpref, b)
    val = (-1j) ** ((p + q) % 4) * val
    err = _warn_cancellation(val, abs_sum, "greens_u")
    val = _out(val)
    return (val, err) if return_error else val


def sys_u(n, m, lam, phi, t):
    """Green function u_{nm}(t) of the general-phi Meixner-Pollaczek system.

    Solves i du_n/dt = (n+1) u_{n+1} - 2 (n+lam) cos(phi) u_n + (n+2lam-1) u_{n-1}.
    """
    if not (lam > 0 and 0 < phi < math.pi):
        raise DomainError("need lam > 0 and 0 < phi < pi")
    t = np.asarray(t, dtype=float)
    sphi, cphi = math.sin(phi), math.cos(phi)
    S = np.sinh(t * sphi)
    D = cphi * S + 1j * sphi * np.cosh(t * sphi)
    b = 2 * lam
    logpref = gammaln(n + b) - gammaln(b) - gammaln(n + 1) + b * math.log(sphi)
    val, abs_sum = _poly_terms(n, m, b, S, D, logpref, b, weight=sphi ** 2)
    val = np.exp(1j * math.pi * lam) * val
    _warn_cancellation(val, abs_sum, "sys_u")
    return _out(val)


def mp_fourier_closed(n, m, lam, phi, t):
    """Closed form of (1/2 pi) int e^(-2ixt) P_n P_m e^((2 phi - pi) x) |Gamma(lam+ix)|^2 dx."""
    if not (lam > 0 and 0 < phi < math.pi):
        raise DomainError("need lam > 0 and 0 < phi < pi")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("need t >= 0")
    sphi, cphi = math.sin(phi), math.cos(phi)
    S = np.sinh(t)
    D = cphi * S + 1j * sphi * np.cosh(t)
    b = 2 * lam
    logpref = (gammaln(b + n) + gammaln(b + m) - b * math.log(2.0) - gammaln(b)
               - gammaln(n + 1) - gammaln(m + 1))
    val, abs_sum = _poly_terms(n, m, b, S, D, logpref, b, weight=sphi ** 2)
    val = np.exp(1j * math.pi * lam) * val
    _warn_cancellation(val, abs_sum, "mp_fourier_closed")
    return _out(val)


def mp_fourier_integrand(n, m, lam, phi, t):
    """Vectorized left-hand integrand of the Fourier integral, including 1/(2 pi)."""
    from .specfun import loggamma_complex, meixner_pollaczek

    def f(x):
        x = np.asarray(x, dtype=float)
        lg = np.real(loggamma_complex(lam + 1j * x))
        w = np.exp(2 * lg + (2 * phi - math.pi) * x) / (2 * math.pi)
        return (np.exp(-2j * x * t) * meixner_pollaczek(n, lam, phi, x)
                * meixner_pollaczek(m, lam, phi, x) * w)
    return f


# ------------------------------------------------------ truncated systems ---

@dataclass(frozen=True)
class TruncatedSystem:
    """State of a truncated tridiagonal system.

    ``mode='separ'`` is the Bargmann system indexed by m = j+1 ... j+size
    (``j`` is the discrete-series moment). ``mode='mp'`` is the
    general-phi system indexed by n = 0 ... size-1 with lam and phi.
    """

    j: float
    coefficients: np.ndarray
    mode: str = "separ"
    lam: float = 1.0
    phi: float = math.pi / 2

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size < 1 or not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be a finite nonempty vector")
        if self.mode not in ("separ", "mp"):
            raise DomainError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "coefficients", c)

    @property
    def m_max(self):
        return self.j + self.coefficients.size

    def weighted_norm(self):
        """sum p!/(m+j)! |u_m|^2, the conserved norm of the separ system."""
        p = np.arange(self.coefficients.size)
        logw = gammaln(p + 1) - gammaln(p + 2 * self.j + 2)
        return float(np.sum(np.exp(logw) * np.abs(self.coefficients) ** 2))


def tridiagonal_matrix(system):
    """Dense matrix A of i du/dt = A u with out-of-range couplings dropped."""
    size = system.coefficients.size
    A = np.zeros((size, size), dtype=complex)
    idx = np.arange(size)
    if system.mode == "separ":
        j = system.j
        m = j + 1 + idx
        A[idx[1:], idx[1:] - 1] = (m + j)[1:]
        A[idx[:-1], idx[:-1] + 1] = (m - j)[:-1]
    else:
        lam, phi = system.lam, system.phi
        A[idx, idx] = -2 * (idx + lam) * math.cos(phi)
        A[idx[:-1], idx[:-1] + 1] = idx[:-1] + 1
        A[idx[1:], idx[1:] - 1] = idx[1:] + 2 * lam - 1
    return A


def rk4_truncated(system, t, steps):
    """Classical RK4 for i du/dt = A u on the truncated system."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if t == 0:
        return system
    A = -1j * tridiagonal_matrix(system)
    u = system.coefficients.copy()
    h = t / steps
    for _ in range(steps):
        k1 = A @ u
        k2 = A @ (u + 0.5 * h * k1)
        k3 = A @ (u + 0.5 * h * k2)
        k4 = A @ (u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return replace(system, coefficients=u)


# -------------------------------------------------------- rotation kernels ---

def laguerre_bilinear_kernel(K, n, r, rp, t):
    """Closed form of S_t(r, r') = sum_N R_NK(r) R_NK(r') t^((N-K)/2)."""
    t = complex(t)
    if abs(t - 1) < 1e-14:
        raise SingularPoint("kernel is singular at t = 1")
    a = K + n / 2
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    rr = r * rp
    arg = rr * rr * t / (1 - t) ** 2
    f = hyp0f1(a, arg)
    val = (2 / math.gamma(a) * rr ** K * (1 - t) ** (-a)
           * np.exp(-(r * r + rp * rp) / 2 * (1 + t) / (1 - t)) * f)
    return _out(val)


def rotation_kernel(j, alpha, n, r, rp):
    """Kernel G^j_alpha(r, r') of the rotation exp(i alpha J_0) on radial functions.

    Defined as exp(i (j+1) alpha) S_{exp(i alpha)}(r, r') with principal
    powers; for 0 < alpha < 2 pi it coincides with the sin(alpha/2) form.
    """
    if abs(math.sin(alpha / 2)) < 1e-10:
        raise SingularAngle("alpha must not be a multiple of 2 pi")
    if not j > -1:
        raise DomainError("need j > -1")
    t = complex(math.cos(alpha), math.sin(alpha))
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    rr = r * rp
    b = 2 * j + 2
    val = (np.exp(1j * (j + 1) * alpha) * 2 / math.gamma(b) * rr ** (b - n / 2)
           * (1 - t) ** (-b) * np.exp(-(r * r + rp * rp) / 2 * (1 + t) / (1 - t))
           * hyp0f1(b, rr * rr * t / (1 - t) ** 2))
    return _out(val)


def rotation_kernel_quarter(j, sign, n, r, rp):
    """Explicit form of G^j_{+-pi/2}(r, r')."""
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    rr = r * rp
    b = 2 * j + 2
    val = (np.exp(sign * 1j * math.pi * (j + 1)) * rr ** (b - n / 2)
           / (2 ** j * math.gamma(b)) * np.exp(sign * (r * r + rp * rp) / 2j)
           * hyp0f1(b, -0.5 * rr * rr))
    return _out(val)


def laguerre_poisson(alpha, x, y, t):
    """Closed form of sum_k k!/(alpha+1)_k L_k^alpha(x) L_k^alpha(y) t^k."""
    t = complex(t)
    if abs(t - 1) < 1e-14:
        raise SingularPoint("Laguerre Poisson kernel is singular at t = 1")
    if abs(t) > 1 + 1e-12:
        raise DomainError("need |t| <= 1")
    if not alpha > -1:
        raise DomainError("need alpha > -1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = ((1 - t) ** (-alpha - 1) * np.exp(-(x + y) * t / (1 - t))
           * hyp0f1(alpha + 1, x * y * t / (1 - t) ** 2))
    return _out(val)


def laguerre_poisson_sum(alpha, x, y, t, terms):
    """Partial sum of the Laguerre Poisson kernel (oracle)."""
    total = 0j
    for k in range(terms + 1):
        logc = gammaln(k + 1) - (gammaln(alpha + 1 + k) - gammaln(alpha + 1))
        total += math.exp(logc) * laguerre(k, alpha, x) * laguerre(k, alpha, y) * t ** k
    return total
