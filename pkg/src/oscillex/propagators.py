"""Closed-form propagators of the modified oscillator family.

Natural units hbar = m = 1. The modified oscillator is

    i psi_t = -(1/2)(1+cos 2t) psi_xx + (1/2)(1-cos 2t) x^2 psi
              - (i/2) sin 2t (2x psi_x + psi)

and the forced variant adds -f(t) x psi + i g(t) psi_x. Every kernel
depends on t through mu(t) = cos t sinh t + sin t cosh t.
The relativistic kernels use the Compton length lambda as the length
unit and the dimensionless ratio c/(lambda omega).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq
from scipy.signal import czt, resample
from scipy.special import gammaln

from .errors import (DiagonalPoint, DimensionMismatch, DomainError, LeakageWarning,
                     SingularTime)
from .grid import GridState
from .harmonics import HarmonicLabel, from_cartesian, harmonic, labels
from .quadrature import DEFAULT_QUAD, integrate_adaptive
from .specfun import gamma_complex, hyp0f1, hyp2f1, loggamma_complex, meixner_pollaczek

__all__ = [
    "mu", "mu_root", "kernel_modified_1d", "kernel_modified_nd",
    "kernel_modified_nd_direct", "kernel_radial", "kernel_radial_sum", "Expr", "ForcingSpec",
    "ForcedPhase", "forced_phase", "kernel_forced", "RelParams", "rel_psi",
    "rel_psi_all", "rel_eigensum", "rel_double_sum", "kernel_relativistic",
    "kernel_modified_relativistic", "KernelSpec", "apply_kernel", "MU_EPS",
]

MU_EPS = 1e-10


def mu(t):
    """mu(t) = cos t sinh t + sin t cosh t."""
    t = np.asarray(t, dtype=float)
    v = np.cos(t) * np.sinh(t) + np.sin(t) * np.cosh(t)
    return v[()] if v.ndim == 0 else v


def _nu_c(t):
    # cos t cosh t - sin t sinh t, which equals mu'(t) / 2
    return np.cos(t) * np.cosh(t) - np.sin(t) * np.sinh(t)


def _nu_s(t):
    return np.cos(t) * np.cosh(t) + np.sin(t) * np.sinh(t)


_MU_ROOT = None


def mu_root():
    """First positive zero t* ~ 2.36502 of mu (where tan t = -tanh t)."""
    global _MU_ROOT
    if _MU_ROOT is None:
        _MU_ROOT = brentq(lambda s: float(mu(s)), 2.0, 2.5, xtol=1e-15, rtol=1e-15)
    return _MU_ROOT


def _regular_mu(t):
    m = float(mu(t))
    if abs(m) < MU_EPS:
        raise SingularTime(f"singular time: mu({t}) = {m:.3g}")
    return m


def _sqrt_factor(m, n):
    # exp(-i pi n/4) (2 pi)^(-n/2) mu^(-n/2) with the principal power of mu;
    # for mu > 0 this is the principal (2 pi i mu)^(-n/2)
    return np.exp(-1j * math.pi * n / 4) * (2 * math.pi) ** (-n / 2) * complex(m) ** (-n / 2)


def kernel_modified_1d(x, y, t):
    """Propagator G(x, y, t) of the one-dimensional modified oscillator."""
    m = _regular_mu(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ss, cc = math.sin(t) * math.sinh(t), math.cos(t) * math.cosh(t)
    num = (x * x - y * y) * ss + 2 * x * y - (x * x + y * y) * cc
    val = _sqrt_factor(m, 1) * np.exp(num / (2j * m))
    return val[()] if val.ndim == 0 else val


def _pair(x, y):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"dimensions differ: {x.shape[-1]} and {y.shape[-1]}")
    return x, y


def kernel_modified_nd(x, y, t):
    """n-dimensional propagator as the product of one-dimensional factors.

    The last axis of ``x`` and ``y`` holds the Cartesian components.
    """
    x, y = _pair(x, y)
    val = np.prod(kernel_modified_1d(x, y, t), axis=-1)
    return val[()] if np.ndim(val) == 0 else val


def kernel_modified_nd_direct(x, y, t):
    """n-dimensional propagator from the single exponential in |x|^2, |y|^2, x.y."""
    x, y = _pair(x, y)
    n = x.shape[-1]
    m = _regular_mu(t)
    ss, cc = math.sin(t) * math.sinh(t), math.cos(t) * math.cosh(t)
    x2, y2 = np.sum(x * x, -1), np.sum(y * y, -1)
    num = (x2 - y2) * ss + 2 * np.sum(x * y, -1) - (x2 + y2) * cc
    val = _sqrt_factor(m, n) * np.exp(num / (2j * m))
    return val[()] if np.ndim(val) == 0 else val


def kernel_radial(K, n, r, rp, t):
    """Radial propagator for hyperangular momentum K in dimension n.

    For n = 1 the arguments may be signed coordinates; K = 0, 1 then
    give the even and odd parts, and (G^0 + G^1)/2 is the full 1D kernel.
    """
    m = _regular_mu(t)
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    a = K + n / 2
    rr = r * rp
    ss, cc = math.sin(t) * math.sinh(t), math.cos(t) * math.cosh(t)
    pref = (np.exp(-1j * math.pi * (2 * K + n) / 4)
            / (2 ** (a - 1) * math.gamma(a)) * complex(m) ** (-a))
    phase = np.exp(1j * ((r * r + rp * rp) * cc - (r * r - rp * rp) * ss) / (2 * m))
    val = pref * rr ** K * phase * hyp0f1(a, -(rr * rr) / (4 * m * m))
    return val[()] if np.ndim(val) == 0 else val


def kernel_radial_sum(n, terms, x, y, t):
    """Hyperspherical expansion sum_K sum_nu Y(Omega) Y*(Omega') G^K(r, r') for K <= terms."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (n,) or y.shape != (n,):
        raise DimensionMismatch(f"expected two vectors in R^{n}")
    _regular_mu(t)
    r, om = from_cartesian(x)
    rp, omp = from_cartesian(y)
    total = 0j
    for lab in labels(n, terms):
        total += (harmonic(lab, om) * np.conj(harmonic(lab, omp))
                  * kernel_radial(lab.top, n, r, rp, t))
    return complex(total)


# ------------------------------------------------------ forced oscillator ---

@dataclass(frozen=True)
class Expr:
    """Real forcing term: const, amp cos(omega s + theta), amp sin(...), or polynomial.

    ``coeffs`` are in increasing powers (c0 + c1 s + ...).
    """

    kind: str = "const"
    amp: float = 0.0
    omega: float = 1.0
    theta: float = 0.0
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("const", "cos", "sin", "poly"):
            raise DomainError(f"unknown forcing kind {self.kind!r}")
        vals = (self.amp, self.omega, self.theta) + tuple(self.coeffs)
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in vals):
            raise DomainError("forcing parameters must be finite real numbers")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, (int, float)):
            return cls("const", float(d))
        d = dict(d)
        kind = d.pop("kind", "const")
        if kind == "poly":
            return cls("poly", coeffs=tuple(d.pop("coeffs", ())))
        if kind == "const":
            return cls("const", float(d.pop("value", d.pop("amp", 0.0))))
        return cls(kind, float(d.get("amp", 1.0)), float(d.get("omega", 1.0)),
                   float(d.get("theta", 0.0)))

    def to_dict(self):
        if self.kind == "poly":
            return {"kind": "poly", "coeffs": list(self.coeffs)}
        if self.kind == "const":
            return {"kind": "const", "value": self.amp}
        return {"kind": self.kind, "amp": self.amp, "omega": self.omega, "theta": self.theta}

    @property
    def is_zero(self):
        if self.kind == "poly":
            return not any(self.coeffs)
        return self.amp == 0.0

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "const":
            return np.full_like(s, self.amp)
        if self.kind == "cos":
            return self.amp * np.cos(self.omega * s + self.theta)
        if self.kind == "sin":
            return self.amp * np.sin(self.omega * s + self.theta)
        return np.polynomial.polynomial.polyval(s, self.coeffs) if self.coeffs else np.zeros_like(s)

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "const":
            return np.zeros_like(s)
        if self.kind == "cos":
            return -self.amp * self.omega * np.sin(self.omega * s + self.theta)
        if self.kind == "sin":
            return self.amp * self.omega * np.cos(self.omega * s + self.theta)
        d = np.polynomial.polynomial.polyder(self.coeffs) if len(self.coeffs) > 1 else ()
        return np.polynomial.polynomial.polyval(s, d) if len(d) else np.zeros_like(s)


@dataclass(frozen=True)
class ForcingSpec:
    """The real forcing functions f(t) (multiplying x) and g(t) (multiplying d/dx)."""

    f: Expr = field(default_factory=Expr)
    g: Expr = field(default_factory=Expr)

    @classmethod
    def from_dict(cls, d):
        d = d or {}
        return cls(Expr.from_dict(d.get("f", 0.0)), Expr.from_dict(d.get("g", 0.0)))

    def to_dict(self):
        return {"f": self.f.to_dict(), "g": self.g.to_dict()}

    @property
    def is_zero(self):
        return self.f.is_zero and self.g.is_zero


@dataclass(frozen=True)
class ForcedPhase:
    """Coefficients of the phase S = alpha x + beta y + gamma at time t."""

    t: float
    alpha: float
    beta: float
    gamma: float

    def S(self, x, y):
        return self.alpha * np.asarray(x) + self.beta * np.asarray(y) + self.gamma


_SMALL_S = 1e-6
_GL_X, _GL_W = leggauss(48)


def _alpha_numerator(spec, s):
    return spec.f(s) * mu(s) + spec.g(s) * _nu_c(s)


def _alpha_at(spec, s):
    """alpha(s) for an array of s > 0, inner integral by fixed Gauss-Legendre."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    nodes = 0.5 * s[:, None] * (_GL_X[None, :] + 1)
    inner = 0.5 * s * np.sum(_GL_W[None, :] * _alpha_numerator(spec, nodes), axis=1)
    g0, f0, dg0 = float(spec.g(0.0)), float(spec.f(0.0)), float(spec.g.derivative(0.0))
    small = s < _SMALL_S
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(small, g0 / 2 + (f0 + dg0 / 2) * s / 2, inner / np.where(small, 1, mu(s)))
    return a


def forced_phase(spec, t, cfg=DEFAULT_QUAD):
    """Phase coefficients alpha, beta, gamma of the forced propagator at time t.

    The delta-function initial condition fixes beta(0+) = -g(0)/2, so that
    alpha(0+) + beta(0+) = 0; the integral for beta runs from that value.
    """
    t = float(t)
    if t < 0:
        raise DomainError("forced_phase needs t >= 0")
    if t >= mu_root() - 1e-6:
        raise SingularTime(f"singular time: t = {t} is at or beyond the first zero of mu")
    g0 = float(spec.g(0.0))
    if spec.is_zero:
        return ForcedPhase(t, 0.0, 0.0, 0.0)
    if t == 0:
        return ForcedPhase(0.0, g0 / 2, -g0 / 2, 0.0)
    f0, dg0 = float(spec.f(0.0)), float(spec.g.derivative(0.0))

    def alpha_num(s):
        return _alpha_numerator(spec, s)

    if t < _SMALL_S:
        alpha = g0 / 2 + (f0 + dg0 / 2) * t / 2
    else:
        alpha = float(integrate_adaptive(alpha_num, 0.0, t, cfg)) / float(mu(t))

    def beta_int(s):
        s = np.asarray(s, dtype=float)
        a = _alpha_at(spec, s)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = ((1 + np.cos(2 * s)) * a - spec.g(s)) / mu(s)
        return np.where(s < _SMALL_S, f0 / 2 - dg0 / 4, v)

    def gamma_int(s):
        s = np.asarray(s, dtype=float)
        a = _alpha_at(spec, s)
        return a * spec.g(s) - 0.5 * (1 + np.cos(2 * s)) * a * a

    beta = -g0 / 2 + float(integrate_adaptive(beta_int, 0.0, t, cfg))
    gamma = float(integrate_adaptive(gamma_int, 0.0, t, cfg))
    return ForcedPhase(t, alpha, beta, gamma)


def kernel_forced(x, y, t, spec, phase=None, cfg=DEFAULT_QUAD):
    """Propagator of the forced modified oscillator, G0 exp(i(alpha x + beta y + gamma))."""
    g0 = kernel_modified_1d(x, y, t)
    if spec.is_zero:
        return g0
    ph = phase if phase is not None else forced_phase(spec, t, cfg)
    return g0 * np.exp(1j * ph.S(x, y))


# -------------------------------------------------- relativistic models ---

@dataclass(frozen=True)
class RelParams:
    """Relativistic oscillator parameters: Compton length, frequency and c/(lambda omega)."""

    c_over_lw: float
    lam: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.c_over_lw > 0 and self.lam > 0 and self.omega > 0):
            raise DomainError("relativistic parameters must be positive")

    @classmethod
    def from_nu(cls, nu, lam=1.0, omega=1.0):
        if not nu > 1:
            raise DomainError("need nu > 1")
        return cls(math.sqrt(nu * (nu - 1)), lam, omega)

    @property
    def nu(self):
        return 0.5 + math.sqrt(0.25 + self.c_over_lw ** 2)

    def energy(self, n):
        return self.omega * (n + self.nu)


def rel_psi(n, x, p):
    """Stationary state Psi_n(x) of the relativistic oscillator."""
    nu, lam = p.nu, p.lam
    x = np.asarray(x, dtype=float)
    lognorm = nu * math.log(2.0) + 0.5 * (gammaln(n + 1) - math.log(2 * math.pi * lam)
                                          - gammaln(n + 2 * nu))
    val = (np.exp(lognorm - 1j * x / (2 * lam) * math.log(nu * (nu - 1))
                  + loggamma_complex(nu + 1j * x / lam))
           * meixner_pollaczek(n, nu, math.pi / 2, x / lam))
    return val[()] if np.ndim(val) == 0 else val


def rel_psi_all(nmax, x, p):
    """Rows Psi_0 ... Psi_nmax at x by the recurrence on normalized states."""
    nu, lam = p.nu, p.lam
    x = np.asarray(x, dtype=float)
    xs = x / lam
    out = np.empty((nmax + 1,) + x.shape, dtype=complex)
    out[0] = rel_psi(0, x, p)
    if nmax >= 1:
        out[1] = 2 * xs * out[0] / math.sqrt(2 * nu)
    for n in range(1, nmax):
        out[n + 1] = (2 * xs * out[n] / math.sqrt((n + 1) * (n + 2 * nu))
                      - math.sqrt(n * (n + 2 * nu - 1) / ((n + 1) * (n + 2 * nu))) * out[n - 1])
    return out


def rel_eigensum(x, y, t, p, nmax=40):
    """Partial eigenfunction sum of G0 over n <= nmax (oracle)."""
    n = np.arange(nmax + 1)
    px, py = rel_psi_all(nmax, x, p), rel_psi_all(nmax, y, p)
    e = np.exp(-1j * p.energy(n) * complex(t)).reshape((-1,) + (1,) * (px.ndim - 1))
    return np.sum(e * px * np.conj(py), axis=0)


def rel_double_sum(x, y, t, p, outer=31, block=50, max_inner=2000):
    """Double Bargmann sum for the modified model (oracle).

    The outer index runs over m <= j + outer. At imaginary time the
    matrix exp(-iJ_y 2t) is unbounded, so a square truncation diverges;
    each inner sum over m' is continued in blocks until its terms fall
    below 1e-17 of the largest one.
    """
    from .su11 import bargmann_v

    j = p.nu - 1
    tau = 2 * complex(t)
    psi_y = np.conj(rel_psi_all(max_inner + block, y, p))
    psi_x = rel_psi_all(outer, x, p)
    total = 0j
    for P in range(outer):
        m = j + 1 + P
        inner = 0j
        biggest = 0.0
        q0 = 0
        while q0 < max_inner:
            q = np.arange(q0, q0 + block)
            v = np.array([bargmann_v(j, j + 1 + k, m, tau) for k in q])
            terms = 1j ** ((q - P) % 4) * v * psi_y[q]
            inner += terms.sum()
            top = float(np.max(np.abs(terms)))
            biggest = max(biggest, top)
            q0 += block
            if not np.isfinite(top):
                raise DomainError("inner Bargmann sum overflowed")
            if q0 > P and top < 1e-17 * biggest:
                break
        total += np.exp(-1j * p.omega * m * t) * psi_x[P] * inner
    return total


def _rel_check(x, y, t, p):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x - y) < 1e-8 * p.lam):
        raise DiagonalPoint("relativistic kernels are evaluated off the diagonal x = y only")
    s = np.sin(p.omega * complex(t) / 2)
    if abs(s) < 1e-10:
        raise SingularTime(f"singular time: sin(omega t / 2) = {abs(s):.3g}")
    return x, y, s, np.cos(p.omega * complex(t) / 2)


def _rel_kernel(x, y, t, p, modified):
    x, y, s, c = _rel_check(x, y, t, p)
    nu, lam = p.nu, p.lam
    xs, ys = x / lam, y / lam
    d = 1j * (ys - xs)
    log_is, log_c = np.log(1j * s), np.log(c)
    common = np.exp(d * math.log(p.c_over_lw)) / (2 * math.pi * lam)
    z = s * s
    t1 = (common * np.exp(d * log_is - 1j * (xs + ys) * log_c) * gamma_complex(-d)
          * hyp2f1(nu - 1j * xs, 1 - nu - 1j * xs, 1 + d, z))
    ratio = np.exp(loggamma_complex(nu + 1j * xs) + loggamma_complex(nu - 1j * ys)
                   - loggamma_complex(nu - 1j * xs) - loggamma_complex(nu + 1j * ys))
    if modified:
        t2 = (common * np.exp(-d * log_is + 1j * (xs + ys) * log_c) * gamma_complex(d)
              * ratio * hyp2f1(nu + 1j * xs, 1 - nu + 1j * xs, 1 - d, z))
        val = (t1 + t2) * np.exp(-2j * complex(t) * ys)
    else:
        t2 = (common * np.exp(-d * log_is - 1j * (xs + ys) * log_c) * gamma_complex(d)
              * ratio * hyp2f1(nu - 1j * ys, 1 - nu - 1j * ys, 1 - d, z))
        val = t1 + t2
    return val[()] if np.ndim(val) == 0 else val


def kernel_relativistic(x, y, t, p):
    """Closed-form propagator G0 of the relativistic oscillator (two-term form).

    ``t`` may be complex (imaginary time). Requires x != y and
    sin(omega t/2) != 0; the hypergeometric factors need |sin(omega t/2)| < 1,
    so omega t/2 = pi/2 itself is excluded.
    """
    return _rel_kernel(x, y, t, p, modified=False)


def kernel_modified_relativistic(x, y, t, p):
    """Closed-form propagator of the modified relativistic oscillator."""
    return _rel_kernel(x, y, t, p, modified=True)


# ------------------------------------------------------- grid application ---

MODELS = ("modified1d", "modifiednd", "radial", "forced", "relativistic", "modrel")


@dataclass(frozen=True)
class KernelSpec:
    """Propagator model selector with its parameters."""

    model: str
    K: int = 0
    n: int = 1
    forcing: ForcingSpec = field(default_factory=ForcingSpec)
    rel: RelParams = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.model in ("relativistic", "modrel") and self.rel is None:
            raise DomainError(f"model {self.model} needs relativistic parameters")

    def evaluate(self, x, y, t):
        if self.model == "modified1d":
            return kernel_modified_1d(x, y, t)
        if self.model == "modifiednd":
            return kernel_modified_nd(x, y, t)
        if self.model == "radial":
            return kernel_radial(self.K, self.n, x, y, t)
        if self.model == "forced":
            return kernel_forced(x, y, t, self.forcing)
        if self.model == "relativistic":
            return kernel_relativistic(x, y, t, self.rel)
        return kernel_modified_relativistic(x, y, t, self.rel)


def _threads():
    try:
        return max(1, int(os.environ.get("OSCILLEX_THREADS", "1")))
    except ValueError:
        return 1


def _apply_separable(psi0, t, alpha=0.0, beta=0.0, gamma=0.0):
    """Trapezoid sum for G0 exp(i(alpha x + beta y + gamma)) via a chirp-z transform.

    G0 = A exp(i a x^2) exp(i b y^2) exp(-i x y / mu), so the sum over y is
    a chirp-z transform of exp(i b y^2 + i beta y) psi0(y). The input is
    first refined by band-limited (FFT) interpolation so that the fastest
    local frequency of the integrand is resolved.
    """
    m = _regular_mu(t)
    ss, cc = math.sin(t) * math.sinh(t), math.cos(t) * math.cosh(t)
    a, b = (cc - ss) / (2 * m), (cc + ss) / (2 * m)
    x0, x1, N, h = psi0.x_min, psi0.x_max, psi0.points, psi0.h
    corners = [abs(2 * b * yy + beta - xx / m) for xx in (x0, x1) for yy in (x0, x1)]
    F = max(corners)
    r = max(1, math.ceil(1.25 * h * F / (2 * math.pi) + 0.5))
    fine = resample(psi0.values, N * r) if r > 1 else np.asarray(psi0.values)
    hf = h / r
    y = x0 + hf * np.arange(N * r)
    phi = fine * np.exp(1j * (b * y * y + beta * y))
    w = np.exp(-1j * h * hf / m)
    A = np.exp(1j * x0 * hf / m)
    S = czt(phi, m=N, w=w, a=A)
    x = psi0.x
    S = S * np.exp(-1j * x * x0 / m)
    return _sqrt_factor(m, 1) * np.exp(1j * (a * x * x + alpha * x + gamma)) * hf * S


def _apply_direct(spec, psi0, t):
    x = psi0.x
    h = psi0.h
    w = np.full(psi0.points, h)
    w[0] = w[-1] = h / 2
    wv = w * psi0.values
    off = 1e-4 * (spec.rel.lam if spec.rel is not None else 1.0)
    chunks = np.array_split(np.arange(psi0.points), max(1, psi0.points // 64))

    def row_block(idx):
        xi = x[idx][:, None]
        yy = x[None, :]
        diag = np.abs(xi - yy) < 1e-8
        y_safe = np.where(diag, yy + off, yy)
        G = spec.evaluate(xi, y_safe, t)
        if np.any(diag):
            # diagonal values by averaging the two offset points
            G2 = spec.evaluate(xi, np.where(diag, yy - off, yy + 2 * off), t)
            G = np.where(diag, 0.5 * (G + G2), G)
        return G @ wv

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        parts = list(pool.map(row_block, chunks))
    return np.concatenate(parts)


def apply_kernel(spec, psi0, t):
    """Propagate grid samples by trapezoid quadrature of the kernel integral.

    Supports the one-dimensional models. Emits LeakageWarning when the
    input or output is not negligible at the grid edges.
    """
    if spec.model in ("modifiednd",) or (spec.model == "radial" and spec.n != 1):
        raise DomainError(f"model {spec.model} is not one-dimensional")
    if psi0.edge_magnitude() > 1e-8:
        warnings.warn(f"input is {psi0.edge_magnitude():.3g} at the grid edge",
                      LeakageWarning, stacklevel=2)
    if t == 0:
        return psi0
    if spec.model == "modified1d" or (spec.model == "forced" and spec.forcing.is_zero):
        out = _apply_separable(psi0, t)
    elif spec.model == "forced":
        ph = forced_phase(spec.forcing, t)
        out = _apply_separable(psi0, t, ph.alpha, ph.beta, ph.gamma)
    else:
        out = _apply_direct(spec, psi0, t)
    res = psi0.with_values(out)
    if res.edge_magnitude() > 1e-6:
        warnings.warn(f"propagated state is {res.edge_magnitude():.3g} at the grid edge",
                      LeakageWarning, stacklevel=2)
    return res
