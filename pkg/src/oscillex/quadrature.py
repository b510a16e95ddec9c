"""Adaptive Simpson quadrature on intervals and truncated lines."""

from dataclasses import dataclass
import math
import warnings

import numpy as np
import scipy.special as sps

from .errors import MaxDepthExceeded, TailNotNegligible
from .specfun import gamma_complex, hyp0f1, hyp2f1

__all__ = [
    "QuadConfig", "DEFAULT_QUAD", "integrate_adaptive", "integrate_line",
    "trapezoid", "laplace_0f1_closed", "laplace_1f1_closed",
    "laplace_0f1_integrand", "laplace_0f1_quadrature", "laplace_1f1_integrand",
    "laplace_1f1_quadrature",
]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-11
    max_depth: int = 40
    line_cutoff: float = 60.0
    initial_panels: int = 16

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.line_cutoff > 0:
            raise ValueError("line_cutoff must be positive")
        if self.max_depth < 1 or self.initial_panels < 1:
            raise ValueError("max_depth and initial_panels must be >= 1")


DEFAULT_QUAD = QuadConfig()


def _vectorize(f):
    def g(x):
        return np.array([f(float(v)) for v in x])
    return g


def integrate_adaptive(f, a, b, cfg=DEFAULT_QUAD, vectorized=True, return_error=False):
    """Adaptive Simpson rule for a real or complex integrand on [a, b].

    ``f`` maps an array of nodes to an array of values whose first axis
    matches the nodes (extra trailing axes integrate componentwise).
    Panels are refined breadth-first; a panel is accepted when its
    Richardson error estimate is below its share of the global tolerance.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not vectorized:
        f = _vectorize(f)
    n0 = cfg.initial_panels
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    # evaluate ends and midpoints of the initial panels
    fe = np.asarray(f(edges))
    fm = np.asarray(f(mid))
    flo, fhi = fe[:-1], fe[1:]
    whole = (hi - lo)[:, None] / 6 * _flat(flo + 4 * fm + fhi)
    tail_shape = fe.shape[1:]

    total = np.zeros(_flat(fe[:1]).shape[1], dtype=complex)
    err_total = 0.0
    estimate = np.abs(whole.sum(axis=0))
    width = b - a
    for depth in range(cfg.max_depth + 1):
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        f1 = np.asarray(f(q1))
        f3 = np.asarray(f(q3))
        h = (hi - lo)[:, None]
        left = h / 12 * _flat(flo + 4 * f1 + fm)
        right = h / 12 * _flat(fm + 4 * f3 + fhi)
        fine = left + right
        diff = np.max(np.abs(fine - whole), axis=1)
        current = np.abs(total + fine.sum(axis=0))
        estimate = np.maximum(estimate, current) if depth == 0 else current
        tol = max(cfg.abs_tol, cfg.rel_tol * float(np.max(estimate)))
        ok = diff <= 15 * tol * (hi - lo) / width
        if np.any(ok):
            acc = fine[ok] + (fine[ok] - whole[ok]) / 15
            total = total + acc.sum(axis=0)
            err_total += float(np.sum(diff[ok])) / 15
        bad = ~ok
        if not np.any(bad):
            break
        if depth == cfg.max_depth:
            raise MaxDepthExceeded(
                f"adaptive Simpson exceeded depth {cfg.max_depth} on [{a}, {b}]")
        # split the rejected panels in two
        lo_b, mid_b, hi_b = lo[bad], mid[bad], hi[bad]
        lo = np.concatenate([lo_b, mid_b])
        hi = np.concatenate([mid_b, hi_b])
        mid = np.concatenate([0.5 * (lo_b + mid_b), 0.5 * (mid_b + hi_b)])
        flo_new = np.concatenate([flo[bad], fm[bad]])
        fhi_new = np.concatenate([fm[bad], fhi[bad]])
        fm = np.concatenate([f1[bad], f3[bad]])
        flo, fhi = flo_new, fhi_new
        whole = np.concatenate([left[bad], right[bad]])
    result = total.reshape(tail_shape) if tail_shape else total[0]
    if not np.iscomplexobj(fe):
        result = np.real(result)
    if return_error:
        return result, err_total
    return result


def _flat(v):
    v = np.asarray(v)
    return v.reshape(v.shape[0], -1)


def integrate_line(f, cfg=DEFAULT_QUAD, vectorized=True, strict=False):
    """Integrate over the real line truncated to [-line_cutoff, line_cutoff].

    Emits TailNotNegligible (raised instead when ``strict``) if the
    integrand at either cutoff exceeds abs_tol.
    """
    if not vectorized:
        f = _vectorize(f)
    L = cfg.line_cutoff
    ends = np.abs(np.asarray(f(np.array([-L, L]))))
    if np.max(ends) > cfg.abs_tol:
        msg = f"integrand is {np.max(ends):.3g} at the cutoff {L}"
        if strict:
            raise TailNotNegligible(msg)
        warnings.warn(msg, TailNotNegligible, stacklevel=2)
    return integrate_adaptive(f, -L, L, cfg)


def trapezoid(values, h, axis=-1):
    """Composite trapezoid rule for uniformly spaced samples."""
    v = np.asarray(values)
    v = np.moveaxis(v, axis, -1)
    return h * (v.sum(axis=-1) - 0.5 * (v[..., 0] + v[..., -1]))


# -------------------------------------------------- Laplace transform pair ---

def laplace_0f1_closed(gamma, mu, k, kp):
    """Closed form of the Laplace transform of x^(gamma-1) 0F1(;gamma;kx) 0F1(;gamma;k'x)."""
    if not (gamma > 0 and mu > 0):
        raise ValueError("need gamma > 0 and mu > 0")
    g = gamma_complex(gamma)
    return complex(g * mu ** (-gamma) * math.exp((k + kp) / mu)
                   * hyp0f1(gamma, k * kp / mu ** 2))


def laplace_0f1_integrand(gamma, mu, k, kp):
    """Integrand x^(gamma-1) e^(-mu x) 0F1(;gamma;kx) 0F1(;gamma;k'x), vectorized."""
    def f(x):
        x = np.asarray(x, dtype=float)
        return (x ** (gamma - 1) * np.exp(-mu * x)
                * sps.hyp0f1(gamma, k * x) * sps.hyp0f1(gamma, kp * x))
    return f


def _log_growth(mu, k, kp, x):
    # log of the integrand envelope; 0F1(;g;kx) grows like exp(2 sqrt(kx)) for k > 0
    return -mu * x + 2 * np.sqrt(max(k, 0) * x) + 2 * np.sqrt(max(kp, 0) * x)


def laplace_0f1_quadrature(gamma, mu, k, kp, cfg=DEFAULT_QUAD, digits=40.0):
    """Quadrature of the 0F1 Laplace integrand on [0, X].

    On [0, 1] the substitution x = u^q with q*gamma >= 4 smooths the
    x^(gamma-1) endpoint behaviour.
    X is chosen so the exponential envelope has dropped ``digits``
    e-folds below its maximum.
    """
    xs = np.linspace(0, 400 / mu, 4001)
    env = _log_growth(mu, k, kp, xs)
    peak = max(float(env.max()), 0.0)
    X = 80.0
    while _log_growth(mu, k, kp, X) > peak - digits:
        X *= 1.25

    return _power_weighted(
        lambda x: np.exp(-mu * x) * sps.hyp0f1(gamma, k * x) * sps.hyp0f1(gamma, kp * x),
        gamma, X, cfg)


def _power_weighted(h, gamma, X, cfg):
    # integral of x^(gamma-1) h(x) over [0, X] for smooth h
    q = max(1, math.ceil(4 / gamma))

    def head(u):
        u = np.asarray(u, dtype=float)
        # x = u^q gives x^(gamma-1) dx = q u^(q gamma - 1) du, smooth at u = 0
        return q * u ** (q * gamma - 1) * h(u ** q)

    def body(x):
        return x ** (gamma - 1) * h(x)

    return integrate_adaptive(head, 0.0, 1.0, cfg) + integrate_adaptive(body, 1.0, X, cfg)


def laplace_1f1_closed(gamma, alpha, alphap, mu, k, kp):
    """Closed form of the Laplace transform of x^(gamma-1) 1F1(alpha;gamma;kx) 1F1(alpha';gamma;k'x).

    Valid for mu > max(Re k, Re k', Re(k+k')) and gamma > 0.
    """
    g = gamma_complex(gamma)
    pre = g * (mu - k) ** (-alpha) * (mu - kp) ** (-alphap) * mu ** (alpha + alphap - gamma)
    z = k * kp / ((mu - k) * (mu - kp))
    return complex(pre * hyp2f1(alpha, alphap, gamma, z))


def laplace_1f1_integrand(gamma, alpha, alphap, mu, k, kp):
    def f(x):
        x = np.asarray(x, dtype=float)
        return (x ** (gamma - 1) * np.exp(-mu * x)
                * sps.hyp1f1(alpha, gamma, k * x) * sps.hyp1f1(alphap, gamma, kp * x))
    return f


def laplace_1f1_quadrature(gamma, alpha, alphap, mu, k, kp, cfg=DEFAULT_QUAD, cutoff=None):
    """Quadrature of the 1F1 Laplace integrand; intended for terminating alpha, alpha'."""
    X = cutoff if cutoff is not None else 80.0 + 60.0 / mu
    return _power_weighted(
        lambda x: (np.exp(-mu * x) * sps.hyp1f1(alpha, gamma, k * x)
                   * sps.hyp1f1(alphap, gamma, kp * x)),
        gamma, X, cfg)
