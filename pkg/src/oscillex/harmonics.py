"""Hyperspherical harmonics and plane-wave expansions.

The canonical chain in R^n uses angles theta_1 in [0, 2 pi) and
theta_k in [0, pi] for k = 2 ... n-1 with

    x_1 = r sin(theta_{n-1}) ... sin(theta_2) sin(theta_1)
    x_2 = r sin(theta_{n-1}) ... sin(theta_2) cos(theta_1)
    x_k = r sin(theta_{n-1}) ... sin(theta_k) cos(theta_{k-1})   (k >= 3)
    x_n = r cos(theta_{n-1})

and labels (l_{n-1} >= ... >= l_2 >= |l_1|). The factor for theta_k is
sin^{l_{k-1}} P^{(a, a)}_{l_k - l_{k-1}}(cos theta_k) with
a = l_{k-1} + (k-2)/2. In R^4 two extra trees are available: ``tree4a``
is the canonical chain written as (l', l, m) and ``tree4b`` the
double-circle tree with angles (theta, phi_1, phi_2).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
import math
import threading

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DimensionMismatch, IndexChainViolation
from .specfun import bessel_j, jacobi

__all__ = [
    "AngularPoint", "HarmonicLabel", "harmonic", "labels", "to_cartesian",
    "from_cartesian", "plane_wave_sum", "plane_wave_sum_tree4", "jacobi_anger",
    "addition_sum",
]

TREES = ("canonical", "tree4a", "tree4b")


@dataclass(frozen=True)
class HarmonicLabel:
    """Harmonic label.

    canonical: indices (l_{n-1}, ..., l_2, l_1); n = 1 uses (K,) with K in {0, 1}.
    tree4a: (l', l, m). tree4b: (l, l_1, l_2).
    """

    n: int
    indices: tuple
    tree: str = "canonical"

    def __post_init__(self):
        idx = tuple(int(v) for v in self.indices)
        object.__setattr__(self, "indices", idx)
        if self.tree not in TREES:
            raise IndexChainViolation(f"unknown tree {self.tree!r}")
        if self.tree != "canonical":
            if self.n != 4 or len(idx) != 3:
                raise IndexChainViolation(f"{self.tree} labels have three indices in R^4")
            if self.tree == "tree4a":
                lp, l, m = idx
                if not lp >= l >= abs(m):
                    raise IndexChainViolation(f"need l' >= l >= |m|, got {idx}")
            else:
                l, l1, l2 = idx
                d = l - abs(l1) - abs(l2)
                if d < 0 or d % 2:
                    raise IndexChainViolation(f"need l - |l1| - |l2| even and >= 0, got {idx}")
            return
        if self.n < 1:
            raise IndexChainViolation("dimension must be positive")
        if self.n == 1:
            if len(idx) != 1 or idx[0] not in (0, 1):
                raise IndexChainViolation("in R^1 the label is (0,) or (1,)")
            return
        if len(idx) != self.n - 1:
            raise IndexChainViolation(f"expected {self.n - 1} indices, got {len(idx)}")
        chain = list(idx[:-1]) + [abs(idx[-1])]
        if any(a < b for a, b in zip(chain, chain[1:])) or chain[-1] < 0:
            raise IndexChainViolation(f"indices must satisfy l_(n-1) >= ... >= |l_1|, got {idx}")

    @property
    def top(self):
        """Hyperangular momentum K (|l_1| in R^2)."""
        return abs(self.indices[0])


@dataclass(frozen=True)
class AngularPoint:
    """Point on S^(n-1).

    canonical: (theta_1, ..., theta_{n-1}); n = 1 holds the sign (+1 or -1).
    tree4a uses the canonical angles; tree4b uses (theta, phi_1, phi_2).
    """

    n: int
    angles: tuple
    tree: str = "canonical"


def to_cartesian(pt, r=1.0):
    """Cartesian components (last axis) of r times the unit vector at ``pt``."""
    a = [np.asarray(v, dtype=float) for v in pt.angles]
    n = pt.n
    if pt.tree == "tree4b":
        th, p1, p2 = a
        comps = [np.sin(th) * np.sin(p1), np.sin(th) * np.cos(p1),
                 np.cos(th) * np.sin(p2), np.cos(th) * np.cos(p2)]
        return r * np.stack(comps, axis=-1)
    if n == 1:
        return r * np.stack([np.sign(a[0])], axis=-1)
    comps = []
    for s in range(1, n + 1):
        if s == 1:
            v = np.sin(a[0])
            lo = 1
        elif s == 2:
            v = np.cos(a[0])
            lo = 1
        else:
            v = np.cos(a[s - 2])
            lo = s - 1
        for k in range(lo, n - 1):
            v = v * np.sin(a[k])
        comps.append(v)
    return r * np.stack(comps, axis=-1)


def from_cartesian(x, tree="canonical"):
    """(r, AngularPoint) for a Cartesian vector ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    r = float(np.linalg.norm(x))
    if tree == "tree4b":
        th = math.atan2(math.hypot(x[0], x[1]), math.hypot(x[2], x[3]))
        return r, AngularPoint(4, (th, math.atan2(x[0], x[1]), math.atan2(x[2], x[3])), tree)
    if n == 1:
        return r, AngularPoint(1, (1.0 if x[0] >= 0 else -1.0,), tree)
    angles = [math.atan2(x[0], x[1]) % (2 * math.pi)]
    for k in range(2, n):
        # theta_k from x_{k+1} against the norm of x_1 ... x_k
        angles.append(math.atan2(float(np.linalg.norm(x[:k])), x[k]))
    return r, AngularPoint(n, tuple(angles), tree)


_NORM_LOCK = threading.Lock()
_NORM_CACHE = {}


def _factor_norm(k, lower, upper):
    """Squared norm of sin^lower(th) P^{(a,a)}_{upper-lower}(cos th) with weight sin^(k-1)."""
    key = (k, lower, upper)
    with _NORM_LOCK:
        if key in _NORM_CACHE:
            return _NORM_CACHE[key]
    a = lower + (k - 2) / 2

    def f(th):
        return (np.sin(th) ** lower * jacobi(upper - lower, a, a, np.cos(th))) ** 2 * np.sin(th) ** (k - 1)

    # the integrand is entire in theta, so Gauss-Legendre converges geometrically
    nodes, weights = leggauss(upper + k + 40)
    th = 0.5 * math.pi * (nodes + 1)
    val = float(0.5 * math.pi * np.sum(weights * f(th)))
    with _NORM_LOCK:
        _NORM_CACHE.setdefault(key, val)
    return val


def _canonical(n, idx, angles):
    if n == 1:
        K = idx[0]
        s = np.asarray(angles[0], dtype=float)
        return (np.sign(s) ** K / math.sqrt(2)).astype(complex)
    l1 = idx[-1]
    chain = list(reversed(idx))          # l_1, l_2, ..., l_{n-1}
    th = [np.asarray(v, dtype=float) for v in angles]
    val = np.exp(1j * l1 * th[0]) / math.sqrt(2 * math.pi)
    for k in range(2, n):
        lower = abs(chain[k - 2]) if k == 2 else chain[k - 2]
        upper = chain[k - 1]
        a = lower + (k - 2) / 2
        fac = np.sin(th[k - 1]) ** lower * jacobi(upper - lower, a, a, np.cos(th[k - 1]))
        val = val * fac / math.sqrt(_factor_norm(k, lower, upper))
    return val


def _tree4a(idx, angles):
    lp, l, m = idx
    am = abs(m)
    phi, th, psi = (np.asarray(v, dtype=float) for v in angles)
    logA = 0.5 * (math.log((2 * l + 1) * (2 * lp + 2)) + math.lgamma(l - m + 1)
                  + math.lgamma(l + m + 1) + math.lgamma(lp - l + 1) + math.lgamma(lp + l + 2))
    logA -= 0.5 * math.log(math.pi) + (l + am + 2) * math.log(2) + math.lgamma(l + 1) + math.lgamma(lp + 1.5)
    return (math.exp(logA) * np.sin(psi) ** l * jacobi(lp - l, l + 0.5, l + 0.5, np.cos(psi))
            * np.sin(th) ** am * jacobi(l - am, am, am, np.cos(th)) * np.exp(1j * m * phi))


def _tree4b(idx, angles):
    l, l1, l2 = idx
    a1, a2 = abs(l1), abs(l2)
    th, p1, p2 = (np.asarray(v, dtype=float) for v in angles)
    d = (l - a1 - a2) // 2
    logN = 0.5 * (math.log(2 * l + 2) + math.lgamma(d + 1) + math.lgamma((l + a1 + a2) // 2 + 1)
                  - math.lgamma((l + a1 - a2) // 2 + 1) - math.lgamma((l - a1 + a2) // 2 + 1))
    return (np.exp(1j * (l1 * p1 + l2 * p2)) / (2 * math.pi) * math.exp(logN)
            * np.sin(th) ** a1 * np.cos(th) ** a2 * jacobi(d, a1, a2, np.cos(2 * th)))


def harmonic(label, pt):
    """Normalized harmonic Y_label at the angular point ``pt``."""
    if label.n != pt.n:
        raise DimensionMismatch(f"label is for R^{label.n}, point for R^{pt.n}")
    if label.tree == "tree4b":
        if pt.tree != "tree4b":
            raise DimensionMismatch("tree4b harmonics need tree4b angles")
        val = _tree4b(label.indices, pt.angles)
    elif pt.tree == "tree4b":
        raise DimensionMismatch("canonical harmonics need canonical angles")
    elif label.tree == "tree4a":
        val = _tree4a(label.indices, pt.angles)
    else:
        val = _canonical(label.n, label.indices, pt.angles)
    val = np.asarray(val, dtype=complex)
    return val[()] if val.ndim == 0 else val


@lru_cache(maxsize=None)
def _chains(n, top):
    """Canonical index tuples whose top index (|l_1| when n = 2) equals ``top``."""
    if n == 1:
        return ((top,),) if top in (0, 1) else ()
    if n == 2:
        return ((top,), (-top,)) if top else ((0,),)
    return tuple((top,) + rest for l in range(top + 1) for rest in _chains(n - 1, l))


def labels(n, max_top, tree="canonical"):
    """All labels of the given tree with top index <= max_top."""
    if tree == "tree4b":
        out = []
        for l in range(max_top + 1):
            for l1, l2 in product(range(-l, l + 1), repeat=2):
                d = l - abs(l1) - abs(l2)
                if d >= 0 and d % 2 == 0:
                    out.append(HarmonicLabel(4, (l, l1, l2), tree))
        return out
    return [HarmonicLabel(n, idx, tree) for top in range(max_top + 1) for idx in _chains(n, top)]


def plane_wave_sum(n, terms, x, xp):
    """Truncated hyperspherical expansion of exp(i x . x') with top index <= terms."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    if x.shape != (n,) or xp.shape != (n,):
        raise DimensionMismatch(f"expected two vectors in R^{n}")
    r, om = from_cartesian(x)
    rp, omp = from_cartesian(xp)
    z = r * rp
    pref = z * (2 * math.pi / z) ** (n / 2)
    total = 0j
    for top in range(terms, -1, -1):
        idxs = _chains(n, top)
        if not idxs:
            continue
        J = float(bessel_j(top + n / 2 - 1, z))
        s = 0j
        for idx in idxs:
            lab = HarmonicLabel(n, idx)
            s += np.conj(harmonic(lab, om)) * harmonic(lab, omp)
        total += 1j ** top * J * s
    return complex(pref * total)


def plane_wave_sum_tree4(tree, terms, x, xp):
    """Plane-wave expansion in R^4 over tree4a or tree4b harmonics (top index <= terms)."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    if x.shape != (4,) or xp.shape != (4,):
        raise DimensionMismatch("expected two vectors in R^4")
    geo = "tree4b" if tree == "tree4b" else "canonical"
    r, om = from_cartesian(x, geo)
    rp, omp = from_cartesian(xp, geo)
    z = r * rp
    total = 0j
    for lab in labels(4, terms, tree):
        total += (1j ** lab.top * float(bessel_j(lab.top + 1, z))
                  * np.conj(harmonic(lab, om)) * harmonic(lab, omp))
    return complex((2 * math.pi) ** 2 / z * total)


def addition_sum(l, pt, ptp):
    """sum_m Y*_lm(pt) Y_lm(pt') on S^2."""
    return complex(sum(np.conj(harmonic(HarmonicLabel(3, (l, m)), pt))
                       * harmonic(HarmonicLabel(3, (l, m)), ptp) for m in range(-l, l + 1)))


def jacobi_anger(z, phi, terms):
    """sum_{|m| <= terms} J_m(z) e^(i m phi), using J_(-m) = (-1)^m J_m."""
    total = complex(bessel_j(0, z))
    for m in range(1, terms + 1):
        J = float(bessel_j(m, z))
        total += J * (np.exp(1j * m * phi) + (-1) ** m * np.exp(-1j * m * phi))
    return total
