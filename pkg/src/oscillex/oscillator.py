"""Stationary states of the n-dimensional isotropic harmonic oscillator.

The Hamiltonian is normalized so that level N in dimension n has energy
N + n/2. Radial and angular parts are kept separate; angular factors
live in :mod:`oscillex.harmonics`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .specfun import laguerre

__all__ = [
    "OscillatorLabel", "Su11Index", "energy", "radial_R", "hermite_psi",
    "hermite_psi_all", "su11_map", "basis_1d", "ladder_radial",
]


@dataclass(frozen=True)
class OscillatorLabel:
    N: int
    K: int
    n: int

    def __post_init__(self):
        if self.n < 1 or self.K < 0 or self.N < self.K or (self.N - self.K) % 2:
            raise DomainError(f"invalid oscillator label N={self.N}, K={self.K}, n={self.n}")
        if self.n == 1 and self.K > 1:
            raise DomainError("in one dimension K is the parity, 0 or 1")


@dataclass(frozen=True)
class Su11Index:
    """Discrete-series label (j, m) with m - j a positive integer."""

    j: float
    m: float

    def __post_init__(self):
        d = self.m - self.j
        if d < 1 - 1e-12 or abs(d - round(d)) > 1e-9:
            raise DomainError(f"m - j must be a positive integer, got {d}")

    @property
    def level(self):
        """Zero-based position m - j - 1 on the ladder."""
        return int(round(self.m - self.j)) - 1


def energy(label):
    return label.N + label.n / 2


def radial_R(label, r):
    """Normalized radial function R_NK(r) with weight r^(n-1) dr."""
    N, K, n = label.N, label.K, label.n
    r = np.asarray(r, dtype=float)
    k = (N - K) // 2
    alpha = K + n / 2 - 1
    lognorm = 0.5 * (math.log(2.0) + math.lgamma(k + 1) - math.lgamma((N + K + n) / 2))
    with np.errstate(divide="ignore"):
        logr = np.log(np.abs(r))
    if K == 0:
        radial = np.exp(lognorm - r * r / 2)
    else:
        radial = np.exp(lognorm - r * r / 2 + K * logr) * np.sign(r) ** K
    val = radial * laguerre(k, alpha, r * r)
    return val[()] if val.ndim == 0 else val


def hermite_psi_all(Nmax, x):
    """Rows are the normalized Hermite functions Psi_0 ... Psi_Nmax at x.

    Uses the recurrence on normalized functions, so large N does not
    overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((Nmax + 1,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-x * x / 2)
    if Nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for N in range(1, Nmax):
        out[N + 1] = math.sqrt(2.0 / (N + 1)) * x * out[N] - math.sqrt(N / (N + 1)) * out[N - 1]
    return out


def hermite_psi(N, x):
    """Normalized one-dimensional oscillator eigenfunction Psi_N(x)."""
    val = hermite_psi_all(N, x)[N]
    return val[()] if np.ndim(val) == 0 else val


def su11_map(label):
    """(j, m) quantum numbers of an oscillator label."""
    return Su11Index(label.K / 2 + label.n / 4 - 1, label.N / 2 + label.n / 4)


def basis_1d(N, x):
    """Discrete-series basis function psi_jm for the 1D oscillator.

    The even (j=-3/4) and odd (j=-1/4) ladders carry the sign
    (-1)^floor(N/2) relative to Psi_N.
    """
    return (-1) ** (N // 2) * hermite_psi(N, x)


def ladder_radial(label, r, sign, h=1e-4):
    """Apply J_+ (sign=+1) or J_- (sign=-1) to R_NK by central differences.

    J_pm = (1/2)(H_0 - r^2 +- n/2 +- r d/dr) with H_0 = (1/2)(-Laplacian + r^2),
    acting on R_NK(r) Y_K.
    """
    n, K = label.n, label.K
    r = np.asarray(r, dtype=float)
    f0 = radial_R(label, r)
    fp = radial_R(label, r + h)
    fm = radial_R(label, r - h)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * f0 + fm) / (h * h)
    lap = d2 + (n - 1) / r * d1 - K * (K + n - 2) / (r * r) * f0
    return 0.5 * (-0.5 * (lap + r * r * f0) + sign * (n / 2 * f0 + r * d1))
