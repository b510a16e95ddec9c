"""One-dimensional Cauchy solvers: oscillator-basis expansion, Crank-Nicolson and PDE residuals."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, EdgeLeakage, SingularTime, StepSizeWarning, TruncationWarning
from .grid import GridState
from .oscillator import hermite_psi_all
from .propagators import ForcingSpec, _regular_mu, mu
from .su11 import bargmann_matrix

__all__ = [
    "GridState", "ExpansionCoeffs", "BLOCKS", "expand_1d", "evolve_coeffs",
    "synthesize_1d", "evolve_1d", "crank_nicolson", "hamiltonian_apply", "pde_residual",
]

BLOCKS = (-0.75, -0.25)
EDGE_TOL = 1e-8
CN_EDGE_TOL = 1e-6
TAIL_TOL = 1e-6
MAX_DT = 1e-3


@dataclass(frozen=True, eq=False)
class ExpansionCoeffs:
    """Coefficients c_m, m = j+1 ... j+M, of one parity block of the 1D oscillator."""

    j: float
    coeffs: np.ndarray

    def __post_init__(self):
        if self.j not in BLOCKS:
            raise DomainError(f"block j must be one of {BLOCKS}")
        c = np.array(self.coeffs, dtype=complex).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def size(self):
        return self.coeffs.size

    @property
    def m(self):
        return self.j + 1 + np.arange(self.size)

    @property
    def hermite_orders(self):
        """Hermite index N of each coefficient: 2p on the even block, 2p+1 on the odd one."""
        return 2 * np.arange(self.size) + (0 if self.j == -0.75 else 1)

    def norm2(self):
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _basis(orders, x):
    """Rows psi_jm(x) = (-1)^floor(N/2) Psi_N(x) for the requested Hermite orders."""
    orders = np.asarray(orders)
    psi = hermite_psi_all(int(orders.max()), x)[orders]
    return ((-1.0) ** (orders // 2))[:, None] * psi


def _trap_weights(grid):
    w = np.full(grid.points, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    return w


def expand_1d(psi0, M=60):
    """Project a grid state onto the even and odd oscillator blocks with M modes each."""
    if M < 1:
        raise DomainError("M must be positive")
    if psi0.edge_magnitude() > EDGE_TOL:
        raise EdgeLeakage(f"edge magnitude {psi0.edge_magnitude():.3g} exceeds {EDGE_TOL}")
    x, w = psi0.x, _trap_weights(psi0)
    B = _basis(np.arange(2 * M), x)
    c = B @ (w * psi0.values)
    return ExpansionCoeffs(-0.75, c[0::2]), ExpansionCoeffs(-0.25, c[1::2])


def evolve_coeffs(c0, t):
    """Coefficients at time t: c_m(t) = e^{-2imt} sum_m' i^{m'-m} v_{m'm}(2t) c_m'(0)."""
    if t == 0:
        return c0
    M = c0.size
    V = bargmann_matrix(c0.j, M, 2.0 * t)
    k = np.arange(M)
    phase = 1j ** ((k[None, :] - k[:, None]) % 4)
    U = phase * V.T
    c = np.exp(-2j * c0.m * t) * (U @ c0.coeffs)
    lost = abs(c0.norm2() - float(np.sum(np.abs(c) ** 2)))
    if lost > TAIL_TOL:
        warnings.warn(f"truncated expansion lost mass {lost:.3g} at t={t}", TruncationWarning, stacklevel=2)
    return ExpansionCoeffs(c0.j, c)


def synthesize_1d(coeffs, grid):
    """Sum c_m psi_jm(x) over both blocks on the grid of ``grid``."""
    x = grid.x
    values = np.zeros(grid.points, dtype=complex)
    for block in coeffs:
        values += block.coeffs @ _basis(block.hermite_orders, x)
    return grid.with_values(values)


def evolve_1d(psi0, t, M=60):
    """Expand, evolve and resynthesize a grid state with the modified-oscillator dynamics."""
    blocks = expand_1d(psi0, M)
    return synthesize_1d(tuple(evolve_coeffs(b, t) for b in blocks), psi0)


def _coefs(model, t):
    """Coefficients (a, b, c, f, g) of H = -a/2 d2 + b/2 x^2 - i c (x d + 1/2) - f x + i g d."""
    a, b, c = 1 + math.cos(2 * t), 1 - math.cos(2 * t), math.sin(2 * t)
    if model == "modified":
        return a, b, c, 0.0, 0.0
    if isinstance(model, ForcingSpec):
        return a, b, c, float(model.f(t)), float(model.g(t))
    raise DomainError(f"unknown model {model!r}")


def _banded_hamiltonian(x, h, model, t):
    """Interior Hamiltonian in (upper, diag, lower) band form with Dirichlet edges."""
    a, b, c, f, g = _coefs(model, t)
    xi = x[1:-1]
    diag = (a / h ** 2 + 0.5 * b * xi ** 2 - f * xi).astype(complex)
    s = (xi[:-1] + xi[1:]) / (4 * h)
    up = -0.5 * a / h ** 2 - 1j * c * s + 1j * g / (2 * h)
    lo = -0.5 * a / h ** 2 + 1j * c * s - 1j * g / (2 * h)
    return up, diag, lo


def crank_nicolson(psi0, t, steps, model="modified"):
    """Crank-Nicolson propagation of the 1D modified (or forced) oscillator equation.

    The first-order term uses the symmetric form (x D0 + D0 x)/2 so the discrete
    Hamiltonian is Hermitian and the scheme is norm preserving.
    """
    if steps < 1:
        raise DomainError("steps must be positive")
    if t == 0:
        return psi0
    dt = t / steps
    if abs(dt) > MAX_DT:
        warnings.warn(f"time step {abs(dt):.3g} exceeds {MAX_DT}", StepSizeWarning, stacklevel=2)
    x, h = psi0.x, psi0.h
    psi = np.array(psi0.values, dtype=complex)
    u = psi[1:-1].copy()
    n = u.size
    ab = np.zeros((3, n), dtype=complex)
    for k in range(steps):
        up, diag, lo = _banded_hamiltonian(x, h, model, (k + 0.5) * dt)
        r = 0.5j * dt
        rhs = (1 - r * diag) * u
        rhs[:-1] -= r * up * u[1:]
        rhs[1:] -= r * lo * u[:-1]
        ab[0, 1:] = r * up
        ab[1] = 1 + r * diag
        ab[2, :-1] = r * lo
        u = solve_banded((1, 1), ab, rhs, check_finite=False)
    edge = max(abs(u[0]), abs(u[-1]))
    if edge > CN_EDGE_TOL:
        raise EdgeLeakage(f"boundary magnitude {edge:.3g} exceeds {CN_EDGE_TOL}")
    psi[1:-1] = u
    psi[0] = psi[-1] = 0
    return psi0.with_values(psi)


def hamiltonian_apply(G, x, t, model, hx=1e-3, order=2):
    """H(t) acting on x -> G(x) at the point x, by central differences."""
    a, b, c, f, g = _coefs(model, t)
    if order == 2:
        gp, g0, gm = G(x + hx), G(x), G(x - hx)
        gx = (gp - gm) / (2 * hx)
        gxx = (gp - 2 * g0 + gm) / hx ** 2
    elif order == 4:
        g2, g1, g0, gm1, gm2 = (G(x + k * hx) for k in (2, 1, 0, -1, -2))
        gx = (-g2 + 8 * g1 - 8 * gm1 + gm2) / (12 * hx)
        gxx = (-g2 + 16 * g1 - 30 * g0 + 16 * gm1 - gm2) / (12 * hx ** 2)
    else:
        raise DomainError("order must be 2 or 4")
    hg = -0.5 * a * gxx + 0.5 * b * x * x * g0 - 0.5j * c * (2 * x * gx + g0) - f * x * g0 + 1j * g * gx
    return hg, g0


def pde_residual(G, x, y, t, model="modified", hx=1e-3, ht=1e-4, order=2):
    """Relative residual |i dG/dt - H(t) G| / |G| of a kernel G(x, y, t) at one point."""
    _regular_mu(t)
    if float(mu(t - 2 * ht)) * float(mu(t + 2 * ht)) <= 0:
        raise SingularTime(f"singular time: the stencil around t={t} crosses a zero of mu")
    hg, g0 = hamiltonian_apply(lambda s: G(s, y, t), x, t, model, hx, order)
    if order == 2:
        dt = (G(x, y, t + ht) - G(x, y, t - ht)) / (2 * ht)
    else:
        dt = (-G(x, y, t + 2 * ht) + 8 * G(x, y, t + ht) - 8 * G(x, y, t - ht) + G(x, y, t - 2 * ht)) / (12 * ht)
    return float(abs(1j * dt - hg) / max(abs(g0), 1e-30))
