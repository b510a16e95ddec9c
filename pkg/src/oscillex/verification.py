"""Self-check suites run by ``oscillex verify``.

Each check returns a residual and a tolerance; a check passes when the
residual does not exceed its tolerance times ``tolerance_scale``.
"""

import math
import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import roots_jacobi

from . import harmonics, propagators, solver, specfun, su11
from .quadrature import QuadConfig, integrate_line, laplace_0f1_closed, laplace_0f1_quadrature

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    residual: float
    tolerance: float
    passed: bool
    seconds: float

    def to_dict(self):
        return asdict(self)


# ------------------------------------------------------------- specfun ---

def _gamma_recurrence():
    rng = np.random.default_rng(11)
    z = rng.uniform(-20, 20, 200) + 1j * rng.uniform(-20, 20, 200)
    g1, g0 = specfun.gamma_complex(z + 1), specfun.gamma_complex(z)
    return float(np.max(np.abs(g1 - z * g0) / np.abs(g1))), 1e-11


def _mp_orthogonality():
    worst = 0.0
    cfg = QuadConfig(abs_tol=1e-10, rel_tol=1e-11)
    for lam in (0.5, 1.0, 2.0):
        for phi in (math.pi / 3, math.pi / 2):
            for n in range(5):
                for m in range(n, 5):
                    def f(x, n=n, m=m):
                        return (specfun.meixner_pollaczek(n, lam, phi, x)
                                * specfun.meixner_pollaczek(m, lam, phi, x)
                                * specfun.mp_weight(x, lam, phi))
                    val = integrate_line(f, cfg)
                    ref = math.gamma(2 * lam + n) / math.factorial(n) if n == m else 0.0
                    worst = max(worst, abs(val - ref))
    return worst, 1e-8


def _jacobi_orthogonality():
    a, b = 0.5, 1.5
    x, w = roots_jacobi(30, a, b)
    P = np.array([specfun.jacobi(k, a, b, x) for k in range(8)])
    G = (P * w) @ P.T
    h = np.array([2 ** (a + b + 1) / (2 * k + a + b + 1)
                  * math.gamma(k + a + 1) * math.gamma(k + b + 1)
                  / (math.gamma(k + a + b + 1) * math.factorial(k)) for k in range(8)])
    return float(np.max(np.abs(G - np.diag(h)) / h[:, None])), 1e-10


def _meixner_orthogonality():
    gam, mu = 1.0, 0.3
    k = np.arange(401)
    w = np.exp([math.lgamma(gam + v) - math.lgamma(gam) - math.lgamma(v + 1) for v in k]) * mu ** k
    M = np.array([np.real(specfun.meixner(n, gam, mu, k)) for n in range(6)])
    G = (M * w) @ M.T
    h = np.array([math.factorial(n) * specfun.poch(gam, n).real / (mu ** n * (1 - mu) ** gam)
                  for n in range(6)])
    return float(np.max(np.abs(G - np.diag(h)) / h[:, None])), 1e-8


def _hermite_orthonormality():
    x = np.linspace(-20, 20, 4001)
    h = x[1] - x[0]
    P = solver._basis(np.arange(30), x)
    G = h * (P @ P.T)
    return float(np.max(np.abs(G - np.eye(30)))), 1e-10


def _laplace_appendix():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(5):
        g, m = rng.uniform(0.5, 4), rng.uniform(0.5, 3)
        k, kp = rng.uniform(-2, 2, 2)
        ref = laplace_0f1_closed(g, m, k, kp)
        worst = max(worst, abs(laplace_0f1_quadrature(g, m, k, kp) - ref) / abs(ref))
    return worst, 1e-8


# ---------------------------------------------------------------- su11 ---

def _bargmann_unitarity():
    worst = 0.0
    for j in (-0.75, -0.25, 0.0, 1.0):
        for tau in (0.2, 1.0):
            V = su11.bargmann_matrix(j, 41, tau)
            worst = max(worst, float(np.max(np.abs((V @ V.T)[:7, :7] - np.eye(7)))))
    return worst, 1e-6


def _greens_vs_rk4():
    j, size, t = 0.0, 60, 0.5
    worst = 0.0
    for q in range(5):
        e = np.zeros(size, dtype=complex)
        e[q] = 1
        u = su11.rk4_truncated(su11.TruncatedSystem(j, e), t, 2000).coefficients
        ref = np.array([su11.greens_u(j + 1 + p, j + 1 + q, j, t) for p in range(20)])
        worst = max(worst, float(np.max(np.abs(u[:20] - ref))))
    return worst, 1e-6


def _sys_vs_rk4():
    lam, phi, t, size = 1.0, math.pi / 3, 0.5, 60
    worst = 0.0
    for m in range(5):
        e = np.zeros(size, dtype=complex)
        e[m] = 1
        sys0 = su11.TruncatedSystem(lam - 1, e, mode="mp", lam=lam, phi=phi)
        u = su11.rk4_truncated(sys0, t, 2000).coefficients
        ref = np.array([su11.sys_u(n, m, lam, phi, t) for n in range(20)])
        worst = max(worst, float(np.max(np.abs(u[:20] - ref))))
    return worst, 1e-6


def _fourier_integral():
    worst = 0.0
    for n, m, t in ((0, 0, 0.5), (2, 3, 0.3), (4, 1, 0.1)):
        f = su11.mp_fourier_integrand(n, m, 1.0, math.pi / 2, t)
        val = integrate_line(f)
        ref = su11.mp_fourier_closed(n, m, 1.0, math.pi / 2, t)
        worst = max(worst, abs(val - ref) / abs(ref))
    return worst, 1e-6


# --------------------------------------------------------- propagators ---

def _pde_modified():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        x, y = rng.uniform(-3, 3, 2)
        t = rng.uniform(0.1, 1.5)
        worst = max(worst, solver.pde_residual(propagators.kernel_modified_1d, x, y, t,
                                                ht=1e-5, order=4))
    return worst, 1e-4


def _pde_forced():
    spec = propagators.ForcingSpec(propagators.Expr("cos", 1.0), propagators.Expr("sin", 1.0))
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(5):
        x, y = rng.uniform(-3, 3, 2)
        t = rng.uniform(0.1, 1.5)
        phase = propagators.forced_phase(spec, t)
        cache = {t: phase}
        g = lambda a, b, s: propagators.kernel_forced(a, b, s, spec, cache.get(s))
        worst = max(worst, solver.pde_residual(g, x, y, t, spec, ht=1e-5, order=4))
    return worst, 1e-4


def _radial_vs_product():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(2):
        x, y = rng.normal(size=3), rng.normal(size=3)
        ref = propagators.kernel_modified_nd(x, y, 0.4)
        val = propagators.kernel_radial_sum(3, 30, x, y, 0.4)
        worst = max(worst, abs(val - ref) / abs(ref))
    return worst, 1e-6


def _relativistic_eigensum():
    p = propagators.RelParams.from_nu(1.618)
    x, y, t = 0.3, -0.4, -0.5j
    ref = propagators.kernel_relativistic(x, y, t, p)
    return abs(propagators.rel_eigensum(x, y, t, p, 40) - ref) / abs(ref), 1e-6


def _modified_relativistic_identity():
    p = propagators.RelParams.from_nu(1.618)
    worst = 0.0
    for x, y, t in ((0.3, -0.4, -0.5j), (1.1, 0.2, 0.4), (-0.7, 0.9, -1.2j)):
        g = propagators.kernel_modified_relativistic(x, y, t, p)
        g0 = propagators.kernel_relativistic(x, y, t, p) * np.exp(-2j * t * y)
        worst = max(worst, abs(g - g0) / abs(g0))
    return worst, 1e-8


# ----------------------------------------------------------- harmonics ---

def _jacobi_anger():
    worst = 0.0
    for z in (0.5, 2.0, 5.0):
        for phi in (0.3, 1.7, 4.0):
            worst = max(worst, abs(harmonics.jacobi_anger(z, phi, 40) - np.exp(1j * z * math.sin(phi))))
    return worst, 1e-10


def _plane_wave_3d():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(2):
        x, xp = rng.normal(size=3), rng.normal(size=3)
        xp *= 2.0 / (np.linalg.norm(x) * np.linalg.norm(xp))
        val = harmonics.plane_wave_sum(3, 30, x, xp)
        worst = max(worst, abs(val - np.exp(1j * x @ xp)))
    return worst, 1e-8


def _plane_wave_4d_trees():
    rng = np.random.default_rng(8)
    x, xp = rng.normal(size=4), rng.normal(size=4)
    xp *= 1.0 / (np.linalg.norm(x) * np.linalg.norm(xp))
    ref = np.exp(1j * x @ xp)
    return max(abs(harmonics.plane_wave_sum_tree4(tree, 14, x, xp) - ref)
               for tree in ("tree4a", "tree4b")), 1e-6


def _sphere_orthonormality():
    u, wu = np.polynomial.legendre.leggauss(32)
    th2 = 0.5 * math.pi * (u + 1)
    th1 = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    T1, T2 = np.meshgrid(th1, th2)
    W = (0.5 * math.pi * wu * np.sin(th2))[:, None] * np.full(64, 2 * math.pi / 64)[None, :]
    pt = harmonics.AngularPoint(3, (T1, T2))
    labs = harmonics.labels(3, 4)
    Y = np.array([harmonics.harmonic(lab, pt) for lab in labs])
    G = np.einsum("aij,bij,ij->ab", np.conj(Y), Y, W)
    return float(np.max(np.abs(G - np.eye(len(labs))))), 1e-6


# -------------------------------------------------------------- solver ---

def _three_way():
    g = solver.GridState.from_function(
        lambda x: math.pi ** -0.25 * np.exp(-(x - 0.5) ** 2 / 2), -12, 12, 2048)
    t = 0.4
    a = propagators.apply_kernel(propagators.KernelSpec("modified1d"), g, t)
    b = solver.evolve_1d(g, t, 60)
    c = solver.crank_nicolson(g, t, 4000)
    dist = max(a.distance(b), a.distance(c), b.distance(c))
    drift = max(abs(s.norm() - 1) for s in (a, b, c))
    return max(dist, drift * 10), 1e-3


def _coefficient_norm():
    g = solver.GridState.from_function(
        lambda x: math.pi ** -0.25 * np.exp(-(x + 0.3) ** 2 / 2), -12, 12, 1024)
    worst = 0.0
    for block in solver.expand_1d(g, 40):
        worst = max(worst, abs(solver.evolve_coeffs(block, 0.7).norm2() - block.norm2()))
    return worst, 1e-6


def _parity_blocks():
    g = solver.GridState.from_function(
        lambda x: x * np.exp(-x * x / 2), -12, 12, 1024)
    even, odd = solver.expand_1d(g, 40)
    out = solver.synthesize_1d((solver.evolve_coeffs(even, 0.5), solver.evolve_coeffs(odd, 0.5)), g)
    v = out.values
    return float(np.max(np.abs(v + v[::-1]))), 1e-10


SUITES = {
    "specfun": [
        ("specfun.gamma_recurrence", _gamma_recurrence),
        ("specfun.meixner_pollaczek_orthogonality", _mp_orthogonality),
        ("specfun.jacobi_orthogonality", _jacobi_orthogonality),
        ("specfun.meixner_orthogonality", _meixner_orthogonality),
        ("specfun.hermite_orthonormality", _hermite_orthonormality),
        ("specfun.laplace_0f1", _laplace_appendix),
    ],
    "su11": [
        ("su11.bargmann_unitarity", _bargmann_unitarity),
        ("su11.greens_u_vs_rk4", _greens_vs_rk4),
        ("su11.sys_u_vs_rk4", _sys_vs_rk4),
        ("su11.fourier_integral", _fourier_integral),
    ],
    "propagators": [
        ("propagators.pde_residual_modified", _pde_modified),
        ("propagators.pde_residual_forced", _pde_forced),
        ("propagators.radial_sum_vs_product", _radial_vs_product),
        ("propagators.relativistic_eigensum", _relativistic_eigensum),
        ("propagators.modified_relativistic_identity", _modified_relativistic_identity),
    ],
    "harmonics": [
        ("harmonics.jacobi_anger", _jacobi_anger),
        ("harmonics.plane_wave_3d", _plane_wave_3d),
        ("harmonics.plane_wave_4d_trees", _plane_wave_4d_trees),
        ("harmonics.sphere_orthonormality", _sphere_orthonormality),
    ],
    "solver": [
        ("solver.three_way_agreement", _three_way),
        ("solver.coefficient_norm", _coefficient_norm),
        ("solver.parity_blocks", _parity_blocks),
    ],
}


def run_suite(name, tolerance_scale=1.0):
    """Run one suite (or ``"all"``) and return a list of CheckResult."""
    if name == "all":
        checks = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise KeyError(f"unknown suite {name!r}")
    results = []
    for check_id, fn in checks:
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                residual, tol = fn()
                residual = float(residual)
            except Exception:
                residual, tol = math.inf, 0.0
        tol = tol * tolerance_scale
        results.append(CheckResult(check_id, residual, tol, bool(residual <= tol),
                                   time.perf_counter() - t0))
    return results
