import math
import warnings

import numpy as np
import pytest
from scipy.optimize import bisect

from oscillex.errors import DiagonalPoint, DimensionMismatch, LeakageWarning, SingularTime
from oscillex.grid import GridState
from oscillex.propagators import (
    Expr, ForcingSpec, KernelSpec, RelParams, apply_kernel, forced_phase, kernel_forced,
    kernel_modified_1d, kernel_modified_nd, kernel_modified_nd_direct, kernel_modified_relativistic,
    kernel_radial, kernel_radial_sum, kernel_relativistic, mu, mu_root, rel_double_sum,
    rel_eigensum, rel_psi, rel_psi_all,
)
from oscillex.quadrature import integrate_adaptive
from oscillex.solver import crank_nicolson, pde_residual
from oscillex.specfun import gamma_complex
from oscillex.su11 import bargmann_v

NU = (1 + math.sqrt(5)) / 2
REL = RelParams(1.0)


def gaussian_grid(points=2048, x0=0.0, p0=0.0, sigma=1.0, L=12.0):
    def f(x):
        return (np.pi * sigma ** 2) ** -0.25 * np.exp(-(x - x0) ** 2 / (2 * sigma ** 2) + 1j * p0 * x)
    return GridState.from_function(f, -L, L, points)


# --------------------------------------------------------------- mu ---

def test_mu_values():
    assert mu(0.0) == 0
    assert mu(math.pi / 4) == pytest.approx(math.sqrt(2) / 2 * math.exp(math.pi / 4), rel=1e-14)
    assert mu(math.pi / 4) == pytest.approx(1.550883, abs=1e-6)


def test_mu_root_bisection():
    ref = bisect(lambda s: math.tan(s) + math.tanh(s), 2.0, 2.5, xtol=1e-14)
    assert mu_root() == pytest.approx(ref, abs=1e-10)
    assert mu_root() == pytest.approx(2.36502, abs=1e-5)


# ------------------------------------------------------- 1D kernel ---

def test_kernel_origin_modulus():
    t = math.pi / 4
    g = kernel_modified_1d(0.0, 0.0, t)
    assert g == pytest.approx((2j * math.pi * mu(t)) ** -0.5, rel=1e-14)
    assert abs(g) == pytest.approx((2 * math.pi * 1.55087) ** -0.5, rel=1e-5)
    assert abs(g) == pytest.approx(0.320347, abs=1e-6)


def test_kernel_modulus_independent_of_points():
    rng = np.random.default_rng(1)
    t = 0.7
    ref = abs(kernel_modified_1d(0.0, 0.0, t))
    x, y = rng.uniform(-3, 3, (2, 10))
    assert np.allclose(np.abs(kernel_modified_1d(x, y, t)), ref, rtol=1e-13)


def test_kernel_even_odd_split():
    x, y, t = 0.7, -0.3, 0.5
    half = 0.5 * (kernel_radial(0, 1, x, y, t) + kernel_radial(1, 1, x, y, t))
    assert half == pytest.approx(kernel_modified_1d(x, y, t), rel=1e-13)


def test_kernel_even_part_cosine_identity():
    x, y, t = 0.9, 0.4, 0.8
    even = kernel_modified_1d(x, y, t) + kernel_modified_1d(-x, y, t)
    assert kernel_radial(0, 1, x, y, t) == pytest.approx(even, rel=1e-13)
    odd = kernel_modified_1d(x, y, t) - kernel_modified_1d(-x, y, t)
    assert kernel_radial(1, 1, x, y, t) == pytest.approx(odd, rel=1e-12)


def test_kernel_singular_time():
    with pytest.raises(SingularTime):
        kernel_modified_1d(0.1, 0.2, 0.0)
    with pytest.raises(SingularTime):
        kernel_modified_1d(0.1, 0.2, mu_root())


def test_kernel_x_derivative_identity():
    h = 1e-5
    for x, y, t in [(0.4, -0.7, 0.3), (1.2, 0.5, 1.1), (-2.0, 1.5, 2.0)]:
        u = kernel_modified_1d(x, y, t)
        du = (kernel_modified_1d(x + h, y, t) - kernel_modified_1d(x - h, y, t)) / (2 * h)
        nc = math.cos(t) * math.cosh(t) - math.sin(t) * math.sinh(t)
        ref = 1j * (x * nc - y) / mu(t) * u
        assert abs(du - ref) < 1e-6 * max(1, abs(ref))


def test_pde_residual_second_order():
    # the second-order stencil is adequate once the phase oscillates slowly
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(50):
        x, y = rng.uniform(-3, 3, 2)
        t = rng.uniform(0.35, 1.5)
        worst = max(worst, pde_residual(kernel_modified_1d, x, y, t))
    assert worst < 1e-4


def test_pde_residual_fourth_order_full_range():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        x, y = rng.uniform(-3, 3, 2)
        t = rng.uniform(0.1, 1.5)
        worst = max(worst, pde_residual(kernel_modified_1d, x, y, t, ht=1e-5, order=4))
    assert worst < 1e-4


# ------------------------------------------------------ nD kernels ---

def test_nd_reduces_to_1d():
    assert kernel_modified_nd([0.3], [-0.2], 0.6) == pytest.approx(kernel_modified_1d(0.3, -0.2, 0.6))


def test_nd_origin():
    t = 0.9
    assert kernel_modified_nd(np.zeros(3), np.zeros(3), t) == pytest.approx(
        (2j * math.pi * mu(t)) ** -1.5, rel=1e-13)


def test_nd_product_vs_direct():
    rng = np.random.default_rng(4)
    for _ in range(10):
        x, y = rng.normal(size=(2, 3))
        t = rng.uniform(0.1, 2.0)
        a, b = kernel_modified_nd(x, y, t), kernel_modified_nd_direct(x, y, t)
        assert abs(a - b) < 1e-12 * abs(b)


def test_nd_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kernel_modified_nd(np.zeros(3), np.zeros(2), 0.5)


def test_radial_small_r_phase():
    t, rp = 0.6, 1.3
    for n in (1, 2, 3, 5):
        m = mu(t)
        ref = (np.exp(-1j * math.pi * n / 4) / (2 ** (n / 2 - 1) * math.gamma(n / 2)) * m ** (-n / 2)
               * np.exp(1j * rp * rp * (math.cos(t) * math.cosh(t) + math.sin(t) * math.sinh(t)) / (2 * m)))
        assert kernel_radial(0, n, 1e-9, rp, t) == pytest.approx(ref, rel=1e-10)


def test_radial_sum_reproduces_product():
    r, rp, ang, t = 0.8, 1.1, math.pi / 3, 0.4
    x = np.array([0.0, 0.0, r])
    y = rp * np.array([math.sin(ang), 0.0, math.cos(ang)])
    ref = kernel_modified_nd(x, y, t)
    assert abs(kernel_radial_sum(3, 30, x, y, t) - ref) < 1e-6


def test_radial_sum_random_points():
    rng = np.random.default_rng(5)
    for _ in range(3):
        x, y = rng.uniform(-0.8, 0.8, (2, 3))
        t = rng.uniform(0.3, 1.0)
        ref = kernel_modified_nd(x, y, t)
        assert abs(kernel_radial_sum(3, 30, x, y, t) - ref) < 1e-6


# ---------------------------------------------------- forced oscillator ---

COS_SIN = ForcingSpec(Expr("cos", 1.0), Expr("sin", 1.0))


def test_forced_zero_is_free():
    spec = ForcingSpec()
    assert forced_phase(spec, 0.8) == forced_phase(spec, 0.8)
    ph = forced_phase(spec, 0.8)
    assert (ph.alpha, ph.beta, ph.gamma) == (0.0, 0.0, 0.0)
    assert kernel_forced(0.3, -0.1, 0.8, spec) == kernel_modified_1d(0.3, -0.1, 0.8)


def test_forced_alpha_taylor():
    ph = forced_phase(ForcingSpec(Expr("const", 1.0)), 0.01)
    assert ph.alpha == pytest.approx(0.005, abs=1e-6)


def test_forced_alpha_initial_g():
    ph = forced_phase(ForcingSpec(g=Expr("const", 1.0)), 1e-3)
    assert ph.alpha == pytest.approx(0.5, abs=1e-3)


def test_forced_phase_initial_values():
    # a nonzero g(0) shifts alpha and beta at t=0+ with alpha + beta = 0
    ph = forced_phase(COS_SIN, 0.0)
    assert (ph.alpha, ph.beta, ph.gamma) == (0.0, 0.0, 0.0)
    spec = ForcingSpec(g=Expr("cos", 1.0))
    ph = forced_phase(spec, 0.0)
    assert ph.alpha == pytest.approx(0.5) and ph.beta == pytest.approx(-0.5)


def test_forced_modulus_unchanged():
    for t in (0.3, 1.0):
        assert abs(kernel_forced(0.4, 1.1, t, COS_SIN)) == pytest.approx(
            abs(kernel_modified_1d(0.4, 1.1, t)), rel=1e-13)


def test_forced_pde_residual():
    spec = ForcingSpec(Expr("cos", 1.0))
    G = lambda x, y, t: kernel_forced(x, y, t, spec)
    assert pde_residual(G, 0.5, -0.2, 0.6, model=spec) < 1e-5


def test_forced_phase_odes():
    h = 1e-4
    f, g = COS_SIN.f, COS_SIN.g
    for t in (0.05, 0.3, 0.8, 1.5):
        p0, pp, pm = (forced_phase(COS_SIN, s) for s in (t, t + h, t - h))
        da, db, dc = ((getattr(pp, k) - getattr(pm, k)) / (2 * h) for k in ("alpha", "beta", "gamma"))
        a = p0.alpha
        tt, th = math.tan(t), math.tanh(t)
        r1 = da + 2 / (tt + th) * a - (f(t) + g(t) * (1 - tt * th) / (tt + th))
        r2 = db - ((1 + math.cos(2 * t)) * a - g(t)) / mu(t)
        r3 = dc - (a * g(t) - 0.5 * (1 + math.cos(2 * t)) * a * a)
        assert max(abs(r1), abs(r2), abs(r3)) < 1e-5


def test_forced_singular():
    with pytest.raises(SingularTime):
        forced_phase(COS_SIN, 2.4)


# ------------------------------------------------- relativistic models ---

def test_rel_params():
    assert REL.nu == pytest.approx(NU, rel=1e-14)
    assert REL.nu == pytest.approx(1.61803, abs=1e-5)
    assert REL.energy(0) == pytest.approx(NU)
    assert RelParams.from_nu(NU).c_over_lw == pytest.approx(1.0)


def test_rel_psi_normalised():
    val = integrate_adaptive(lambda x: abs(rel_psi(0, x, REL)) ** 2, -40, 40)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_rel_psi_orthogonal():
    val = integrate_adaptive(lambda x: np.conj(rel_psi(0, x, REL)) * rel_psi(1, x, REL), -40, 40)
    assert abs(val) < 1e-8


def test_rel_psi_recurrence_matches_direct():
    x = np.linspace(-4, 4, 9)
    rows = rel_psi_all(8, x, REL)
    for n in (0, 3, 8):
        assert np.allclose(rows[n], rel_psi(n, x, REL), rtol=1e-11, atol=1e-15)


def test_relativistic_damped_eigensum():
    x, y, t = 0.3, -0.4, -0.5j
    ref = rel_eigensum(x, y, t, REL, nmax=40)
    assert abs(kernel_relativistic(x, y, t, REL) - ref) < 1e-6 * abs(ref)


def test_relativistic_hermiticity():
    t = 0.4
    for x, y in [(0.3, -0.4), (1.2, 0.7)]:
        assert np.conj(kernel_relativistic(x, y, t, REL)) == pytest.approx(
            kernel_relativistic(y, x, -t, REL), rel=1e-10)


def test_relativistic_near_half_period():
    t = 2 * (math.pi / 2 - 1e-6)
    val = kernel_relativistic(0.3, -0.4, t, REL)
    assert np.isfinite(val)


def test_relativistic_errors():
    with pytest.raises(DiagonalPoint):
        kernel_relativistic(0.3, 0.3, 0.4, REL)
    with pytest.raises(SingularTime):
        kernel_relativistic(0.3, -0.4, 0.0, REL)
    with pytest.raises(SingularTime):
        kernel_modified_relativistic(0.3, -0.4, 4 * math.pi, REL)


def test_modified_relativistic_identity():
    x, y, t = 0.3, -0.4, -0.5j
    g = kernel_modified_relativistic(x, y, t, REL)
    g0 = kernel_relativistic(x, y, t, REL) * np.exp(-2j * t * y / REL.lam)
    assert abs(g - g0) < 1e-8 * abs(g0)


def test_modified_relativistic_double_sum():
    x, y, t = 0.3, -0.4, -0.5j
    ref = rel_double_sum(x, y, t, REL, outer=31)
    assert abs(kernel_modified_relativistic(x, y, t, REL) - ref) < 1e-5 * abs(ref)


def test_single_sum_reduction():
    p = RelParams.from_nu(NU)
    j = p.nu - 1
    P, y, t = 1, 0.5, -0.3j
    m = j + 1 + P
    psi = np.conj(rel_psi_all(40, y, p))
    total = sum(1j ** q * bargmann_v(j, j + 1 + q, m, 2 * t) * psi[q] for q in range(41))
    ref = 1j ** P * np.exp(-2j * t * y / p.lam) * psi[P]
    assert abs(total - ref) < 1e-6


def test_rel_psi_hypergeometric_form():
    # stationary states written through a 2F1 at argument 2
    from oscillex.specfun import hyp2f1
    j, lam = NU - 1, 1.0
    for n, x in [(0, 0.4), (2, -1.1), (3, 0.7)]:
        m = j + 1 + n
        ref = (2 ** (j + 1) / math.sqrt(2 * math.pi * lam) * (j * (j + 1)) ** (-0.5j * x / lam)
               * gamma_complex(j + 1 + 1j * x / lam) / math.gamma(2 * j + 2)
               * math.sqrt(math.gamma(m + j + 1) / math.factorial(n)) * (-1j) ** n
               * hyp2f1(-n, j + 1 - 1j * x / lam, 2 * j + 2, 2.0))
        assert rel_psi(n, x, REL) == pytest.approx(ref, rel=1e-11)


# ------------------------------------------------------ grid application ---

def test_apply_kernel_short_time():
    psi0 = gaussian_grid()
    out = apply_kernel(KernelSpec("modified1d"), psi0, 1e-3)
    assert out.distance(psi0) < 1e-2


def test_apply_kernel_zero_time_identity():
    psi0 = gaussian_grid(256)
    assert apply_kernel(KernelSpec("modified1d"), psi0, 0.0) is psi0


def test_apply_kernel_norm():
    out = apply_kernel(KernelSpec("modified1d"), gaussian_grid(x0=0.5, p0=0.3), 0.4)
    assert out.norm() == pytest.approx(1.0, abs=1e-4)


def test_apply_kernel_vs_crank_nicolson():
    psi0 = gaussian_grid(2048, x0=0.5, sigma=0.9, L=15.0)
    a = apply_kernel(KernelSpec("modified1d"), psi0, 0.6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        b = crank_nicolson(psi0, 0.6, 600)
    assert a.distance(b) < 1e-3


def test_apply_kernel_forced_vs_crank_nicolson():
    spec = ForcingSpec(Expr("cos", 0.5), Expr("sin", 0.3))
    psi0 = gaussian_grid(2048, sigma=0.9, L=15.0)
    a = apply_kernel(KernelSpec("forced", forcing=spec), psi0, 0.5)
    b = crank_nicolson(psi0, 0.5, 500, model=spec)
    assert a.distance(b) < 1e-3


def test_apply_kernel_direct_matches_separable():
    psi0 = gaussian_grid(256, L=8.0)
    a = apply_kernel(KernelSpec("modified1d"), psi0, 0.5)
    b = apply_kernel(KernelSpec("radial", K=0, n=1), psi0, 0.5)
    c = apply_kernel(KernelSpec("radial", K=1, n=1), psi0, 0.5)
    assert np.max(np.abs(a.values - 0.5 * (b.values + c.values))) < 1e-6


def test_apply_kernel_leakage_warning():
    psi0 = GridState.from_function(lambda x: np.exp(-x * x / 50), -5, 5, 256)
    with pytest.warns(LeakageWarning):
        apply_kernel(KernelSpec("modified1d"), psi0, 0.3)


def test_apply_kernel_singular():
    with pytest.raises(SingularTime):
        apply_kernel(KernelSpec("modified1d"), gaussian_grid(256), mu_root())
