import cmath
import math

import numpy as np
from hypothesis import given, settings, strategies as st
from scipy.special import eval_jacobi, eval_genlaguerre

from oscillex.harmonics import from_cartesian, jacobi_anger, to_cartesian
from oscillex.propagators import Expr, ForcingSpec, kernel_forced, kernel_modified_1d, mu, mu_root
from oscillex.solver import ExpansionCoeffs, evolve_coeffs
from oscillex.specfun import (
    gamma_complex, hyp0f1, hyp1f1, hyp2f1, jacobi, laguerre, loggamma_complex, meixner_pollaczek,
)
from oscillex.su11 import bargmann_matrix, bargmann_v, greens_u, laguerre_poisson, rotation_kernel

settings.register_profile("oscillex", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("oscillex")

reals = st.floats(-3, 3, allow_nan=False)
small = st.floats(-0.9, 0.9, allow_nan=False)
times = st.floats(0.05, mu_root() - 0.05)
blocks = st.sampled_from([-0.75, -0.25, 0.0, 0.5, 1.0])


def complex_in(lo, hi):
    return st.builds(complex, st.floats(lo, hi), st.floats(-hi, hi))


# ------------------------------------------------------------ specfun ---

@given(complex_in(0.2, 15.0))
def test_gamma_recurrence(z):
    assert abs(gamma_complex(z + 1) - z * gamma_complex(z)) <= 1e-12 * abs(z * gamma_complex(z))


@given(complex_in(0.2, 10.0).filter(lambda z: abs(z - round(z.real)) > 0.05))
def test_gamma_reflection(z):
    # kept away from the integers, where both sides are ill-conditioned
    lhs = gamma_complex(z) * gamma_complex(1 - z)
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


@given(complex_in(0.5, 20.0))
def test_loggamma_conjugate_symmetry(z):
    assert abs(loggamma_complex(z.conjugate()) - loggamma_complex(z).conjugate()) < 1e-12


@given(st.floats(0.3, 4.0), st.floats(0.5, 4.0), st.floats(-8, 8))
def test_kummer_transformation(a, c, z):
    lhs = hyp1f1(a, c, z)
    rhs = math.exp(z) * hyp1f1(c - a, c, -z)
    assert abs(lhs - rhs) <= 1e-10 * max(1, abs(lhs))


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(0.5, 4.0), st.floats(-0.95, 0.45))
def test_hyp2f1_euler_transformation(a, b, c, z):
    lhs = hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
    assert abs(lhs - rhs) <= 1e-10 * max(1, abs(lhs))


@given(st.floats(0.5, 5.0), st.floats(0.1, 20.0))
def test_hyp0f1_contiguous(c, z):
    # c(c-1) F(c-1) - c(c-1) F(c) = z F(c+1) with F(b) = 0F1(;b;z)
    lhs = c * (c - 1) * (hyp0f1(c - 1, z) - hyp0f1(c, z)) if abs(c - 1) > 1e-6 else 0.0
    rhs = z * hyp0f1(c + 1, z) if abs(c - 1) > 1e-6 else 0.0
    assert abs(lhs - rhs) <= 1e-9 * max(1, abs(rhs))


@given(st.integers(0, 12), st.floats(-0.9, 3.0), st.floats(-0.9, 3.0), small)
def test_jacobi_vs_scipy(n, a, b, x):
    assert abs(jacobi(n, a, b, x) - eval_jacobi(n, a, b, x)) <= 1e-10 * max(1, abs(eval_jacobi(n, a, b, x)))


@given(st.integers(0, 15), st.floats(-0.9, 4.0), st.floats(0, 10))
def test_laguerre_vs_scipy(k, a, x):
    ref = eval_genlaguerre(k, a, x)
    assert abs(laguerre(k, a, x) - ref) <= 1e-9 * max(1, abs(ref))


@given(st.integers(0, 10), st.floats(0.2, 3.0), st.floats(0.2, 2.9), reals)
def test_meixner_pollaczek_reflection(n, lam, phi, x):
    # P_n(-x; pi - phi) = (-1)^n P_n(x; phi)
    lhs = meixner_pollaczek(n, lam, math.pi - phi, -x)
    rhs = (-1) ** n * meixner_pollaczek(n, lam, phi, x)
    assert abs(lhs - rhs) <= 1e-10 * max(1, abs(rhs))


# --------------------------------------------------------------- su11 ---

@given(blocks, st.integers(0, 12), st.integers(0, 12), st.floats(-2.0, 2.0))
def test_bargmann_symmetry(j, p, q, tau):
    m, mp = j + 1 + p, j + 1 + q
    assert abs(bargmann_v(j, m, mp, tau, precision="auto")
               - (-1) ** (p - q) * bargmann_v(j, mp, m, tau, precision="auto")) < 1e-12


@given(blocks, st.integers(0, 12), st.integers(0, 12), st.floats(0.05, 2.0))
def test_bargmann_time_reversal(j, p, q, tau):
    m, mp = j + 1 + p, j + 1 + q
    assert abs(bargmann_v(j, m, mp, -tau, precision="auto") - bargmann_v(j, mp, m, tau, precision="auto")) < 1e-12


@settings(max_examples=10)
@given(blocks, st.floats(0.05, 0.6), st.floats(0.05, 0.6))
def test_bargmann_group_law(j, t1, t2):
    big = bargmann_matrix(j, 50, t1) @ bargmann_matrix(j, 50, t2)
    assert np.max(np.abs(big[:8, :8] - bargmann_matrix(j, 8, t1 + t2))) < 1e-9


@given(blocks, st.integers(0, 6), st.integers(0, 6), st.floats(0.05, 1.0))
def test_greens_bargmann_relation(j, p, q, t):
    m, mp = j + 1 + p, j + 1 + q
    fac = math.sqrt(math.gamma(m + j + 1) / math.gamma(p + 1) * math.gamma(q + 1) / math.gamma(mp + j + 1))
    ref = fac * 1j ** ((q - p) % 4) * bargmann_v(j, mp, m, 2 * t)
    assert abs(greens_u(m, mp, j, t) - ref) <= 1e-12 * max(1, abs(ref))


@given(st.floats(0.0, 3.0), st.floats(0.05, 3), st.floats(0.05, 3), st.floats(-0.8, 0.8))
def test_laguerre_poisson_symmetric(a, x, y, t):
    assert abs(laguerre_poisson(a, x, y, t) - laguerre_poisson(a, y, x, t)) <= 1e-12 * abs(laguerre_poisson(a, x, y, t))


@given(st.sampled_from([-0.25, 0.25, 0.5, 1.0]), st.floats(0.1, 6.1), st.floats(0.1, 3), st.floats(0.1, 3))
def test_rotation_kernel_symmetries(j, alpha, r, rp):
    g = rotation_kernel(j, alpha, 3, r, rp)
    assert abs(g - rotation_kernel(j, alpha, 3, rp, r)) <= 1e-12 * abs(g)
    assert abs(g - np.conj(rotation_kernel(j, -alpha, 3, r, rp))) <= 1e-12 * abs(g)


# -------------------------------------------------------- propagators ---

@given(reals, reals, times)
def test_kernel_modulus(x, y, t):
    assert abs(abs(kernel_modified_1d(x, y, t)) - abs(2 * math.pi * mu(t)) ** -0.5) < 1e-12


@given(reals, reals, times)
def test_kernel_parity(x, y, t):
    assert abs(kernel_modified_1d(x, y, t) - kernel_modified_1d(-x, -y, t)) < 1e-13


@given(reals, reals, st.floats(0.05, 2.0), st.floats(-2, 2), st.floats(-2, 2))
def test_forced_kernel_unimodular_phase(x, y, t, fa, ga):
    spec = ForcingSpec(Expr("cos", fa), Expr("sin", ga))
    assert abs(abs(kernel_forced(x, y, t, spec)) - abs(kernel_modified_1d(x, y, t))) < 1e-12


# ------------------------------------------------------------ solver ---

@settings(max_examples=15)
@given(st.lists(complex_in(-1, 1), min_size=4, max_size=4), st.lists(complex_in(-1, 1), min_size=4, max_size=4),
       st.floats(0.05, 0.7), st.sampled_from([-0.75, -0.25]))
def test_evolution_linear_and_unitary(a, b, t, j):
    # low modes only, so that the 40-mode block holds the evolved state
    ca = np.array(a + [0j] * 36)
    cb = np.array(b + [0j] * 36)
    ea = evolve_coeffs(ExpansionCoeffs(j, ca), t).coeffs
    eb = evolve_coeffs(ExpansionCoeffs(j, cb), t).coeffs
    eab = evolve_coeffs(ExpansionCoeffs(j, 2 * ca - 1j * cb), t).coeffs
    assert np.max(np.abs(eab - (2 * ea - 1j * eb))) < 1e-10
    assert abs(np.vdot(ea, ea) - np.vdot(ca, ca)) < 1e-6 * max(1, abs(np.vdot(ca, ca)))


# ---------------------------------------------------------- harmonics ---

@given(st.floats(0, 5), st.floats(0, 2 * math.pi))
def test_jacobi_anger_is_exponential(z, phi):
    assert abs(jacobi_anger(z, phi, 40) - cmath.exp(1j * z * math.sin(phi))) < 1e-10


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3),
       st.sampled_from(["canonical", "tree4b"]))
def test_angular_round_trip(v, tree):
    r, pt = from_cartesian(np.array(v), tree)
    assert np.allclose(to_cartesian(pt, r), v, atol=1e-12)
