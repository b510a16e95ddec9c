import math
import warnings

import numpy as np
import pytest

from oscillex.errors import EdgeLeakage, SingularTime, StepSizeWarning, TruncationWarning
from oscillex.grid import GridState
from oscillex.propagators import Expr, ForcingSpec, KernelSpec, apply_kernel, kernel_forced, kernel_modified_1d
from oscillex.solver import (
    BLOCKS, ExpansionCoeffs, crank_nicolson, evolve_1d, evolve_coeffs, expand_1d, pde_residual,
    synthesize_1d,
)

L, NPTS = 12.0, 2048


def psi0_fn(x):
    return math.pi ** -0.25 * np.exp(-x * x / 2)


def psi1_fn(x):
    return math.sqrt(2) * x * psi0_fn(x)


def grid(f, points=NPTS, lim=L):
    return GridState.from_function(f, -lim, lim, points)


GAUSS = grid(lambda x: math.pi ** -0.25 * np.exp(-(x - 0.5) ** 2 / 2))


# ------------------------------------------------------------- expansion ---

def test_expand_ground_state():
    even, odd = expand_1d(grid(psi0_fn), 60)
    assert even.j == -0.75 and odd.j == -0.25
    assert even.coeffs[0] == pytest.approx(1.0, abs=1e-8)
    assert np.max(np.abs(even.coeffs[1:])) < 1e-8
    assert np.max(np.abs(odd.coeffs)) < 1e-8


def test_expand_first_excited():
    even, odd = expand_1d(grid(psi1_fn), 60)
    assert odd.coeffs[0] == pytest.approx(1.0, abs=1e-8)
    assert np.max(np.abs(odd.coeffs[1:])) < 1e-8
    assert np.max(np.abs(even.coeffs)) < 1e-8


def test_expand_superposition():
    even, odd = expand_1d(grid(lambda x: (psi0_fn(x) + psi1_fn(x)) / math.sqrt(2)), 60)
    assert even.coeffs[0] == pytest.approx(1 / math.sqrt(2), abs=1e-8)
    assert odd.coeffs[0] == pytest.approx(1 / math.sqrt(2), abs=1e-8)


def test_expand_rejects_edge_leakage():
    with pytest.raises(EdgeLeakage):
        expand_1d(grid(lambda x: np.exp(-x * x / 40)), 60)


def test_expansion_coeffs_fields():
    c = ExpansionCoeffs(-0.25, np.array([1.0, 0.0, 0.5]))
    assert c.size == 3
    assert np.allclose(c.m, [0.75, 1.75, 2.75])
    assert list(c.hermite_orders) == [1, 3, 5]
    assert c.norm2() == pytest.approx(1.25)
    assert set(BLOCKS) == {-0.75, -0.25}


# ------------------------------------------------------------- evolution ---

def test_evolve_identity_at_zero():
    even, _ = expand_1d(GAUSS, 40)
    assert np.array_equal(evolve_coeffs(even, 0.0).coeffs, even.coeffs)


def test_evolve_norm_conserved():
    for block in expand_1d(GAUSS, 40):
        assert evolve_coeffs(block, 0.7).norm2() == pytest.approx(block.norm2(), abs=1e-6)


def test_evolve_truncation_warning():
    # mass parked in the top mode leaks out of the truncated block
    c = np.zeros(10, dtype=complex)
    c[-1] = 1
    with pytest.warns(TruncationWarning):
        evolve_coeffs(ExpansionCoeffs(-0.75, c), 0.7)


@pytest.mark.parametrize("block", [0, 1])
def test_evolve_solves_coefficient_system(block):
    c0 = expand_1d(GAUSS, 60)[block]
    t, h = 0.3, 1e-5
    cp, cm, ct = (evolve_coeffs(c0, s).coeffs for s in (t + h, t - h, t))
    j, m, d = c0.j, c0.m, np.exp(-2j * t)
    rhs = 2 * m * ct
    rhs[1:] += d * np.sqrt((m[1:] - j - 1) * (m[1:] + j)) * ct[:-1]
    rhs[:-1] += np.conj(d) * np.sqrt((m[:-1] + j + 1) * (m[:-1] - j)) * ct[1:]
    assert np.max(np.abs(1j * (cp - cm) / (2 * h) - rhs)[:40]) < 1e-5


def test_blocks_do_not_mix():
    even, odd = expand_1d(grid(psi0_fn), 60)
    even_t = evolve_coeffs(even, 0.9)
    odd_t = evolve_coeffs(odd, 0.9)
    out = synthesize_1d((even_t, ExpansionCoeffs(-0.25, np.zeros(odd.size))), GAUSS)
    # an even state stays even
    assert np.max(np.abs(out.values - out.values[::-1])) < 1e-12
    assert np.max(np.abs(odd_t.coeffs)) < 1e-8


def test_round_trip():
    assert synthesize_1d(expand_1d(GAUSS, 60), GAUSS).distance(GAUSS) < 1e-6


# ------------------------------------------------------- three routes ---

@pytest.fixture(scope="module")
def routes():
    t = 0.4
    return (apply_kernel(KernelSpec("modified1d"), GAUSS, t), evolve_1d(GAUSS, t, 60),
            crank_nicolson(GAUSS, t, 4000))


def test_three_way_agreement(routes):
    k, e, c = routes
    assert k.distance(e) < 1e-3
    assert k.distance(c) < 1e-3
    assert e.distance(c) < 1e-3


def test_norm_on_every_route(routes):
    for r in routes:
        assert abs(r.norm() - 1) < 1e-4


def test_crank_nicolson_norm_drift(routes):
    assert abs(routes[2].norm() - GAUSS.norm()) < 1e-6


def test_crank_nicolson_zero_time():
    assert crank_nicolson(GAUSS, 0.0, 10) is GAUSS


def test_crank_nicolson_step_warning():
    with pytest.warns(StepSizeWarning):
        crank_nicolson(GAUSS, 0.4, 10)


def test_crank_nicolson_edge_leakage():
    wide = grid(lambda x: np.exp(-x * x / 8), 512, 8.0)
    with pytest.raises(EdgeLeakage):
        crank_nicolson(wide, 1.0, 1000)


def test_crank_nicolson_forced_vs_kernel():
    spec = ForcingSpec(Expr("cos", 1.0), Expr("sin", 0.5))
    k = apply_kernel(KernelSpec("forced", forcing=spec), GAUSS, 0.4)
    c = crank_nicolson(GAUSS, 0.4, 4000, model=spec)
    assert k.distance(c) < 1e-3


def test_linearity():
    a, b = 0.6 - 0.2j, -1.1 + 0.4j
    g1 = GAUSS
    g2 = grid(lambda x: psi1_fn(x + 0.3))
    mix = g1.with_values(a * g1.values + b * g2.values)
    for evolve in (lambda g: evolve_1d(g, 0.5, 60), lambda g: crank_nicolson(g, 0.5, 500)):
        lhs = evolve(mix).values
        rhs = a * evolve(g1).values + b * evolve(g2).values
        assert np.max(np.abs(lhs - rhs)) < 1e-10


# ------------------------------------------------------- PDE residual ---

def test_residual_modified():
    assert pde_residual(kernel_modified_1d, 0.5, -0.2, 0.6) < 1e-4


def test_residual_forced():
    spec = ForcingSpec(Expr("cos", 1.0))
    assert pde_residual(lambda x, y, t: kernel_forced(x, y, t, spec), 0.5, -0.2, 0.6, spec) < 1e-4


def test_residual_negative_control():
    def free(x, y, t):
        return np.exp(1j * (x - y) ** 2 / (2 * t)) / np.sqrt(2j * math.pi * t)
    assert pde_residual(free, 0.5, -0.2, 0.6) > 1e-2


def test_residual_singular():
    from oscillex.propagators import mu_root
    with pytest.raises(SingularTime):
        pde_residual(kernel_modified_1d, 0.5, -0.2, mu_root())
    with pytest.raises(SingularTime):
        pde_residual(kernel_modified_1d, 0.5, -0.2, mu_root() + 1e-4)
