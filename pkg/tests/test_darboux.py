import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from weylforge import darboux
from weylforge.darboux import (
    DegenerateForm,
    IntegrabilityFailure,
    NonStandardConstantPart,
    QuantModulePresentation,
    apply_generators,
    darboux_normalize,
    linear_darboux,
    omega0,
    preserves_J,
    quantize_module_generators,
    solve_gradient_system,
    standard_matrix,
)
from weylforge.formcalc import FormalForm, PolyVec
from weylforge.poly import Poly
from weylforge.weyl import MatWeyl, WeylElement


def _congruent(A, P):
    A, P = sp.Matrix(A), sp.Matrix(P)
    return P.T * A * P


def test_linear_standard_is_identity():
    S = standard_matrix(2)
    assert sp.Matrix(linear_darboux(S)) == sp.eye(4)


def test_linear_rescale():
    P = linear_darboux([[0, 3], [-3, 0]])
    assert _congruent([[0, 3], [-3, 0]], P) == sp.Matrix(standard_matrix(1))
    assert P[0][1] == 0 and P[1][0] == 0


@given(st.integers(0, 10**6), st.integers(0, 1))
@settings(max_examples=30, deadline=None)
def test_linear_random_4x4(seed, q):
    rng = random.Random(seed)
    M = sp.Matrix(4, 4, lambda i, j: rng.randint(-3, 3))
    A = M - M.T
    if A.det() == 0:
        return
    A = [[Fraction(int(v)) for v in A.row(i)] for i in range(4)]
    try:
        P = linear_darboux(A, q)
    except DegenerateForm:
        pytest.fail("nondegenerate form rejected")
    except ValueError:
        return  # W not coisotropic for this draw
    assert _congruent(A, P) == sp.Matrix(standard_matrix(2))
    # E_i and F_{>q} stay inside W = {y_1..y_q = 0}
    cols = [0, 1] + [2 + j for j in range(q, 2)]
    assert all(P[2 + r][c] == 0 for r in range(q) for c in cols)


def test_normalize_standard_has_no_steps():
    assert darboux_normalize(omega0(2), 1, 5).steps == []


def test_normalize_worked_example():
    alpha = omega0(1) + FormalForm.basis(1, (1, 0), (0, 1))
    f = darboux_normalize(alpha, 1, 4)
    mu1 = PolyVec(1, {((2, 0), (0,), 0, 0): Fraction(1, 3), ((1, 1), (1,), 0, 0): Fraction(1, 3)})
    assert f.steps[0] == mu1
    assert f.pullback(alpha) == omega0(1).with_trunc(4)
    assert all(preserves_J(m, 1) for m in f.steps)


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_normalize_random(seed):
    rng = random.Random(seed)
    alpha = darboux.random_closed_perturbation(rng, 2, 1, 5)
    f = darboux_normalize(alpha, 1, 5)
    assert f.pullback(alpha) == omega0(2).with_trunc(5)
    assert all(preserves_J(m, 1) for m in f.steps)


def test_normalize_refuses_nonstandard_constant():
    with pytest.raises(NonStandardConstantPart):
        darboux_normalize(omega0(1).scale(2), 0, 3)


def P2(terms):
    return Poly(2, terms)


def P4(terms):
    return Poly(4, terms)


def test_gradient_examples():
    assert solve_gradient_system([[[P2({(1, 0): 1})]]], 1) == [[P2({(2, 0): Fraction(1, 2)})]]
    G = solve_gradient_system([[[P4({(0, 1, 0, 0): 1})]], [[P4({(1, 0, 0, 0): 1})]]], 2)
    assert G == [[P4({(1, 1, 0, 0): 1})]]
    with pytest.raises(IntegrabilityFailure):
        solve_gradient_system([[[P4({(0, 1, 0, 0): 1})]], [[P4({})]]], 2)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_gradient_inverts_differentiation(seed):
    rng = random.Random(seed)
    terms = {}
    for _ in range(4):
        m = (rng.randint(0, 3), rng.randint(0, 3), 0, 0)
        if m[0] + m[1]:
            terms[m] = rng.randint(-3, 3)
    G = P4(terms)
    F = [[[G.diff(0)]], [[G.diff(1)]]]
    assert solve_gradient_system(F, 2) == [[G]]


def _lift_ok(pres, U):
    return all(
        darboux._vanishes_mod(m, pres.T, pres.wtrunc - 2)
        for s in range(pres.q)
        for m in apply_generators(U, pres, s)
    )


def test_lift_trivial_presentation():
    zero = WeylElement.zero(2, 8)
    pres = QuantModulePresentation(2, 2, 1, [[[zero, zero], [zero, zero]]], 4, 8)
    assert quantize_module_generators(pres) == MatWeyl.from_constant([[1, 0], [0, 1]], 2, 8)


def test_lift_exp_branch():
    W = 10
    pres = QuantModulePresentation(1, 1, 1, [[[WeylElement(1, {((1,), (0,), 1): 1}, W)]]], 4, W)
    U = quantize_module_generators(pres)
    x = sp.Symbol("x")
    want = sp.Poly(sp.series(sp.exp(-x**2 / 2), x, 0, W).removeO(), x)
    got = {(a[0],): v for (a, b, c), v in U.rows[0][0].terms.items() if c == 0}
    assert got == {m: Fraction(str(c)) for m, c in want.terms()}
    assert _lift_ok(pres, U)


@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (2, 1, 2), (1, 2, 2), (2, 2, 2)]))
@settings(max_examples=8, deadline=None)
def test_lift_random_gauges(seed, shape):
    e, q, n = shape
    V = darboux.random_gauge(random.Random(seed), n, e, 8)
    pres = darboux.presentation_from_gauge(V, q, 4)
    assert _lift_ok(pres, quantize_module_generators(pres))
