import random

import sympy as sp
from hypothesis import given, settings, strategies as st

from weylforge.suites import random_weyl
from weylforge.weyl import (
    GElement,
    MatWeyl,
    ModuleElement,
    WeylElement,
    embed_h,
    g_bracket,
    graded_component,
    in_ideal_J,
    module_act,
    principal_symbol,
    project_h,
    weyl_commutator,
    weyl_mul,
)


def W(n, terms, wtrunc=None, cmin=0):
    return WeylElement(n, terms, wtrunc, cmin)


x1, y1, h1 = WeylElement.x(1, 0), WeylElement.y(1, 0), WeylElement.h(1)


def test_commutation_relation():
    assert weyl_mul(y1, x1) == weyl_mul(x1, y1) + h1
    assert weyl_mul(x1, y1) == W(1, {((1,), (1,), 0): 1})


def test_y_squared_x():
    # y^2 x = x y^2 + 2 h y
    assert weyl_mul(weyl_mul(y1, y1), x1) == W(1, {((1,), (2,), 0): 1, ((0,), (1,), 1): 2})


def test_commutators():
    assert weyl_commutator(y1, x1) == h1
    assert weyl_commutator(WeylElement.x(2, 0), WeylElement.x(2, 1)).is_zero()
    assert weyl_commutator(weyl_mul(y1, y1), x1) == W(1, {((0,), (1,), 1): 2})


def test_principal_symbol_examples():
    assert principal_symbol(weyl_mul(x1, y1) + h1) == principal_symbol(weyl_mul(x1, y1))
    assert principal_symbol(W(2, {((0, 1), (0, 0), 2): 1})).is_zero()


def _op(a, g, xs, h):
    out = 0
    for (ea, eb, c), v in a.terms.items():
        t = g
        for i, k in enumerate(eb):
            for _ in range(k):
                t = h * sp.diff(t, xs[i])
        m = sp.Rational(v.numerator, v.denominator) * h**c
        for i, k in enumerate(ea):
            m *= xs[i] ** k
        out += m * t
    return sp.expand(out)


@given(st.integers(0, 10**6), st.integers(1, 2))
@settings(max_examples=25, deadline=None)
def test_product_is_operator_composition(seed, n):
    rng = random.Random(seed)
    a, b = random_weyl(rng, n, None), random_weyl(rng, n, None)
    xs, h = sp.symbols(f"x1:{n + 1}"), sp.Symbol("h")
    g = sp.Mul(*[(2 + xs[i]) ** 6 for i in range(n)])
    assert sp.expand(_op(weyl_mul(a, b), g, xs, h) - _op(a, _op(b, g, xs, h), xs, h)) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_symbol_is_multiplicative(seed):
    rng = random.Random(seed)
    a, b = random_weyl(rng, 2, None), random_weyl(rng, 2, None)
    assert principal_symbol(weyl_mul(a, b)) == principal_symbol(a) * principal_symbol(b)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_truncated_product_agrees_with_exact(seed):
    rng = random.Random(seed)
    a, b = random_weyl(rng, 2, None), random_weyl(rng, 2, None)
    assert weyl_mul(a.with_trunc(6), b.with_trunc(6)) == weyl_mul(a, b).with_trunc(6)


def test_graded_components():
    g = GElement.scalar(W(1, {((1,), (1,), -1): 1, ((3,), (0,), 0): 1}, None, -1), 1)
    assert graded_component(g, 0) == GElement.scalar(W(1, {((1,), (1,), -1): 1}, None, -1), 1)
    hinv = GElement.scalar(WeylElement.h(1, -1, cmin=-1), 2)
    assert graded_component(hinv, -2) == hinv
    e12 = MatWeyl.unit(1, 2, 0, 1)
    assert graded_component(e12, 0) == e12


def test_projection_examples():
    p = project_h(GElement.scalar(W(2, {((1, 1), (0, 0), -1): 1}, None, -1), 1))
    assert p.sp_dict == {((1, 1), (0, 0), -1): 1} and not p.aprime.coeffs(0)
    p = project_h(GElement.scalar(WeylElement.h(1, -1, cmin=-1), 2))
    assert p.aprime.coeff(-1) == 1 and not p.sp
    assert project_h(GElement.scalar(x1, 1)).is_zero()


def test_projection_is_left_inverse_of_embedding():
    p = project_h(GElement.scalar(W(2, {((1, 1), (0, 0), -1): 3, ((0, 0), (0, 0), -1): 2}, None, -1), 2))
    assert project_h(embed_h(p, 2)) == p


def test_g_bracket_examples():
    a = GElement.scalar(W(1, {((1,), (1,), -1): 1}, None, -1), 1)
    assert g_bracket(a, GElement.scalar(x1, 1)) == GElement.scalar(x1, 1)
    e12, e21 = MatWeyl.unit(1, 2, 0, 1), MatWeyl.unit(1, 2, 1, 0)
    assert g_bracket(e12, e21) == MatWeyl.unit(1, 2, 0, 0) - MatWeyl.unit(1, 2, 1, 1)
    hinv = GElement.scalar(WeylElement.h(1, -1, cmin=-1), 2)
    assert g_bracket(hinv, e12).is_zero()


def test_module_action_examples():
    u = ModuleElement.generator(1, 1, 1, 0)
    assert module_act(y1, u).is_zero()
    xu = ModuleElement([x1], 1)
    assert module_act(y1, xu) == ModuleElement([h1], 1)
    assert module_act(x1, xu) == ModuleElement([weyl_mul(x1, x1)], 1)


def test_ideal_membership():
    assert in_ideal_J(W(3, {((0, 0, 1), (1, 0, 0), 0): 1, ((0, 0, 0), (0, 0, 0), 2): 1}), 1)
    assert not in_ideal_J(WeylElement.x(3, 0), 1)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_ideal_is_two_sided(seed):
    rng = random.Random(seed)
    a = random_weyl(rng, 2, 8)
    y = WeylElement.y(2, 0, 8)
    assert in_ideal_J(weyl_mul(a, y), 1) and in_ideal_J(weyl_mul(y, a), 1)
