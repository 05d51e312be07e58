import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylforge.formcalc import (
    FormalForm,
    NonNilpotentField,
    NotClosed,
    PolyVec,
    alpha_form,
    contract,
    contract_pi,
    d_de_rham,
    euler_field,
    euler_primitive,
    ham_field,
    hodge_homotopy_phi,
    lie_derivative_pi,
    omega_form,
    op_exp_contract_pi,
    op_exp_wedge,
    pi_bivector,
    pullback_exp,
    random_form,
    regrade_h,
    regrade_h_sides,
    regrade_u,
    regrade_u_sides,
    sympl_star,
    wedge,
)
from weylforge.poly import Poly
from weylforge.scalars import HUSeries

F = FormalForm
ONE = F.scalar(1)

seeds = st.integers(0, 10**6)


def form(n, mono, idx, c=1, he=0, ue=0):
    return F.basis(n, mono, idx, c, he, ue)


def test_wedge_examples():
    assert wedge(form(1, (0, 0), (0,)), form(1, (0, 0), (1,))) == omega_form(1)
    assert wedge(form(1, (0, 0), (0,)), form(1, (0, 0), (0,))).is_zero()
    w = omega_form(2)
    # x1, x2, y1, y2 are indices 0..3
    assert wedge(w, w) == form(2, (0,) * 4, (0, 2, 1, 3), 2)


def test_de_rham_examples():
    assert d_de_rham(form(1, (1, 0), (1,))) == omega_form(1)
    for n in (1, 2, 3):
        assert d_de_rham(alpha_form(n)) == omega_form(n)


@given(seeds, st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_d_squared(seed, n):
    a = random_form(random.Random(seed), n, 4, 6)
    assert d_de_rham(d_de_rham(a)).is_zero()


def test_euler_contraction():
    got = contract(euler_field(1), omega_form(1))
    assert got == form(1, (1, 0), (1,)) - form(1, (0, 1), (0,))
    assert contract(euler_field(1), form(1, (2, 1), ())).is_zero()


def test_pi_contraction_convention():
    # pi = d/dy ^ d/dx, so i_pi(omega) = -n
    assert contract_pi(omega_form(1)) == F.scalar(1, -1)
    assert contract_pi(omega_form(2)) == F.scalar(2, -2)
    assert lie_derivative_pi(form(1, (1, 0), (0, 1))) == form(1, (0, 0), (0,), -1)
    assert lie_derivative_pi(ONE).is_zero()


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_lie_pi_squares_to_zero(seed):
    a = random_form(random.Random(seed), 2, 4, 6)
    assert lie_derivative_pi(lie_derivative_pi(a)).is_zero()


def test_euler_primitive_examples():
    assert euler_primitive(omega_form(1)) == (form(1, (1, 0), (1,)) - form(1, (0, 1), (0,))).scale(Fraction(1, 2))
    b = form(1, (1, 0), (0, 1))
    assert euler_primitive(b) == (form(1, (2, 0), (1,)) - form(1, (1, 1), (0,))).scale(Fraction(1, 3))
    with pytest.raises(NotClosed):
        euler_primitive(form(1, (0, 1), (0,)))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_euler_primitive_inverts_d(seed):
    b = d_de_rham(random_form(random.Random(seed), 2, 4, 5, form_degrees=[1, 2]))
    assert d_de_rham(euler_primitive(b)) == b


def test_star_examples():
    assert sympl_star(ONE) == omega_form(1)
    assert sympl_star(omega_form(1)) == F.scalar(1, -1)


def test_star_involutive_up_to_sign():
    for n in (1, 2):
        for k in range(2 * n + 1):
            for idx in _subsets(2 * n, k):
                a = form(n, (0,) * (2 * n), idx)
                twice = sympl_star(sympl_star(a))
                assert twice == a or twice == a.scale(-1)


def _subsets(m, k):
    from itertools import combinations

    return list(combinations(range(m), k))


def test_exp_wedge_examples():
    inv_uh = HUSeries.monomial(-1, -1)
    assert op_exp_wedge(inv_uh, ONE) == ONE + omega_form(1).scale(1, -1, -1)
    a = form(1, (1, 2), (0,))
    assert op_exp_wedge(HUSeries(), a) == a


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_exp_wedge_inverse(seed):
    a = random_form(random.Random(seed), 2, 3, 5)
    c = HUSeries.monomial(-1, 1)
    assert op_exp_wedge(-c, op_exp_wedge(c, a)) == a


def test_exp_contract_examples():
    c = HUSeries.monomial(1, -1)
    f = form(1, (2, 1), ())
    assert op_exp_contract_pi(c, f) == f
    assert op_exp_contract_pi(c, omega_form(1)) == omega_form(1) - F.scalar(1, 1, 1, -1)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_exp_contract_inverse(seed):
    a = random_form(random.Random(seed), 2, 3, 5)
    c = HUSeries.monomial(1, -1)
    assert op_exp_contract_pi(-c, op_exp_contract_pi(c, a)) == a


def test_regrading_examples():
    assert regrade_u(form(1, (0, 0), (0,))) == form(1, (0, 0), (0,), 1, 0, -1)
    assert regrade_u(ONE) == ONE
    assert regrade_h(ONE) == omega_form(1).scale(1, -1, -1)
    top = omega_form(2)
    top = wedge(top, top)
    shifted = regrade_h(top)
    # a 2n-form goes to a function with its h-exponent shifted by n
    assert {(k[1], k[2]) for k in shifted.terms} == {((), 2)}


@given(seeds, st.integers(1, 2))
@settings(max_examples=30, deadline=None)
def test_regrading_intertwines(seed, n):
    a = random_form(random.Random(seed), n, 3, 5)
    l, r = regrade_u_sides(a)
    assert l == r
    l, r = regrade_h_sides(a, n)
    assert l == r


def test_phi_on_one():
    assert hodge_homotopy_phi(ONE) == alpha_form(1).scale(1, -1, -1)


def test_pullback_examples():
    x = form(1, (1, 0), ())
    mu = PolyVec(1, {((2, 0), (0,), 0, 0): 1})
    got = pullback_exp(mu, x, 6)
    assert got == sum((form(1, (k, 0), ()) for k in range(2, 6)), x)
    assert pullback_exp(PolyVec.zero(1), x, 6) == x
    with pytest.raises(NonNilpotentField):
        pullback_exp(PolyVec(1, {((1, 0), (0,), 0, 0): 1}), x, 4)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_pullback_respects_wedge(seed):
    rng = random.Random(seed)
    a, b = random_form(rng, 2, 3, 3), random_form(rng, 2, 3, 3)
    mu = PolyVec(2, {((1, 1, 0, 0), (2,), 0, 0): 1, ((0, 2, 0, 0), (0,), 0, 0): -1})
    T = 6
    lhs = pullback_exp(mu, wedge(a, b), T)
    rhs = wedge(pullback_exp(mu, a, T), pullback_exp(mu, b, T)).with_trunc(T)
    assert lhs == rhs


def test_hamiltonian_field():
    pi = pi_bivector(1)
    assert ham_field(Poly(2, {(0, 1): 1}), pi) == PolyVec(1, {((0, 0), (0,), 0, 0): 1})
    assert ham_field(Poly(2, {(0, 0): 5}), pi).is_zero()
    f, g = Poly(2, {(1, 1): 1, (0, 2): 2}), Poly(2, {(2, 0): 1, (0, 1): -1})
    lhs = ham_field(f * g, pi)
    rhs = _poly_times(f, ham_field(g, pi)) + _poly_times(g, ham_field(f, pi))
    assert lhs == rhs


def _poly_times(p, v):
    out = PolyVec.zero(v.n)
    for (m, idx, he, ue), c in v.terms.items():
        for pm, pc in p.terms.items():
            out = out + PolyVec(v.n, {(tuple(a + b for a, b in zip(m, pm)), idx, he, ue): c * pc})
    return out


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_json_roundtrip(seed):
    a = random_form(random.Random(seed), 2, 3, 5)
    assert F.from_json(a.to_json()) == a
