import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylforge.cyclic import (
    ChainTensor,
    FinAlgebra,
    InvalidAlgebra,
    NegativeUPowerInNegativeComplex,
    connes_B,
    cyclic_differential,
    hochschild_b,
)
from weylforge.scalars import HUSeries

P3 = FinAlgebra.truncated_poly(3)
M2 = FinAlgebra.matrix(2)
ALGEBRAS = [P3, M2, FinAlgebra.truncated_poly(4)]


def test_b_on_length_one_is_commutator():
    # E12 (x) E21 -> E11 - E22, and E21 (x) E12 -> E22 - E11
    assert hochschild_b(ChainTensor.word(1, 2), M2) == ChainTensor({(0,): 1, (3,): -1})
    assert hochschild_b(ChainTensor.word(2, 1), M2) == ChainTensor({(3,): 1, (0,): -1})
    # commutative algebra: b vanishes on length one
    assert hochschild_b(ChainTensor.word(1, 2), P3).is_zero()


def test_b_on_length_zero_vanishes():
    assert hochschild_b(ChainTensor.word(2), P3).is_zero()


def test_b_length_two_hand_value():
    # x (x) x (x) x in Q[x]/x^3: x^2 (x) x - x (x) x^2 + x^2 (x) x = 2 x^2 (x) x - x (x) x^2
    got = hochschild_b(ChainTensor.word(1, 1, 1), P3)
    assert got == ChainTensor({(2, 1): 2, (1, 2): -1})


def test_B_examples():
    assert connes_B(ChainTensor.word(0), P3).is_zero()
    assert connes_B(ChainTensor.word(1), P3) == ChainTensor.word(0, 1)
    # B(a0 (x) a1) = 1 (x) a0 (x) a1 - 1 (x) a1 (x) a0
    assert connes_B(ChainTensor.word(1, 2), P3) == ChainTensor({(0, 1, 2): 1, (0, 2, 1): -1})


def test_normalized_complex_drops_units():
    assert ChainTensor.unit(P3) == ChainTensor.word(0)
    assert hochschild_b(ChainTensor.word(1, 0), P3).is_zero()


@pytest.mark.parametrize("A", ALGEBRAS, ids=["P3", "M2", "P4"])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_square_zero_and_anticommute(A, seed):
    c = ChainTensor.random(A, random.Random(seed))
    assert hochschild_b(hochschild_b(c, A), A).is_zero()
    assert connes_B(connes_B(c, A), A).is_zero()
    assert (hochschild_b(connes_B(c, A), A) + connes_B(hochschild_b(c, A), A)).is_zero()


@given(seed=st.integers(0, 10**6), k=st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_cyclic_differential(seed, k):
    c = ChainTensor.random(M2, random.Random(seed)).shift_u(k)
    dc = cyclic_differential(c, M2)
    assert cyclic_differential(dc, M2).is_zero()
    # u-linearity
    assert cyclic_differential(c.shift_u(1), M2) == dc.shift_u(1)


def test_cyclic_differential_of_unit():
    assert cyclic_differential(ChainTensor.unit(M2), M2).is_zero()


def test_negative_u_power():
    c = ChainTensor({(1,): HUSeries.monomial(0, -1)})
    with pytest.raises(NegativeUPowerInNegativeComplex):
        cyclic_differential(c, P3)
    assert cyclic_differential(c, P3, variant="periodic") == ChainTensor.word(0, 1)
    with pytest.raises(ValueError):
        cyclic_differential(c, P3, variant="bogus")


def test_invalid_algebra_rejected():
    with pytest.raises(InvalidAlgebra):
        # a a = b, a b = 0, b a = 1: (a a) a != a (a a)
        unit = [(0, i, i, 1) for i in range(3)] + [(i, 0, i, 1) for i in (1, 2)]
        FinAlgebra(3, [1, 0, 0], unit + [(1, 1, 2, 1), (2, 1, 0, 1)])


def test_json_roundtrip():
    c = ChainTensor({(1, 2): HUSeries({(0, 1): 3, (0, 0): "1/2"}), (0, 1): -2})
    assert ChainTensor.from_json(c.to_json()) == c
    assert FinAlgebra.from_json(M2.to_json()).to_json() == M2.to_json()
