"""Normalized Hochschild chains of a finite-dimensional unital algebra, with b and B.

Conventions (normalized Loday complex, ``C_l = A (x) Abar^l``):

    b(a0,..,al) = sum_{i<l} (-1)^i (a0,..,a_i a_{i+1},..,al) + (-1)^l (al a0, a1,..,a_{l-1})
    B(a0,..,al) = sum_{i=0}^{l} (-1)^(l i) (1, a_i,..,al, a0,..,a_{i-1})

A chain is a sparse map from index words ``(i0, i1, .., il)`` to HUSeries
coefficients; the ``u`` exponent of a coefficient is the second slot of its
keys.  The quotient ``Abar = A / Q 1`` is represented by the basis vectors
other than a fixed pivot index of the unit.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .scalars import HUSeries, as_fraction, parse_fraction

__all__ = [
    "ChainTensor",
    "FinAlgebra",
    "InvalidAlgebra",
    "NegativeUPowerInNegativeComplex",
    "connes_B",
    "cyclic_differential",
    "hochschild_b",
]


class InvalidAlgebra(ValueError):
    pass


class NegativeUPowerInNegativeComplex(ValueError):
    pass


Vector = dict  # basis index -> Fraction


class FinAlgebra:
    """Associative unital algebra on ``Q^dim`` given by ``e_i e_j = sum_k c e_k``."""

    def __init__(self, dim: int, unit: Sequence, mult, labels: Sequence[str] | None = None, check: bool = True):
        self.dim = dim
        self.unit = tuple(as_fraction(v) for v in unit)
        if len(self.unit) != dim:
            raise InvalidAlgebra("unit vector has the wrong length")
        if isinstance(mult, Mapping):
            table = {tuple(k): {kk: as_fraction(c) for kk, c in v.items()} for k, v in mult.items()}
        else:
            table = {}
            for i, j, k, c in mult:
                table.setdefault((i, j), {})[k] = table.get((i, j), {}).get(k, 0) + as_fraction(c)
        self._mult = {k: {kk: c for kk, c in v.items() if c} for k, v in table.items()}
        nz = [i for i, v in enumerate(self.unit) if v]
        if not nz:
            raise InvalidAlgebra("unit must be nonzero")
        self.pivot = nz[0]
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        if check:
            self.validate()

    def mul_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self._mult.get((i, j), {})

    def mul(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Vector:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.mul_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def unit_vec(self) -> Vector:
        return {i: c for i, c in enumerate(self.unit) if c}

    def reduce_bar(self, v: Mapping[int, Fraction]) -> Vector:
        """Representative of ``v`` in ``Abar``: eliminate the pivot coordinate using the unit."""
        v = dict(v)
        a = v.pop(self.pivot, Fraction(0))
        if a:
            r = a / self.unit[self.pivot]
            for j, u in enumerate(self.unit):
                if j != self.pivot and u:
                    v[j] = v.get(j, 0) - r * u
        return {k: c for k, c in v.items() if c}

    def validate(self):
        d = self.dim
        one = self.unit_vec()
        for i in range(d):
            e = {i: Fraction(1)}
            if self.mul(one, e) != e or self.mul(e, one) != e:
                raise InvalidAlgebra(f"unit fails on e{i}")
        for i, j, k in product(range(d), repeat=3):
            lhs = self.mul(self.mul({i: 1}, {j: 1}), {k: 1})
            rhs = self.mul({i: 1}, self.mul({j: 1}, {k: 1}))
            if lhs != rhs:
                raise InvalidAlgebra(f"associativity fails on ({i},{j},{k})")

    # -- examples -----------------------------------------------------------
    @classmethod
    def matrix(cls, m: int = 2) -> "FinAlgebra":
        """``M_m(Q)`` on the matrix units ``E_ij`` (row-major)."""
        idx = lambda i, j: i * m + j
        mult = []
        for i, j, k in product(range(m), repeat=3):
            for l in range(m):
                mult.append((idx(i, j), idx(k, l), idx(i, l), 1 if j == k else 0))
        unit = [1 if i == j else 0 for i in range(m) for j in range(m)]
        labels = [f"E{i + 1}{j + 1}" for i in range(m) for j in range(m)]
        return cls(m * m, unit, [t for t in mult if t[3]], labels)

    @classmethod
    def truncated_poly(cls, n: int = 3) -> "FinAlgebra":
        """``Q[x]/(x^n)`` on ``1, x, .., x^(n-1)``."""
        mult = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
        unit = [1] + [0] * (n - 1)
        return cls(n, unit, mult, ["1"] + [f"x^{i}" for i in range(1, n)])

    def to_json(self) -> dict:
        mult = []
        for (i, j), row in sorted(self._mult.items()):
            mult.extend([i, j, k, str(c)] for k, c in sorted(row.items()))
        return {"dim": self.dim, "unit": [str(v) for v in self.unit], "mult": mult}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FinAlgebra":
        mult = [(int(i), int(j), int(k), parse_fraction(str(c))) for i, j, k, c in obj["mult"]]
        return cls(obj["dim"], [parse_fraction(str(v)) for v in obj["unit"]], mult, obj.get("labels"))


class ChainTensor:
    """Sparse element of ``C(A)[[u]]`` (or ``((u))``) in the normalized complex."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], HUSeries] = {}
        for w, c in (terms or {}).items():
            if not isinstance(c, HUSeries):
                c = HUSeries.const(as_fraction(c))
            if c.is_zero():
                continue
            w = tuple(w)
            if not w:
                raise ValueError("a chain word needs the a0 slot")
            clean[w] = clean[w] + c if w in clean else c
        self.terms = {w: c for w, c in clean.items() if not c.is_zero()}

    @classmethod
    def word(cls, *idx: int, coef=1) -> "ChainTensor":
        return cls({tuple(idx): coef})

    @classmethod
    def unit(cls, A: FinAlgebra) -> "ChainTensor":
        return cls({(i,): c for i, c in A.unit_vec().items()})

    def lengths(self) -> set[int]:
        return {len(w) - 1 for w in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t[w] + c if w in t else c
        return ChainTensor(t)

    def __neg__(self):
        return ChainTensor({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ChainTensor":
        if isinstance(c, HUSeries):
            return ChainTensor({w: v * c for w, v in self.terms.items()})
        c = as_fraction(c)
        return ChainTensor({w: v * c for w, v in self.terms.items()})

    def shift_u(self, k: int = 1) -> "ChainTensor":
        return ChainTensor({w: v.shift(0, k) for w, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ChainTensor):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self):
        return f"ChainTensor({self.terms})"

    def min_u(self) -> int | None:
        return min((j for c in self.terms.values() for (_, j) in c.terms), default=None)

    def to_json(self) -> dict:
        return {"terms": [{"word": list(w), "coef": c.to_json()} for w, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ChainTensor":
        out = {}
        for t in obj["terms"]:
            c = t["coef"]
            c = HUSeries.from_json(c) if isinstance(c, Mapping) else HUSeries.const(parse_fraction(str(c)))
            w = tuple(int(i) for i in t["word"])
            out[w] = out[w] + c if w in out else c
        return cls(out)

    @classmethod
    def random(cls, A: FinAlgebra, rng: random.Random, max_len: int = 4, nterms: int = 3, bound: int = 3):
        bar = [i for i in range(A.dim) if i != A.pivot]
        t = {}
        for _ in range(nterms):
            l = rng.randint(0, max_len)
            w = (rng.randrange(A.dim),) + tuple(rng.choice(bar) for _ in range(l))
            t[w] = rng.randint(-bound, bound)
        return cls(t)


def _expand(A: FinAlgebra, slots: Sequence[Mapping[int, Fraction]], coef: HUSeries, out: dict):
    """Add ``coef * slots[0] (x) .. (x) slots[-1]`` to ``out`` (slots 1.. already reduced)."""
    for combo in product(*[list(s.items()) for s in slots]):
        c = Fraction(1)
        for _, v in combo:
            c *= v
        w = tuple(i for i, _ in combo)
        term = coef * c
        out[w] = out[w] + term if w in out else term


def normalize(c: ChainTensor, A: FinAlgebra) -> ChainTensor:
    """Reduce every ``Abar`` slot modulo the unit."""
    out: dict = {}
    for w, coef in c.terms.items():
        slots = [{w[0]: Fraction(1)}] + [A.reduce_bar({i: Fraction(1)}) for i in w[1:]]
        _expand(A, slots, coef, out)
    return ChainTensor(out)


def _is_normalized(c: ChainTensor, A: FinAlgebra) -> bool:
    return all(A.pivot not in w[1:] for w in c.terms)


def hochschild_b(c: ChainTensor, A: FinAlgebra, raw: bool = False) -> ChainTensor:
    """Hochschild boundary; with ``raw`` the words are used as given and the result is not reduced."""
    if not raw and not _is_normalized(c, A):
        c = normalize(c, A)
    out: dict = {}
    for w, coef in c.terms.items():
        l = len(w) - 1
        if l == 0:
            continue
        vecs = [{i: Fraction(1)} for i in w]
        for i in range(l):
            prod_ = A.mul(vecs[i], vecs[i + 1])
            slots = vecs[:i] + [prod_] + vecs[i + 2 :]
            _expand(A, slots, coef * (-1 if i % 2 else 1), out)
        slots = [A.mul(vecs[l], vecs[0])] + vecs[1:l]
        _expand(A, slots, coef * (-1 if l % 2 else 1), out)
    res = ChainTensor(out)
    return res if raw else normalize(res, A)


def connes_B(c: ChainTensor, A: FinAlgebra, raw: bool = False) -> ChainTensor:
    """Normalized Connes operator ``B``."""
    if not raw and not _is_normalized(c, A):
        c = normalize(c, A)
    one = A.unit_vec()
    out: dict = {}
    for w, coef in c.terms.items():
        l = len(w) - 1
        for i in range(l + 1):
            rot = w[i:] + w[:i]
            slots = [one] + [A.reduce_bar({j: Fraction(1)}) for j in rot]
            _expand(A, slots, coef * (-1 if (l * i) % 2 else 1), out)
    return normalize(ChainTensor(out), A)


def cyclic_differential(c: ChainTensor, A: FinAlgebra, variant: str = "negative") -> ChainTensor:
    """``(b + u B)(c)`` in the negative (``[[u]]``) or periodic (``((u))``) complex."""
    if variant not in ("negative", "periodic"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "negative":
        m = c.min_u()
        if m is not None and m < 0:
            raise NegativeUPowerInNegativeComplex(f"u^{m} in the negative cyclic complex")
    return hochschild_b(c, A) + connes_B(c, A).shift_u(1)
