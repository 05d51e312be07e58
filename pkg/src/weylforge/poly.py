"""Sparse commutative polynomials with exact coefficients.

Monomials are exponent tuples.  An optional ``trunc`` drops every monomial
whose weighted degree reaches the bound, which models ``k[[x]]`` modulo a
power of the maximal ideal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .scalars import as_fraction

__all__ = ["Poly"]


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Poly:
    __slots__ = ("nvars", "terms", "trunc", "weights")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[tuple[int, ...], object] | None = None,
        trunc: int | None = None,
        weights: Sequence[int] | None = None,
    ):
        self.nvars = nvars
        self.trunc = trunc
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong length for {nvars} variables")
            if not isinstance(c, Fraction) and isinstance(c, (int, str)):
                c = as_fraction(c)
            if not c:
                continue
            if trunc is not None and self._wdeg(m) >= trunc:
                continue
            clean[tuple(m)] = c
        self.terms = clean

    def _wdeg(self, m) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    @classmethod
    def var(cls, nvars: int, i: int, trunc=None, weights=None) -> "Poly":
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): 1}, trunc, weights)

    @classmethod
    def const(cls, nvars: int, c=1, trunc=None, weights=None) -> "Poly":
        return cls(nvars, {(0,) * nvars: c}, trunc, weights)

    def _new(self, terms, trunc="same") -> "Poly":
        return Poly(self.nvars, terms, self.trunc if trunc == "same" else trunc, self.weights)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, m) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        return max((self._wdeg(m) for m in self.terms), default=-1)

    def homogeneous(self, d: int) -> "Poly":
        return self._new({m: c for m, c in self.terms.items() if self._wdeg(m) == d})

    def with_trunc(self, trunc) -> "Poly":
        return self._new(self.terms, _min_trunc(self.trunc, trunc))

    def _check(self, other: "Poly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other, weights=self.weights)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return self._new(t, _min_trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, str)):
            other = as_fraction(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return self._new({})
            return self._new({m: c * other for m, c in self.terms.items()})
        self._check(other)
        tr = _min_trunc(self.trunc, other.trunc)
        out: dict = {}
        w = self.weights
        for m1, c1 in self.terms.items():
            d1 = self._wdeg(m1)
            for m2, c2 in other.terms.items():
                if tr is not None and d1 + self._wdeg(m2) >= tr:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return Poly(self.nvars, out, tr, w)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1, self.trunc, self.weights)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        # differentiation lowers the weighted degree, so the known range shrinks
        tr = None if self.trunc is None else self.trunc - self.weights[i]
        return self._new(out, tr)

    def mul_var(self, i: int, k: int = 1) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            mm = list(m)
            mm[i] += k
            out[tuple(mm)] = c
        tr = None if self.trunc is None else self.trunc + k * self.weights[i]
        return self._new(out, tr)

    def subs_zero(self, idx) -> "Poly":
        idx = set(idx)
        return self._new({m: c for m, c in self.terms.items() if not any(m[i] for i in idx)})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other, weights=self.weights)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.nvars != self.nvars:
            return False
        tr = _min_trunc(self.trunc, other.trunc)
        a = self.with_trunc(tr).terms
        b = other.with_trunc(tr).terms
        return a == b

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(
                f"z{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"
