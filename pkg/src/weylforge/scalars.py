"""Exact scalars: rationals and truncated Laurent series in ``h`` and ``u``.

An :class:`HUSeries` stores a sparse map ``(i, j) -> Fraction`` for the
monomial ``h**i * u**j``.  Terms with ``i >= h_trunc`` are not represented;
``h_trunc=None`` means the value is exact (a Laurent polynomial).  Binary
operations truncate at the smaller of the two bounds.

The same engine doubles as a univariate series ring by tagging the value
with ``var="z"``; the ``h`` slot then carries the ``z`` exponent.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping

__all__ = [
    "DivergentExp",
    "HUSeries",
    "NonInvertibleLeadingTerm",
    "NonSquareLeadingTerm",
    "as_fraction",
    "parse_fraction",
    "series_mul",
    "series_transcend",
]


class NonInvertibleLeadingTerm(ArithmeticError):
    pass


class NonSquareLeadingTerm(ArithmeticError):
    pass


class DivergentExp(ArithmeticError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


def parse_fraction(s: str) -> Fraction:
    s = s.strip()
    num, sep, den = s.partition("/")
    if not _is_int(num) or (sep and not _is_int(den)):
        raise ValueError(f"malformed fraction string {s!r}")
    return Fraction(int(num), int(den) if sep else 1)


def _is_int(s: str) -> bool:
    s = s.strip()
    if s[:1] in "+-":
        s = s[1:]
    return s.isdigit()


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class HUSeries:
    """Immutable truncated Laurent series in ``h`` and ``u``."""

    __slots__ = ("_terms", "h_trunc", "u_min", "u_max", "var")

    def __init__(
        self,
        terms: Mapping[tuple[int, int], object] | None = None,
        h_trunc: int | None = None,
        u_min: int | None = None,
        u_max: int | None = None,
        var: str = "h",
    ):
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (terms or {}).items():
            c = as_fraction(c)
            if not c:
                continue
            if h_trunc is not None and i >= h_trunc:
                continue
            if u_max is not None and j > u_max:
                continue
            if u_min is not None and j < u_min:
                raise ValueError(f"u-exponent {j} below u_min={u_min}")
            clean[(int(i), int(j))] = c
        self._terms = clean
        self.h_trunc = h_trunc
        self.u_min = u_min
        self.u_max = u_max
        self.var = var

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, h_trunc=None, var="h") -> "HUSeries":
        return cls({(0, 0): c}, h_trunc=h_trunc, var=var)

    @classmethod
    def monomial(cls, i: int, j: int = 0, c=1, h_trunc=None, var="h") -> "HUSeries":
        return cls({(i, j): c}, h_trunc=h_trunc, var=var)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, var="z", h_trunc=None) -> "HUSeries":
        """Univariate series ``sum c_k var**k``; truncation defaults to ``len(coeffs)``."""
        coeffs = list(coeffs)
        if h_trunc is None:
            h_trunc = len(coeffs)
        return cls({(k, 0): c for k, c in enumerate(coeffs)}, h_trunc=h_trunc, var=var)

    def _like(self, terms, h_trunc=None, keep=True) -> "HUSeries":
        return HUSeries(
            terms,
            h_trunc=self.h_trunc if keep else h_trunc,
            u_min=self.u_min,
            u_max=self.u_max,
            var=self.var,
        )

    # -- accessors --------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int = 0) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def coeffs(self, n: int | None = None) -> list[Fraction]:
        """Dense list of ``u**0`` coefficients ``[c_0, ..., c_{n-1}]``."""
        if n is None:
            if self.h_trunc is None:
                raise ValueError("exact series needs an explicit length")
            n = self.h_trunc
        return [self.coeff(k, 0) for k in range(n)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_h(self) -> int | None:
        return min((i for i, _ in self._terms), default=None)

    def is_scalar(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def scalar(self) -> Fraction:
        if not self.is_scalar():
            raise ValueError("series is not a scalar")
        return self.coeff(0, 0)

    def truncate(self, h_trunc: int | None) -> "HUSeries":
        return self._like(self._terms, h_trunc=_min_trunc(self.h_trunc, h_trunc), keep=False)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "HUSeries":
        if isinstance(other, HUSeries):
            if other.var != self.var:
                raise TypeError(f"mixing series in {self.var!r} and {other.var!r}")
            return other
        return HUSeries.const(as_fraction(other), var=self.var)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, 0) + c
        return self._like(t, _min_trunc(self.h_trunc, other.h_trunc), keep=False)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._like({})
            return self._like({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, HUSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        if isinstance(other, HUSeries):
            return self * series_transcend("inv", other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return series_transcend("inv", self) ** (-k)
        out = self._like({(0, 0): 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, di: int, dj: int = 0) -> "HUSeries":
        """Multiply by ``h**di u**dj``; the truncation bound moves with ``h``."""
        ht = None if self.h_trunc is None else self.h_trunc + di
        return HUSeries(
            {(i + di, j + dj): c for (i, j), c in self._terms.items()},
            h_trunc=ht,
            u_max=None if self.u_max is None else self.u_max + dj,
            var=self.var,
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HUSeries.const(other, var=self.var)
        if not isinstance(other, HUSeries):
            return NotImplemented
        t = _min_trunc(self.h_trunc, other.h_trunc)
        a = self.truncate(t)._terms
        b = other.truncate(t)._terms
        return a == b

    def __hash__(self):
        return hash((frozenset(self._terms.items()), self.h_trunc))

    def __repr__(self):
        if not self._terms:
            body = "0"
        else:
            parts = []
            for (i, j), c in sorted(self._terms.items()):
                mono = "".join(
                    s for s in (_pow(self.var, i), _pow("u", j)) if s
                )
                parts.append(f"{c}{'*' + mono if mono else ''}")
            body = " + ".join(parts)
        tail = "" if self.h_trunc is None else f" + O({self.var}^{self.h_trunc})"
        return f"HUSeries({body}{tail})"

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "h_trunc": self.h_trunc,
            "terms": [
                {"h": i, "u": j, "coef": _frac_str(c)}
                for (i, j), c in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping, var: str = "h") -> "HUSeries":
        if not isinstance(obj, Mapping) or "terms" not in obj:
            raise ValueError("series JSON needs a 'terms' list")
        unknown = set(obj) - {"h_trunc", "terms"}
        if unknown:
            raise ValueError(f"unknown series fields {sorted(unknown)}")
        terms: dict[tuple[int, int], Fraction] = {}
        for t in obj["terms"]:
            key = (int(t["h"]), int(t.get("u", 0)))
            terms[key] = terms.get(key, 0) + parse_fraction(str(t["coef"]))
        return cls(terms, h_trunc=obj.get("h_trunc"), var=var)


def _pow(v: str, k: int) -> str:
    if k == 0:
        return ""
    return v if k == 1 else f"{v}^{k}"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def series_mul(a: HUSeries, b: HUSeries) -> HUSeries:
    if a.var != b.var:
        raise TypeError("series in different variables")
    ht = _min_trunc(a.h_trunc, b.h_trunc)
    um = a.u_max if b.u_max is None else (b.u_max if a.u_max is None else min(a.u_max, b.u_max))
    out: dict[tuple[int, int], Fraction] = {}
    for (i1, j1), c1 in a._terms.items():
        for (i2, j2), c2 in b._terms.items():
            i = i1 + i2
            if ht is not None and i >= ht:
                continue
            key = (i, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return HUSeries(out, h_trunc=ht, u_max=um, var=a.var)


def _split_leading(s: HUSeries):
    """Write ``s = lead * (1 + rest)`` with ``lead`` a monomial of lowest ``h`` order."""
    if s.is_zero():
        raise NonInvertibleLeadingTerm("zero series has no leading term")
    a = s.min_h()
    low = [(k, c) for k, c in s.items() if k[0] == a]
    if len(low) != 1:
        raise NonInvertibleLeadingTerm(
            f"lowest {s.var}-order part has {len(low)} monomials; need a single one"
        )
    (ai, bj), c = low[0]
    inv_c = 1 / c
    rest = {(i - ai, j - bj): x * inv_c for (i, j), x in s.items() if (i, j) != (ai, bj)}
    return ai, bj, c, rest


def _compose(coefs_fn, rest: dict, trunc: int, var: str, u_max=None) -> HUSeries:
    """Evaluate ``sum_k coefs_fn(k) * rest**k`` where ``rest`` has positive order."""
    r = HUSeries(rest, h_trunc=trunc, u_max=u_max, var=var)
    out = HUSeries.const(coefs_fn(0), h_trunc=trunc, var=var)
    power = HUSeries.const(1, h_trunc=trunc, var=var)
    k = 0
    while True:
        k += 1
        power = power * r
        if power.is_zero():
            break
        ck = coefs_fn(k)
        if ck:
            out = out + power * ck
    return out


def _binom_half(k: int) -> Fraction:
    c = Fraction(1)
    for i in range(k):
        c *= (Fraction(1, 2) - i) / (i + 1)
    return c


def series_transcend(kind: str, s: HUSeries) -> HUSeries:
    """``inv``, ``sqrt``, ``exp`` or ``log`` of a series, modulo its truncation."""
    if kind == "inv":
        ai, bj, c, rest = _split_leading(s)
        if rest and s.h_trunc is None:
            raise NonInvertibleLeadingTerm("inverse of an exact non-monomial needs a truncation")
        trunc = None if s.h_trunc is None else s.h_trunc - 2 * ai
        if not rest:
            return HUSeries({(-ai, -bj): 1 / c}, h_trunc=trunc, var=s.var)
        body = _compose(lambda k: (-1) ** k, rest, trunc - (-ai), s.var)
        return body.shift(-ai, -bj) * (1 / c)
    if kind == "sqrt":
        ai, bj, c, rest = _split_leading(s)
        root = _rational_sqrt(c)
        if ai % 2 or bj % 2 or root is None:
            raise NonSquareLeadingTerm(f"leading term {c}*{s.var}^{ai}u^{bj} is not a square")
        if rest and s.h_trunc is None:
            raise NonSquareLeadingTerm("square root of an exact non-monomial needs a truncation")
        trunc = None if s.h_trunc is None else s.h_trunc - ai // 2
        if not rest:
            return HUSeries({(ai // 2, bj // 2): root}, h_trunc=trunc, var=s.var)
        body = _compose(_binom_half, rest, trunc - ai // 2, s.var)
        return body.shift(ai // 2, bj // 2) * root
    if kind == "exp":
        if any(i <= 0 for i, _ in s._terms):
            raise DivergentExp("exp needs every term of strictly positive order")
        if s.h_trunc is None and s._terms:
            raise DivergentExp("exp of an exact nonzero series needs a truncation")
        fact = [Fraction(1)]

        def c(k):
            while len(fact) <= k:
                fact.append(fact[-1] / len(fact))
            return fact[k]

        return _compose(c, s.terms, s.h_trunc, s.var, s.u_max)
    if kind == "log":
        if s.coeff(0, 0) != 1 or any(i <= 0 for i, j in s._terms if (i, j) != (0, 0)):
            raise NonInvertibleLeadingTerm("log needs the form 1 + (positive order)")
        rest = {k: c for k, c in s.items() if k != (0, 0)}
        if rest and s.h_trunc is None:
            raise NonInvertibleLeadingTerm("log of an exact non-unit needs a truncation")
        return _compose(
            lambda k: Fraction(0) if k == 0 else Fraction((-1) ** (k + 1), k),
            rest,
            s.h_trunc,
            s.var,
            s.u_max,
        )
    raise ValueError(f"unknown transcendental {kind!r}")
