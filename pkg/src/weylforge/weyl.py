"""Formal Weyl algebras, matrices over them, and the Lie algebra of (1/h)-scaled symbols.

Monomials are stored normal ordered as ``x^a y^b h^c``.  Truncation is by the
total weight ``|a| + |b| + 2c``, which every product and commutator preserves.

Variable indexing: an element over ``n`` variable pairs uses ``x_1..x_n`` and
``y_1..y_n`` (0-based in code).  When a codimension ``q`` is in play the first
``q`` pairs are the "normal" directions of the coisotropic ideal and the
remaining ``p = n - q`` pairs carry the symplectic factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .poly import Poly
from .scalars import HUSeries, as_fraction

__all__ = [
    "GElement",
    "HProjection",
    "MatWeyl",
    "ModuleElement",
    "NegativeHPower",
    "SizeMismatch",
    "VariableCountMismatch",
    "WeylElement",
    "g_bracket",
    "graded_component",
    "in_ideal_J",
    "module_act",
    "principal_symbol",
    "project_h",
    "right_act",
    "weyl_commutator",
    "weyl_mul",
]


class VariableCountMismatch(ValueError):
    pass


class NegativeHPower(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


Key = tuple[tuple[int, ...], tuple[int, ...], int]


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _weight(key: Key) -> int:
    a, b, c = key
    return sum(a) + sum(b) + 2 * c


@lru_cache(maxsize=None)
def _swap(m: int, k: int) -> tuple[tuple[int, int], ...]:
    """``y^m x^k = sum_r coef_r h^r x^(k-r) y^(m-r)``; returns ``((r, coef_r), ...)``."""
    return tuple((r, factorial(r) * comb(m, r) * comb(k, r)) for r in range(min(m, k) + 1))


class WeylElement:
    """Element of the formal Weyl algebra on ``n`` pairs, modulo total weight ``wtrunc``."""

    __slots__ = ("n", "terms", "wtrunc", "cmin")

    def __init__(
        self,
        n: int,
        terms: Mapping[Key, object] | None = None,
        wtrunc: int | None = None,
        cmin: int = 0,
    ):
        self.n = n
        self.wtrunc = wtrunc
        self.cmin = cmin
        clean: dict[Key, Fraction] = {}
        for (a, b, c), coef in (terms or {}).items():
            if not isinstance(coef, Fraction):
                coef = as_fraction(coef)
            if not coef:
                continue
            a, b = tuple(a), tuple(b)
            if len(a) != n or len(b) != n:
                raise VariableCountMismatch(f"exponent vectors must have length {n}")
            if c < cmin:
                raise NegativeHPower(f"h^{c} below the allowed minimum h^{cmin}")
            key = (a, b, c)
            if wtrunc is not None and _weight(key) >= wtrunc:
                continue
            clean[key] = clean.get(key, 0) + coef
        self.terms = {k: v for k, v in clean.items() if v}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n, wtrunc=None, cmin=0):
        return cls(n, {}, wtrunc, cmin)

    @classmethod
    def const(cls, n, c=1, wtrunc=None, cmin=0):
        return cls(n, {((0,) * n, (0,) * n, 0): c}, wtrunc, cmin)

    @classmethod
    def monomial(cls, n, a, b, c=0, coef=1, wtrunc=None, cmin=None):
        if cmin is None:
            cmin = min(0, c)
        return cls(n, {(tuple(a), tuple(b), c): coef}, wtrunc, cmin)

    @classmethod
    def x(cls, n, i, wtrunc=None, cmin=0):
        a = [0] * n
        a[i] = 1
        return cls(n, {(tuple(a), (0,) * n, 0): 1}, wtrunc, cmin)

    @classmethod
    def y(cls, n, i, wtrunc=None, cmin=0):
        b = [0] * n
        b[i] = 1
        return cls(n, {((0,) * n, tuple(b), 0): 1}, wtrunc, cmin)

    @classmethod
    def h(cls, n, power=1, wtrunc=None, cmin=None):
        if cmin is None:
            cmin = min(0, power)
        return cls(n, {((0,) * n, (0,) * n, power): 1}, wtrunc, cmin)

    def _new(self, terms, wtrunc="same", cmin=None) -> "WeylElement":
        return WeylElement(
            self.n,
            terms,
            self.wtrunc if wtrunc == "same" else wtrunc,
            self.cmin if cmin is None else cmin,
        )

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def weights(self) -> set[int]:
        return {_weight(k) for k in self.terms}

    def min_c(self) -> int | None:
        return min((k[2] for k in self.terms), default=None)

    def with_trunc(self, wtrunc) -> "WeylElement":
        return self._new(self.terms, _min_trunc(self.wtrunc, wtrunc))

    def with_cmin(self, cmin: int) -> "WeylElement":
        return self._new(self.terms, cmin=cmin)

    def _lowest_weight(self) -> int:
        return 2 * self.cmin

    def _check(self, other: "WeylElement"):
        if not isinstance(other, WeylElement):
            raise TypeError(f"expected WeylElement, got {type(other).__name__}")
        if other.n != self.n:
            raise VariableCountMismatch(f"{self.n} vs {other.n} variable pairs")

    # -- linear structure -------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylElement.const(self.n, other)
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return self._new(t, _min_trunc(self.wtrunc, other.wtrunc), min(self.cmin, other.cmin))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = as_fraction(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def shift_h(self, k: int) -> "WeylElement":
        """Multiply by ``h**k`` (``k`` may be negative when the result stays above ``cmin``)."""
        out = {}
        for (a, b, c), v in self.terms.items():
            out[(a, b, c + k)] = v
        wt = None if self.wtrunc is None else self.wtrunc + 2 * k
        return WeylElement(self.n, out, wt, min(self.cmin, self.cmin + k))

    def div_h(self) -> "WeylElement":
        if any(c < self.cmin + 1 for _, _, c in self.terms):
            raise NegativeHPower("element is not divisible by h inside its ring")
        return self.shift_h(-1).with_cmin(self.cmin)

    def graded(self, w: int) -> "WeylElement":
        return self._new({k: v for k, v in self.terms.items() if _weight(k) == w})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylElement.const(self.n, other)
        if not isinstance(other, WeylElement) or other.n != self.n:
            return NotImplemented
        t = _min_trunc(self.wtrunc, other.wtrunc)
        return self.with_trunc(t).terms == other.with_trunc(t).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), v in sorted(self.terms.items(), key=lambda kv: (_weight(kv[0]), kv[0])):
            mono = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
            mono += [f"y{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(b) if e]
            if c:
                mono.append("h" if c == 1 else f"h^{c}")
            parts.append(f"{v}" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    # -- serialization ----------------------------------------------------
    def term_list(self, row=None, col=None) -> list[dict]:
        out = []
        for (a, b, c), v in sorted(self.terms.items()):
            t = {"x": list(a), "y": list(b), "h": c, "coef": _frac_str(v)}
            if row is not None:
                t["row"], t["col"] = row, col
            out.append(t)
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "e": 1,
            "cmin": self.cmin,
            "wtrunc": self.wtrunc,
            "terms": self.term_list(0, 0),
        }


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _product_trunc(a: WeylElement, b: WeylElement):
    # unknown terms of ``a`` have weight >= a.wtrunc; multiplied by terms of ``b``
    # (weight >= 2*b.cmin) they only reach weight a.wtrunc + 2*b.cmin
    ta = None if a.wtrunc is None else a.wtrunc + 2 * b.cmin
    tb = None if b.wtrunc is None else b.wtrunc + 2 * a.cmin
    return _min_trunc(ta, tb)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    """Normal-ordered product using ``y^m x^k = sum_r r! C(m,r) C(k,r) h^r x^(k-r) y^(m-r)``."""
    a._check(b)
    n = a.n
    wt = _product_trunc(a, b)
    out: dict[Key, Fraction] = {}
    for (a1, b1, c1), v1 in a.terms.items():
        w1 = sum(a1) + sum(b1) + 2 * c1
        for (a2, b2, c2), v2 in b.terms.items():
            if wt is not None and w1 + sum(a2) + sum(b2) + 2 * c2 >= wt:
                continue
            base = v1 * v2
            choices = [_swap(b1[i], a2[i]) for i in range(n)]
            for combo in product(*choices):
                coef = base
                r_tot = 0
                for r, k in combo:
                    coef *= k
                    r_tot += r
                aa = tuple(a1[i] + a2[i] - combo[i][0] for i in range(n))
                bb = tuple(b1[i] - combo[i][0] + b2[i] for i in range(n))
                key = (aa, bb, c1 + c2 + r_tot)
                out[key] = out.get(key, 0) + coef
    return WeylElement(n, out, wt, a.cmin + b.cmin if a.cmin + b.cmin >= -1 else a.cmin + b.cmin)


def weyl_commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return weyl_mul(a, b) - weyl_mul(b, a)


def principal_symbol(a: WeylElement) -> Poly:
    """Reduction modulo ``h``: a commutative polynomial in ``x_1..x_n, y_1..y_n``."""
    if any(c < 0 for _, _, c in a.terms):
        raise NegativeHPower("principal symbol needs an element of the integral Weyl algebra")
    terms = {tuple(x) + tuple(y): v for (x, y, c), v in a.terms.items() if c == 0}
    return Poly(2 * a.n, terms, a.wtrunc)


def poisson_bracket(f: Poly, g: Poly, n: int) -> Poly:
    """``{f, g} = sum_i (df/dy_i dg/dx_i - df/dx_i dg/dy_i)``, so that ``{y_i, x_j} = delta_ij``."""
    out = Poly(2 * n, {}, None)
    for i in range(n):
        out = out + f.diff(n + i) * g.diff(i) - f.diff(i) * g.diff(n + i)
    return out


def from_symbol(p: Poly, n: int, wtrunc=None) -> WeylElement:
    """Normal-ordered quantization of a commutative polynomial in ``x, y``."""
    return WeylElement(n, {(m[:n], m[n:], 0): c for m, c in p.terms.items()}, wtrunc)


def in_ideal_J(a: WeylElement, q: int) -> bool:
    """Membership in the two-sided ideal generated by ``y_1..y_q`` and ``h``."""
    return all(c >= 1 or any(b[r] >= 1 for r in range(q)) for (_, b, c) in a.terms)


# ---------------------------------------------------------------------------
# matrices over the Weyl algebra and the Lie algebra g


class MatWeyl:
    """Square matrix with :class:`WeylElement` entries sharing ``n`` and truncation."""

    __slots__ = ("e", "n", "rows")

    def __init__(self, rows: Sequence[Sequence[WeylElement]]):
        rows = tuple(tuple(r) for r in rows)
        e = len(rows)
        if any(len(r) != e for r in rows):
            raise SizeMismatch("matrix must be square")
        ns = {x.n for r in rows for x in r}
        if len(ns) > 1:
            raise VariableCountMismatch("entries over different Weyl algebras")
        self.e = e
        self.n = ns.pop() if ns else 0
        self.rows = rows

    @classmethod
    def scalar(cls, w: WeylElement, e: int) -> "MatWeyl":
        z = WeylElement.zero(w.n, w.wtrunc, w.cmin)
        return cls([[w if i == j else z for j in range(e)] for i in range(e)])

    @classmethod
    def unit(cls, n, e, i, j, coef=1, wtrunc=None, cmin=0) -> "MatWeyl":
        z = WeylElement.zero(n, wtrunc, cmin)
        c = WeylElement.const(n, coef, wtrunc, cmin)
        return cls([[c if (r, s) == (i, j) else z for s in range(e)] for r in range(e)])

    @classmethod
    def from_constant(cls, m: Sequence[Sequence], n, wtrunc=None, cmin=0) -> "MatWeyl":
        return cls([[WeylElement.const(n, v, wtrunc, cmin) for v in row] for row in m])

    @property
    def wtrunc(self):
        out = None
        for r in self.rows:
            for x in r:
                out = _min_trunc(out, x.wtrunc)
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, f) -> "MatWeyl":
        return type(self)([[f(x) for x in r] for r in self.rows])

    def _check(self, other):
        if other.e != self.e:
            raise SizeMismatch(f"{self.e}x{self.e} vs {other.e}x{other.e}")
        if other.n != self.n:
            raise VariableCountMismatch(f"{self.n} vs {other.n} variable pairs")

    def __add__(self, other):
        self._check(other)
        return type(self)([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return type(self)([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c):
        return self.map(lambda x: x.scale(c))

    def __matmul__(self, other):
        self._check(other)
        e = self.e
        rows = []
        for i in range(e):
            row = []
            for j in range(e):
                acc = weyl_mul(self.rows[i][0], other.rows[0][j])
                for k in range(1, e):
                    acc = acc + weyl_mul(self.rows[i][k], other.rows[k][j])
                row.append(acc)
            rows.append(row)
        return type(self)(rows)

    def with_trunc(self, wtrunc):
        return self.map(lambda x: x.with_trunc(wtrunc))

    def graded(self, w: int):
        return self.map(lambda x: x.graded(w))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, MatWeyl) or other.e != self.e:
            return NotImplemented
        return all(a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash(tuple(hash(x) for r in self.rows for x in r))

    def __repr__(self):
        return f"{type(self).__name__}({[[repr(x) for x in r] for r in self.rows]})"

    def to_json(self) -> dict:
        terms = []
        cmin = 0
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                terms.extend(x.term_list(i, j))
                cmin = min(cmin, x.cmin)
        return {"n": self.n, "e": self.e, "cmin": cmin, "wtrunc": self.wtrunc, "terms": terms}


class GElement(MatWeyl):
    """Element of ``g = (1/h) D + gl_e(D)``: the ``h^-1`` part is a scalar matrix."""

    def __init__(self, rows):
        rows = [[x if x.cmin <= -1 else x.with_cmin(-1) for x in r] for r in rows]
        super().__init__(rows)

    def check_invariant(self) -> bool:
        e = self.e
        for i in range(e):
            for j in range(e):
                neg = {k: v for k, v in self.rows[i][j].terms.items() if k[2] < 0}
                if i != j and neg:
                    return False
                if i == j:
                    ref = {k: v for k, v in self.rows[0][0].terms.items() if k[2] < 0}
                    if neg != ref:
                        return False
        return True

    @classmethod
    def scalar(cls, w: WeylElement, e: int) -> "GElement":
        return cls(MatWeyl.scalar(w.with_cmin(-1), e).rows)

    @classmethod
    def from_mat(cls, m: MatWeyl) -> "GElement":
        return cls(m.rows)


def g_bracket(a: MatWeyl, b: MatWeyl) -> GElement:
    """Matrix commutator over ``(1/h) D``; stays inside ``g`` since Weyl commutators are h-divisible."""
    a._check(b)
    e = a.e
    rows = []
    for i in range(e):
        row = []
        for j in range(e):
            acc = WeylElement.zero(a.n, None, -2)
            for k in range(e):
                acc = acc + weyl_mul(a.rows[i][k], b.rows[k][j]) - weyl_mul(b.rows[i][k], a.rows[k][j])
            if acc.min_c() is not None and acc.min_c() < -1:
                raise NegativeHPower("bracket left the Lie algebra g")
            row.append(acc.with_cmin(-1))
        rows.append(row)
    return GElement(rows)


def graded_component(g: MatWeyl, w: int):
    return g.graded(w)


# ---------------------------------------------------------------------------
# projection onto h = gl_e + gl_q + sp_2p + a'


@dataclass(frozen=True)
class HProjection:
    """Components of the projection of an element of ``g`` onto the reductive part.

    ``gl`` is an ``e x e`` rational matrix, ``glq`` the ``q x q`` matrix of
    coefficients of ``(1/h) x_i y_j``, ``sp`` maps normal-ordered quadratic
    monomials in the symplectic variables to the coefficient of the
    symmetrized ``(1/h)``-scaled monomial, and ``aprime`` is the series part.
    """

    gl: tuple[tuple[Fraction, ...], ...]
    glq: tuple[tuple[Fraction, ...], ...]
    sp: tuple[tuple[Key, Fraction], ...]
    aprime: HUSeries
    n: int
    q: int

    @property
    def sp_dict(self) -> dict[Key, Fraction]:
        return dict(self.sp)

    @property
    def e(self) -> int:
        return len(self.gl)

    def _combine(self, other: "HProjection", c) -> "HProjection":
        if (self.n, self.q, self.e) != (other.n, other.q, other.e):
            raise SizeMismatch("projections of different shapes")
        gl = tuple(tuple(a + c * b for a, b in zip(r1, r2)) for r1, r2 in zip(self.gl, other.gl))
        glq = tuple(tuple(a + c * b for a, b in zip(r1, r2)) for r1, r2 in zip(self.glq, other.glq))
        sp = dict(self.sp)
        for k, v in other.sp:
            sp[k] = sp.get(k, 0) + c * v
        return HProjection(
            gl, glq, tuple(sorted((k, v) for k, v in sp.items() if v)),
            self.aprime + other.aprime * c, self.n, self.q,
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "HProjection":
        c = as_fraction(c)
        return HProjection(
            tuple(tuple(c * v for v in r) for r in self.gl),
            tuple(tuple(c * v for v in r) for r in self.glq),
            tuple((k, c * v) for k, v in self.sp if c * v),
            self.aprime * c,
            self.n,
            self.q,
        )

    @classmethod
    def zero(cls, n, q, e, h_trunc=None) -> "HProjection":
        return cls(
            tuple(tuple(Fraction(0) for _ in range(e)) for _ in range(e)),
            tuple(tuple(Fraction(0) for _ in range(q)) for _ in range(q)),
            (),
            HUSeries({}, h_trunc),
            n,
            q,
        )

    def __eq__(self, other):
        if not isinstance(other, HProjection):
            return NotImplemented
        return (
            self.gl == other.gl
            and self.glq == other.glq
            and self.sp == other.sp
            and self.aprime == other.aprime
            and (self.n, self.q) == (other.n, other.q)
        )

    def __hash__(self):
        return hash((self.gl, self.glq, self.sp))

    def to_json(self) -> dict:
        fs = lambda v: _frac_str(v)
        return {
            "gl": [[fs(v) for v in r] for r in self.gl],
            "glq": [[fs(v) for v in r] for r in self.glq],
            "sp": [{"x": list(a), "y": list(b), "coef": fs(v)} for (a, b, _), v in self.sp],
            "aprime": self.aprime.to_json(),
        }

    def is_zero(self) -> bool:
        return (
            all(not v for r in self.gl for v in r)
            and all(not v for r in self.glq for v in r)
            and not self.sp
            and self.aprime.is_zero()
        )

    def sp_element(self, wtrunc=None) -> WeylElement:
        """The ``sp`` component as a ``(1/h)``-scaled symmetrized quadratic Weyl element."""
        out = WeylElement.zero(self.n, wtrunc, -1)
        for (a, b, c), v in self.sp:
            out = out + _sym_quadratic(self.n, a, b).scale(v)
        return out

    def sp_matrix(self) -> list[list[Fraction]]:
        """Matrix of ``ad`` of the ``sp`` component on the span of ``x_s, y_s`` (``s > q``)."""
        return ad_matrix(self.sp_element(), self.n, self.q)


def _sym_quadratic(n, a, b) -> WeylElement:
    """``(1/h) * sym(x^a y^b)`` for a quadratic monomial."""
    base = WeylElement(n, {(tuple(a), tuple(b), -1): 1}, None, -1)
    corr = Fraction(0)
    for s in range(n):
        if a[s] == 1 and b[s] == 1:
            corr = Fraction(1, 2)
    return base + WeylElement.const(n, corr, None, -1) if corr else base


def linear_basis(n: int, q: int = 0) -> list[WeylElement]:
    """``x_{q+1}..x_n, y_{q+1}..y_n``."""
    return [WeylElement.x(n, s) for s in range(q, n)] + [WeylElement.y(n, s) for s in range(q, n)]


def ad_matrix(w: WeylElement, n: int, q: int = 0) -> list[list[Fraction]]:
    """Matrix of ``v -> [w, v]`` on the linear span of the symplectic variables."""
    basis = linear_basis(n, q)
    p = n - q
    dim = 2 * p
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    for col, v in enumerate(basis):
        img = weyl_commutator(w, v.with_cmin(-1))
        for (a, b, c), coef in img.terms.items():
            if c != 0 or sum(a) + sum(b) != 1:
                continue
            idx = a.index(1) - q if sum(a) else p + b.index(1) - q
            if 0 <= idx < dim:
                mat[idx][col] += coef
    return mat


def _trace_part(g: MatWeyl) -> WeylElement:
    acc = WeylElement.zero(g.n, None, -1)
    for i in range(g.e):
        acc = acc + g.rows[i][i].with_cmin(-1)
    return acc.scale(Fraction(1, g.e))


def project_h(g: MatWeyl, q: int = 0) -> HProjection:
    """Projection of ``g`` onto ``gl_e + gl_q + sp_2p + a'``.

    Scalars are read in the symmetric (Weyl) ordering of the symplectic
    variables: normal-ordered ``x^a y^a h^c`` has constant term
    ``prod_i (-1/2)^(a_i) a_i! h^(c+|a|)``.  That constant goes to the
    ``gl_e`` trace when ``c + |a| = 0`` (the ``-1/2`` from ``(1/h) x_s y_s``)
    and to ``a'`` otherwise; the ``q`` block stays normal ordered.
    Everything in nonzero weight or in ``W`` maps to zero.
    """
    n, e = g.n, g.e
    scal = _trace_part(g)
    sp: dict[Key, Fraction] = {}
    glq = [[Fraction(0)] * q for _ in range(q)]
    shift = Fraction(0)
    aprime: dict[tuple[int, int], Fraction] = {}
    for (a, b, c), v in scal.terms.items():
        deg = sum(a) + sum(b)
        if a == b and not any(a[:q]) and (deg or c):
            k = c + sum(a)
            w = v
            for ai in a:
                w *= Fraction(-1, 2) ** ai * factorial(ai)
            if k == 0:
                shift += w
            else:
                aprime[(k, 0)] = aprime.get((k, 0), 0) + w
        if c != -1 or deg != 2:
            continue
        qa = [i for i in range(n) for _ in range(a[i])]
        qb = [i for i in range(n) for _ in range(b[i])]
        if all(i >= q for i in qa + qb):
            sp[(a, b, c)] = sp.get((a, b, c), 0) + v
        elif len(qa) == 1 and len(qb) == 1 and qa[0] < q and qb[0] < q:
            glq[qa[0]][qb[0]] += v
    gl = []
    for i in range(e):
        row = []
        for j in range(e):
            const = g.rows[i][j].terms.get(((0,) * n, (0,) * n, 0), Fraction(0))
            row.append(const + (shift if i == j else 0))
        gl.append(tuple(row))
    return HProjection(
        gl=tuple(gl),
        glq=tuple(tuple(r) for r in glq),
        sp=tuple(sorted((k, v) for k, v in sp.items() if v)),
        aprime=HUSeries(aprime, None if g.wtrunc is None else -(-g.wtrunc // 2)),
        n=n,
        q=q,
    )


def embed_h(proj: HProjection, e: int, wtrunc=None) -> GElement:
    """Inverse of :func:`project_h` on ``h``: build the element of ``g`` it represents."""
    n, q = proj.n, proj.q
    scal = proj.sp_element(wtrunc)
    for i in range(q):
        for j in range(q):
            if proj.glq[i][j]:
                a = [0] * n
                b = [0] * n
                a[i] += 1
                b[j] += 1
                scal = scal + WeylElement(n, {(tuple(a), tuple(b), -1): proj.glq[i][j]}, wtrunc, -1)
    for (i, _), v in proj.aprime.items():
        scal = scal + WeylElement.h(n, i, wtrunc, -1).scale(v)
    rows = []
    for i in range(e):
        row = []
        for j in range(e):
            x = WeylElement.const(n, proj.gl[i][j], wtrunc, -1)
            if i == j:
                x = x + scal
            row.append(x)
        rows.append(row)
    return GElement(rows)


# ---------------------------------------------------------------------------
# the standard module M = [D / D<y_1..y_q>]^e


class ModuleElement:
    """``sum_i f_i u_i`` with ``f_i`` free of ``y_1..y_q`` (normal ordered)."""

    __slots__ = ("q", "comps")

    def __init__(self, comps: Sequence[WeylElement], q: int):
        comps = tuple(comps)
        for f in comps:
            for (_, b, _) in f.terms:
                if any(b[r] for r in range(q)):
                    raise ValueError("module components may not contain y_1..y_q")
        self.q = q
        self.comps = comps

    @classmethod
    def generator(cls, n, q, e, i, wtrunc=None) -> "ModuleElement":
        return cls(
            [WeylElement.const(n, 1 if j == i else 0, wtrunc) for j in range(e)], q
        )

    @property
    def e(self):
        return len(self.comps)

    @property
    def n(self):
        return self.comps[0].n

    def __add__(self, other):
        return ModuleElement([a + b for a, b in zip(self.comps, other.comps)], self.q)

    def __sub__(self, other):
        return ModuleElement([a - b for a, b in zip(self.comps, other.comps)], self.q)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def min_h(self) -> int | None:
        return min((c.min_c() for c in self.comps if c), default=None)

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.comps == other.comps

    def __repr__(self):
        return " + ".join(f"({c})*u{i + 1}" for i, c in enumerate(self.comps) if c) or "0"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "e": self.e,
            "comps": [c.term_list() for c in self.comps],
        }


def _y_on_component(f: WeylElement, s: int, q: int, phi_s=None, e=None, i=None):
    """``y_s * (f u_i)`` for ``s < q``: ``h df/dx_s u_i + f * (y_s u_i)``.

    Returns a dict ``component -> WeylElement``.
    """
    n = f.n
    out = {}
    d = {}
    for (a, b, c), v in f.terms.items():
        if a[s]:
            aa = list(a)
            aa[s] -= 1
            key = (tuple(aa), b, c + 1)
            d[key] = d.get(key, 0) + v * a[s]
    out[i] = WeylElement(n, d, f.wtrunc, f.cmin)
    if phi_s is not None:
        for j in range(e):
            if phi_s[i][j]:
                term = weyl_mul(f, phi_s[i][j])
                out[j] = out[j] + term if j in out else term
    return out


def act_presented(d: WeylElement, m: ModuleElement, phi=None) -> ModuleElement:
    """Left action of ``d`` on a module presented by ``y_s u_i = sum_j phi[s][i][j] u_j``.

    ``phi=None`` is the standard module ``M`` where every ``y_s`` (``s < q``)
    kills the generators.
    """
    n, q, e = m.n, m.q, m.e
    if d.n != n:
        raise VariableCountMismatch(f"{d.n} vs {n} variable pairs")
    if any(c < 0 for _, _, c in d.terms):
        raise NegativeHPower("module action needs an element of the integral Weyl algebra")
    result = [WeylElement.zero(n, m.comps[0].wtrunc) for _ in range(e)]
    for (a, b, c), v in d.terms.items():
        # y_1..y_q first, then left-multiply by the rest of the monomial
        vec = list(m.comps)
        for s in range(q):
            for _ in range(b[s]):
                new = [WeylElement.zero(n, vec[0].wtrunc) for _ in range(e)]
                for i in range(e):
                    if not vec[i]:
                        continue
                    parts = _y_on_component(vec[i], s, q, None if phi is None else phi[s], e, i)
                    for j, w in parts.items():
                        new[j] = new[j] + w
                vec = new
        rest_b = tuple(0 if s < q else b[s] for s in range(n))
        mono = WeylElement(n, {(a, rest_b, c): v})
        for i in range(e):
            if vec[i]:
                result[i] = result[i] + weyl_mul(mono, vec[i])
    return ModuleElement(result, q)


def module_act(d: WeylElement, m: ModuleElement) -> ModuleElement:
    return act_presented(d, m, None)


def right_act(m: ModuleElement, mat: MatWeyl) -> ModuleElement:
    """Right action of ``gl_e(D_p)``: ``(sum_i f_i u_i) E = sum_ij f_i E_ij u_j``."""
    e = m.e
    if mat.e != e:
        raise SizeMismatch("matrix size differs from module rank")
    for r in mat.rows:
        for x in r:
            for (a, b, _) in x.terms:
                if any(a[s] or b[s] for s in range(m.q)):
                    raise ValueError("endomorphism entries must live in D_p")
    out = []
    for j in range(e):
        acc = WeylElement.zero(m.n, m.comps[0].wtrunc)
        for i in range(e):
            if m.comps[i] and mat.rows[i][j]:
                acc = acc + weyl_mul(m.comps[i], mat.rows[i][j])
        out.append(acc)
    return ModuleElement(out, m.q)
