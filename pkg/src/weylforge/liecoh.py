"""Chevalley-Eilenberg cochains, Chern-Weil classes and homological perturbation.

Two kinds of Lie algebras appear.  Finite-dimensional ones are tabulated by
structure constants and their cochains are tables over increasing index
tuples.  The infinite-dimensional ``g = (1/h) D + gl_e(D)`` is handled
procedurally: cochains on it are evaluation-only functions of explicit
:class:`~weylforge.weyl.GElement` arguments.

Chern-Weil convention: for an ``l``-linear invariant form ``S`` the cochain is

    rho(S)(v_1..v_2l) = (1/l!) sum_{s(2i-1) < s(2i)} sgn(s) S(C(v_s1, v_s2), ...)

which equals the signed sum over perfect matchings of the arguments, since
the ``l!`` orderings of the pairs all carry the same sign.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .scalars import HUSeries, as_fraction, series_transcend
from .weyl import (
    GElement,
    HProjection,
    WeylElement,
    embed_h,
    g_bracket,
    project_h,
)

__all__ = [
    "ArityMismatch",
    "Cochain",
    "InvalidLieAlgebra",
    "InvariantPoly",
    "LieAlgebra",
    "NonTerminatingSeries",
    "NotClosed",
    "NotExact",
    "NotProjection",
    "ProceduralBody",
    "SideConditionViolation",
    "WeylLieAlgebra",
    "chern_weil",
    "class_ahat_lie",
    "class_c1_lie",
    "class_ch_lie",
    "cup",
    "curvature",
    "d_lie",
    "exactness_solve",
    "extension_cocycle_c0",
    "is_relative",
    "perturb_f_tilde",
    "perturb_phi_tilde",
    "tau_dp_component",
]


class InvalidLieAlgebra(ValueError):
    pass


class ProceduralBody(TypeError):
    pass


class NotProjection(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class NotExact(ValueError):
    def __init__(self, msg, rank_d=None, rank_aug=None):
        super().__init__(msg)
        self.rank_d = rank_d
        self.rank_aug = rank_aug


class SideConditionViolation(ValueError):
    pass


class NonTerminatingSeries(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# small helpers


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _sort_sign(idx: Sequence[int]):
    """Sorted tuple and the sign of the sorting permutation; ``None`` on a repeat."""
    if len(set(idx)) != len(idx):
        return None, 0
    return tuple(sorted(idx)), _perm_sign(idx)


def matchings(items: Sequence[int]):
    """All perfect matchings of ``items`` as lists of pairs ``(a, b)`` with ``a`` before ``b``."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for m in matchings(remaining):
            yield [(first, other)] + m


def _is_zero(v) -> bool:
    if isinstance(v, (int, Fraction)):
        return v == 0
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return not any(v)


def _vadd(a, b):
    if type(a) is tuple:
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _vscale(a, c):
    c = as_fraction(c)
    if type(a) is tuple:
        return tuple(x * c for x in a)
    if isinstance(a, (int, Fraction, HUSeries)):
        return a * c
    return a.scale(c)


def _vsum(values, zero):
    out = zero
    for v in values:
        out = _vadd(out, v)
    return out


# ---------------------------------------------------------------------------
# tabulated Lie algebras


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q with a subalgebra and a module.

    ``sc`` maps ``(i, j)`` to ``{k: c}`` meaning ``[e_i, e_j] = sum c e_k``;
    only one of ``(i, j)``/``(j, i)`` needs to be given.  ``rep`` is a list of
    ``dim`` square matrices; without it the module is the trivial ``Q``.
    """

    def __init__(
        self,
        dim: int,
        sc: Mapping[tuple[int, int], Mapping[int, object]] | Iterable,
        h: Iterable[int] = (),
        rep: Sequence[Sequence[Sequence]] | None = None,
        labels: Sequence[str] | None = None,
        check: bool = True,
    ):
        self.dim = dim
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        if not isinstance(sc, Mapping):
            table: dict = {}
            for i, j, k, c in sc:
                table.setdefault((i, j), {})[k] = c
            sc = table
        br: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in sc.items():
            row = {k: as_fraction(c) for k, c in row.items() if as_fraction(c)}
            if i == j:
                if row:
                    raise InvalidLieAlgebra(f"[e{i}, e{i}] must vanish")
                continue
            neg = {k: -c for k, c in row.items()}
            if (j, i) in br and br[(j, i)] != neg:
                raise InvalidLieAlgebra(f"structure constants not antisymmetric at ({i},{j})")
            br[(i, j)] = row
            br[(j, i)] = neg
        self._br = br
        self.h = tuple(sorted(set(h)))
        if rep is None:
            self.dimV = 1
            self.rep = None
        else:
            self.rep = [[[as_fraction(v) for v in r] for r in m] for m in rep]
            self.dimV = len(self.rep[0]) if self.rep else 1
        if check:
            self.validate()

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self._br.get((i, j), {})

    def bracket(self, u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += a * b * c
        return tuple(out)

    def bracket_basis_vec(self, i: int, j: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for k, c in self.bracket_basis(i, j).items():
            out[k] = c
        return tuple(out)

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def act(self, i: int, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if self.rep is None:
            return (Fraction(0),) * self.dimV
        return tuple(linalg.matvec(self.rep[i], v))

    def validate(self):
        d = self.dim
        for i, j, k in combinations(range(d), 3):
            acc = [Fraction(0)] * d
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, c1 in self.bracket_basis(b, c).items():
                    for t, c2 in self.bracket_basis(a, m).items():
                        acc[t] += c1 * c2
            if any(acc):
                raise InvalidLieAlgebra(f"Jacobi identity fails on ({i},{j},{k})")
        hs = set(self.h)
        for i, j in combinations(self.h, 2):
            if any(k not in hs for k in self.bracket_basis(i, j)):
                raise InvalidLieAlgebra("h is not closed under the bracket")
        if self.rep is not None:
            if len(self.rep) != d:
                raise InvalidLieAlgebra("need one action matrix per basis vector")
            for i, j in combinations(range(d), 2):
                lhs = linalg.matmul(self.rep[i], self.rep[j])
                rhs = linalg.matmul(self.rep[j], self.rep[i])
                want = linalg.zeros(self.dimV, self.dimV)
                for k, c in self.bracket_basis(i, j).items():
                    want = [[w + c * x for w, x in zip(r1, r2)] for r1, r2 in zip(want, self.rep[k])]
                if [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)] != want:
                    raise InvalidLieAlgebra(f"action is not a representation at ({i},{j})")

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        sc = []
        for (i, j), row in sorted(self._br.items()):
            if i < j:
                sc.extend([i, j, k, str(c)] for k, c in sorted(row.items()))
        out = {"dim": self.dim, "sc": sc, "h": list(self.h), "labels": self.labels}
        if self.rep is not None:
            out["rep"] = [[[str(v) for v in r] for r in m] for m in self.rep]
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "LieAlgebra":
        from .scalars import parse_fraction

        sc = [(int(i), int(j), int(k), parse_fraction(str(c))) for i, j, k, c in obj["sc"]]
        rep = obj.get("rep")
        if rep is not None:
            rep = [[[parse_fraction(str(v)) for v in r] for r in m] for m in rep]
        return cls(obj["dim"], sc, obj.get("h", ()), rep, obj.get("labels"))

    # -- standard examples ------------------------------------------------
    @classmethod
    def sl2(cls, h=(0,)) -> "LieAlgebra":
        # basis H, E, F
        return cls(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, h, labels=["H", "E", "F"])

    @classmethod
    def gl2(cls, h=()) -> "LieAlgebra":
        # basis E11, E12, E21, E22
        units = [(0, 0), (0, 1), (1, 0), (1, 1)]
        sc: dict = {}
        for a, (i, j) in enumerate(units):
            for b, (k, l) in enumerate(units):
                if a >= b:
                    continue
                row: dict[int, Fraction] = {}
                if j == k:
                    idx = units.index((i, l))
                    row[idx] = row.get(idx, 0) + 1
                if l == i:
                    idx = units.index((k, j))
                    row[idx] = row.get(idx, 0) - 1
                sc[(a, b)] = row
        return cls(4, sc, h, labels=["E11", "E12", "E21", "E22"])

    @classmethod
    def solvable6(cls, h=(5,)) -> "LieAlgebra":
        """``span{t, x1, y1, x2, y2, z}``: Heisenberg with a grading derivation ``t``."""
        t, x1, y1, x2, y2, z = range(6)
        sc = {
            (x1, y1): {z: 1},
            (x2, y2): {z: 1},
            (t, x1): {x1: 1},
            (t, y1): {y1: -1},
            (t, x2): {x2: 1},
            (t, y2): {y2: -1},
        }
        return cls(6, sc, h, labels=["t", "x1", "y1", "x2", "y2", "z"])


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """Alternating ``l``-cochain: tabulated (``table``) or procedural (``proc``).

    Tabulated values are tuples of Fractions of length ``dimV``; procedural
    values are whatever the evaluation procedure returns (HUSeries here).
    """

    def __init__(self, degree: int, table=None, dimV: int = 1, proc: Callable | None = None):
        self.degree = degree
        self.dimV = dimV
        self.proc = proc
        self.table: dict[tuple[int, ...], tuple[Fraction, ...]] | None = None
        if proc is None:
            clean = {}
            for idx, val in (table or {}).items():
                if isinstance(val, (int, Fraction)):
                    val = (val,)
                val = tuple(as_fraction(v) for v in val)
                if len(val) != dimV:
                    raise ValueError("value has the wrong dimension")
                key, s = _sort_sign(tuple(idx))
                if key is None or len(key) != degree:
                    raise ValueError(f"bad index tuple {idx}")
                if any(val):
                    prev = clean.get(key, (Fraction(0),) * dimV)
                    clean[key] = tuple(p + s * v for p, v in zip(prev, val))
            self.table = {k: v for k, v in clean.items() if any(v)}

    @property
    def procedural(self) -> bool:
        return self.proc is not None

    def _need_table(self):
        if self.procedural:
            raise ProceduralBody("operation needs a tabulated cochain")

    def value(self, idx: Sequence[int]) -> tuple[Fraction, ...]:
        """Value on basis vectors ``e_idx`` (any order, repeats give zero)."""
        self._need_table()
        key, s = _sort_sign(tuple(idx))
        zero = (Fraction(0),) * self.dimV
        if key is None:
            return zero
        v = self.table.get(key)
        if v is None:
            return zero
        return v if s == 1 else tuple(-x for x in v)

    def __call__(self, *args):
        if len(args) != self.degree:
            raise ArityMismatch(f"expected {self.degree} arguments, got {len(args)}")
        if self.procedural:
            return self.proc(*args)
        out = [Fraction(0)] * self.dimV
        supports = [[(i, c) for i, c in enumerate(a) if c] for a in args]

        def rec(pos, idx, coef):
            if pos == len(args):
                v = self.value(idx)
                for t in range(self.dimV):
                    out[t] += coef * v[t]
                return
            for i, c in supports[pos]:
                if i not in idx:
                    rec(pos + 1, idx + (i,), coef * c)

        rec(0, (), Fraction(1))
        return tuple(out)

    def _combine(self, other, c):
        self._need_table()
        other._need_table()
        if self.degree != other.degree or self.dimV != other.dimV:
            raise ValueError("cochains of different shape")
        t = dict(self.table)
        for k, v in other.table.items():
            prev = t.get(k, (Fraction(0),) * self.dimV)
            t[k] = tuple(p + c * x for p, x in zip(prev, v))
        return Cochain(self.degree, t, self.dimV)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "Cochain":
        self._need_table()
        c = as_fraction(c)
        return Cochain(self.degree, {k: tuple(c * x for x in v) for k, v in self.table.items()}, self.dimV)

    def is_zero(self) -> bool:
        self._need_table()
        return not self.table

    def __eq__(self, other):
        if not isinstance(other, Cochain) or self.procedural or other.procedural:
            return NotImplemented
        return self.degree == other.degree and self.dimV == other.dimV and self.table == other.table

    def __repr__(self):
        if self.procedural:
            return f"Cochain(degree={self.degree}, procedural)"
        return f"Cochain(degree={self.degree}, {self.table})"

    def to_json(self) -> dict:
        self._need_table()
        return {
            "degree": self.degree,
            "dimV": self.dimV,
            "table": {",".join(map(str, k)): [str(x) for x in v] for k, v in sorted(self.table.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Cochain":
        from .scalars import parse_fraction

        table = {}
        for k, v in obj["table"].items():
            key = tuple(int(s) for s in k.split(",")) if k else ()
            table[key] = tuple(parse_fraction(str(x)) for x in v)
        return cls(obj["degree"], table, obj.get("dimV", 1))

    @classmethod
    def random(cls, g: LieAlgebra, degree: int, rng: random.Random, density: float = 0.7, bound: int = 3):
        table = {}
        for idx in combinations(range(g.dim), degree):
            if rng.random() < density:
                table[idx] = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(g.dimV))
        return cls(degree, table, g.dimV)

    @classmethod
    def dual(cls, g: LieAlgebra, i: int) -> "Cochain":
        """The linear form ``e_i^*`` (trivial coefficients)."""
        return cls(1, {(i,): (1,)}, 1)


def d_lie(c: Cochain, g: LieAlgebra) -> Cochain:
    """Chevalley-Eilenberg differential.

    ``dc(g_0..g_l) = sum_i (-1)^i g_i c(..^i..) + sum_{i<j} (-1)^(i+j) c([g_i,g_j], ..^i..^j..)``
    """
    if c.procedural:
        raise ProceduralBody("d_lie needs a tabulated cochain; use lie_differential_eval")
    if c.dimV != g.dimV:
        raise ValueError("cochain values do not match the module dimension")
    l = c.degree
    out = {}
    for idx in combinations(range(g.dim), l + 1):
        acc = [Fraction(0)] * g.dimV
        if g.rep is not None:
            for i in range(l + 1):
                v = c.value(idx[:i] + idx[i + 1 :])
                if any(v):
                    img = g.act(idx[i], v)
                    s = -1 if i % 2 else 1
                    for t in range(g.dimV):
                        acc[t] += s * img[t]
        for i in range(l + 1):
            for j in range(i + 1, l + 1):
                rest = idx[:i] + idx[i + 1 : j] + idx[j + 1 :]
                s = -1 if (i + j) % 2 else 1
                for k, cf in g.bracket_basis(idx[i], idx[j]).items():
                    v = c.value((k,) + rest)
                    for t in range(g.dimV):
                        acc[t] += s * cf * v[t]
        if any(acc):
            out[idx] = tuple(acc)
    return Cochain(l + 1, out, g.dimV)


def lie_differential_eval(c: Cochain, args: Sequence, bracket: Callable, act: Callable | None = None, zero=None):
    """Evaluate ``d c`` on explicit arguments by the same formula (works for procedural cochains).

    ``zero`` is returned when the formula has no terms (degree 0, trivial action).
    """
    l = c.degree
    if len(args) != l + 1:
        raise ArityMismatch(f"expected {l + 1} arguments")
    total = None
    for i in range(l + 1):
        if act is None:
            break
        v = act(args[i], c(*(args[:i] + args[i + 1 :])))
        v = v if i % 2 == 0 else _vscale(v, -1)
        total = v if total is None else _vadd(total, v)
    for i in range(l + 1):
        for j in range(i + 1, l + 1):
            rest = list(args[:i]) + list(args[i + 1 : j]) + list(args[j + 1 :])
            v = c(bracket(args[i], args[j]), *rest)
            if (i + j) % 2:
                v = _vscale(v, -1)
            total = v if total is None else _vadd(total, v)
    return zero if total is None else total


def is_relative(c: Cochain, g: LieAlgebra) -> bool:
    if c.procedural:
        raise ProceduralBody("is_relative needs a tabulated cochain")
    hs = set(g.h)
    if any(hs.intersection(k) for k in c.table):
        return False
    dc = d_lie(c, g)
    return not any(hs.intersection(k) for k in dc.table)


def _unit_cochain(degree, idx, comp, dimV):
    val = [Fraction(0)] * dimV
    val[comp] = Fraction(1)
    return Cochain(degree, {idx: tuple(val)}, dimV)


def exactness_solve(c: Cochain, g: LieAlgebra, relative: bool = True) -> Cochain:
    """A primitive ``b`` with ``d_lie(b) = c``; relative primitives only when ``relative``.

    Raises :class:`NotExact` with the two ranks as a certificate otherwise.
    """
    if c.procedural:
        raise ProceduralBody("exactness_solve needs a tabulated cochain")
    if not d_lie(c, g).is_zero():
        raise NotClosed("input cochain is not closed")
    l = c.degree
    if l == 0:
        if c.is_zero():
            return c
        raise NotExact("nonzero 0-cochains are never exact", 0, 1)
    allowed = [i for i in range(g.dim) if not (relative and i in g.h)]
    unknowns = [(idx, t) for idx in combinations(allowed, l - 1) for t in range(g.dimV)]
    rows = [(idx, t) for idx in combinations(range(g.dim), l) for t in range(g.dimV)]
    row_of = {r: k for k, r in enumerate(rows)}
    mat = [[Fraction(0)] * len(unknowns) for _ in rows]
    for col, (idx, t) in enumerate(unknowns):
        img = d_lie(_unit_cochain(l - 1, idx, t, g.dimV), g)
        for key, val in img.table.items():
            for s, x in enumerate(val):
                if x:
                    mat[row_of[(key, s)]][col] = x
    rhs = [c.value(idx)[t] for idx, t in rows]
    sol = linalg.solve(mat, rhs, len(unknowns)) if unknowns else None
    if sol is None:
        if not unknowns and not any(rhs):
            return Cochain(l - 1, {}, c.dimV)
        r1 = linalg.rank(mat) if unknowns else 0
        r2 = linalg.rank([row + [b] for row, b in zip(mat, rhs)])
        raise NotExact("cochain is not exact", r1, r2)
    table: dict = {}
    for (idx, t), x in zip(unknowns, sol):
        if x:
            v = list(table.get(idx, (Fraction(0),) * g.dimV))
            v[t] = x
            table[idx] = tuple(v)
    b = Cochain(l - 1, table, c.dimV)
    assert d_lie(b, g) == c
    return b


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Shuffle product of scalar cochains: ``sum_shuffles sgn a(v_s1..v_sk) b(rest)``."""
    if a.procedural or b.procedural:
        p, q = a.degree, b.degree

        def proc(*args):
            total = None
            for first in combinations(range(p + q), p):
                rest = tuple(i for i in range(p + q) if i not in first)
                s = _perm_sign(first + rest)
                v = a(*(args[i] for i in first)) * b(*(args[i] for i in rest)) * s
                total = v if total is None else total + v
            return total

        return Cochain(p + q, proc=proc)
    if a.dimV != 1 or b.dimV != 1:
        raise ValueError("cup product is implemented for scalar cochains")
    p, q = a.degree, b.degree
    dims = {i for k in list(a.table) + list(b.table) for i in k}
    dim = max(dims) + 1 if dims else 0
    out = {}
    for idx in combinations(range(dim), p + q):
        acc = Fraction(0)
        for first in combinations(range(p + q), p):
            rest = tuple(i for i in range(p + q) if i not in first)
            va = a.value(tuple(idx[i] for i in first))[0]
            if not va:
                continue
            vb = b.value(tuple(idx[i] for i in rest))[0]
            acc += _perm_sign(first + rest) * va * vb
        if acc:
            out[idx] = (acc,)
    return Cochain(p + q, out, 1)


# ---------------------------------------------------------------------------
# invariant polynomials


@dataclass
class InvariantPoly:
    """Homogeneous invariant polynomial of degree ``l`` on ``h``.

    ``homog`` evaluates ``P(Y)``; the symmetric ``l``-linear form is recovered
    by polarization.  ``zero`` is the additive identity of the value ring.
    """

    l: int
    homog: Callable
    name: str = ""
    zero: object = Fraction(0)

    def __call__(self, *ys):
        return self.multilinear(ys)

    def multilinear(self, ys: Sequence):
        l = self.l
        if len(ys) != l:
            raise ArityMismatch(f"degree-{l} form needs {l} arguments")
        if l == 0:
            return self.homog(None)
        total = self.zero
        for r in range(1, l + 1):
            sign = -1 if (l - r) % 2 else 1
            for subset in combinations(range(l), r):
                y = ys[subset[0]]
                for i in subset[1:]:
                    y = _vadd(y, ys[i])
                total = total + self.homog(y) * sign
        return total * Fraction(1, factorial(l))

    def invariance_defect(self, x, ys: Sequence, bracket: Callable):
        """``sum_i S(.., [x, y_i], ..)``; zero for an ad-invariant form."""
        total = self.zero
        for i in range(self.l):
            args = list(ys)
            args[i] = bracket(x, ys[i])
            total = total + self.multilinear(args)
        return total


def _mat_of(y, attr):
    return getattr(y, attr) if hasattr(y, attr) else y


def _mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def _trace_powers(m, k):
    """``[tr m^0, tr m^1, ..., tr m^k]``."""
    n = len(m)
    out = [Fraction(n)]
    if n == 0:
        return out + [Fraction(0)] * k
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(k):
        p = _mat_mul(p, m)
        out.append(sum((p[i][i] for i in range(n)), Fraction(0)))
    return out


def ch_degree(m, k: int) -> Fraction:
    return _trace_powers(m, k)[k] / factorial(k)


@lru_cache(maxsize=None)
def _log_g1_coeffs(k: int) -> tuple[Fraction, ...]:
    """Coefficients of ``log((z/2)/sinh(z/2))`` up to ``z^k``."""
    sinh_over = HUSeries(
        {(2 * m, 0): Fraction(1, 4**m * factorial(2 * m + 1)) for m in range(k // 2 + 1)},
        h_trunc=k + 1,
        var="z",
    )
    g1 = series_transcend("inv", sinh_over)
    return tuple(series_transcend("log", g1).coeffs(k + 1))


def ahat_degree(m, k: int) -> Fraction:
    """Degree-``k`` piece of ``det((m/2)/sinh(m/2))^(1/2) = exp(1/2 tr log G(m))``."""
    if k == 0:
        return Fraction(1)
    a = _log_g1_coeffs(k)
    tr = _trace_powers(m, k)
    s = HUSeries({(j, 0): a[j] * tr[j] / 2 for j in range(1, k + 1)}, h_trunc=k + 1, var="t")
    return series_transcend("exp", s).coeff(k)


def class_ch_lie(e: int, max_deg: int, component: str = "gl") -> list[InvariantPoly]:
    """Degree pieces ``tr(X^l)/l!`` of ``tr exp X`` on ``gl_e``."""
    return [
        InvariantPoly(l, (lambda l: lambda y: ch_degree(_mat_of(y, component), l) if l else Fraction(e))(l),
                      f"ch_{l}")
        for l in range(max_deg + 1)
    ]


def class_c1_lie(q: int, component: str = "glq") -> InvariantPoly:
    return InvariantPoly(1, lambda y: ch_degree(_mat_of(y, component), 1), "c1")


def _sp_of(y):
    return y.sp_matrix() if isinstance(y, HProjection) else y


def class_ahat_lie(p: int, max_deg: int) -> list[InvariantPoly]:
    return [
        InvariantPoly(l, (lambda l: lambda y: ahat_degree(_sp_of(y), l) if l else Fraction(1))(l), f"ahat_{l}")
        for l in range(max_deg + 1)
    ]


# ---------------------------------------------------------------------------
# curvature and Chern-Weil on tabulated algebras


def _check_projection(g: LieAlgebra, pr):
    hs = set(g.h)
    for i in range(g.dim):
        img = pr[i]
        if any(c and k not in hs for k, c in enumerate(img)):
            raise NotProjection(f"pr(e{i}) leaves h")
        if i in hs and tuple(img) != g.basis_vector(i):
            raise NotProjection(f"pr is not the identity on e{i} in h")


def projection_matrix(g: LieAlgebra, images: Mapping[int, Sequence] | None = None):
    """Columns ``pr(e_i)``; default: identity on ``h`` and zero on the other basis vectors."""
    out = []
    for i in range(g.dim):
        if images and i in images:
            out.append(tuple(as_fraction(v) for v in images[i]))
        elif i in g.h:
            out.append(g.basis_vector(i))
        else:
            out.append((Fraction(0),) * g.dim)
    _check_projection(g, out)
    return out


def _apply_pr(pr, v):
    out = [Fraction(0)] * len(v)
    for i, c in enumerate(v):
        if c:
            for k, x in enumerate(pr[i]):
                out[k] += c * x
    return tuple(out)


def curvature(g, pr) -> Cochain:
    """``C(u, v) = [pr u, pr v] - pr [u, v]`` as an h-valued 2-cochain.

    ``g`` is a :class:`LieAlgebra` with ``pr`` a list of images of basis
    vectors, or a :class:`WeylLieAlgebra` (``pr`` ignored, its projection is
    used) in which case the cochain is procedural.
    """
    if isinstance(g, WeylLieAlgebra):
        return Cochain(2, proc=g.curvature)
    _check_projection(g, pr)
    table = {}
    for i, j in combinations(range(g.dim), 2):
        v = _vadd(g.bracket(pr[i], pr[j]), _vscale(_apply_pr(pr, g.bracket_basis_vec(i, j)), -1))
        if any(v):
            table[(i, j)] = v
    return Cochain(2, table, g.dim)


def _cw_sum(S: InvariantPoly, curv: Callable, args: Sequence, zero):
    total = zero
    for m in matchings(list(range(len(args)))):
        order = [i for pair in m for i in pair]
        val = S.multilinear([curv(args[a], args[b]) for a, b in m])
        total = total + val * _perm_sign(order)
    return total


def chern_weil(S: InvariantPoly, g, pr=None, l: int | None = None) -> Cochain:
    """``rho(S)``: a relative ``2l``-cocycle (tabulated or procedural per ``g``)."""
    if l is not None and l != S.l:
        raise ArityMismatch(f"polynomial has degree {S.l}, not {l}")
    l = S.l
    if isinstance(g, WeylLieAlgebra):
        if l == 0:
            return Cochain(0, proc=lambda: S.multilinear([]))
        return Cochain(2 * l, proc=lambda *args: _cw_sum(S, g.curvature, args, S.zero))
    C = curvature(g, pr)
    basis = [g.basis_vector(i) for i in range(g.dim)]
    curv = lambda u, v: C(u, v)
    if l == 0:
        return Cochain(0, {(): (as_fraction(S.multilinear([])),)}, 1)
    table = {}
    for idx in combinations(range(g.dim), 2 * l):
        val = _cw_sum(S, curv, [basis[i] for i in idx], Fraction(0))
        if val:
            table[idx] = (val,)
    return Cochain(2 * l, table, 1)


def chern_weil_literal(S: InvariantPoly, g: LieAlgebra, pr) -> Cochain:
    """Direct ``(1/l!) sum_{s(2i-1)<s(2i)}`` form of ``rho``; slow, used as a cross-check."""
    from itertools import permutations

    C = curvature(g, pr)
    l = S.l
    basis = [g.basis_vector(i) for i in range(g.dim)]
    table = {}
    for idx in combinations(range(g.dim), 2 * l):
        acc = Fraction(0)
        for perm in permutations(range(2 * l)):
            if any(perm[2 * i] > perm[2 * i + 1] for i in range(l)):
                continue
            ys = [C(basis[idx[perm[2 * i]]], basis[idx[perm[2 * i + 1]]]) for i in range(l)]
            acc += _perm_sign(perm) * S.multilinear(ys)
        acc /= factorial(l)
        if acc:
            table[idx] = (acc,)
    return Cochain(2 * l, table, 1)


def linear_poly_from(g: LieAlgebra, coeffs: Mapping[int, object]) -> InvariantPoly:
    """Degree-1 polynomial ``Y -> sum c_i Y_i`` on the coordinates of ``h``."""
    cf = {i: as_fraction(c) for i, c in coeffs.items()}
    return InvariantPoly(1, lambda y: sum((c * y[i] for i, c in cf.items()), Fraction(0)), "linear")


def power_poly(base: InvariantPoly, k: int) -> InvariantPoly:
    """``P^k`` for a degree-1 ``P``."""
    if base.l != 1:
        raise ValueError("power_poly expects a linear polynomial")
    return InvariantPoly(k, lambda y: base.homog(y) ** k if k else Fraction(1), f"{base.name}^{k}")


def product_poly(a: InvariantPoly, b: InvariantPoly) -> InvariantPoly:
    return InvariantPoly(a.l + b.l, lambda y: a.homog(y) * b.homog(y), f"{a.name}*{b.name}", a.zero)


# ---------------------------------------------------------------------------
# the procedural algebra g = (1/h) D + gl_e(D) and its ideal-adapted variant


@dataclass(frozen=True)
class WeylLieAlgebra:
    """``g`` over ``n`` variable pairs, ``e x e`` matrices, normal block of size ``q``.

    For ``q > 0`` this is the Lie algebra ``N_J`` of elements
    ``(1/h)(D_p + J) I + gl_e(D_p + J)`` with ``J = <y_1..y_q, h>``; ``h`` is
    ``gl_e + gl_q + sp_2p + a'`` and the projection is :func:`project_h`.
    """

    n: int
    q: int = 0
    e: int = 1

    @property
    def p(self) -> int:
        return self.n - self.q

    def bracket(self, a: GElement, b: GElement) -> GElement:
        return g_bracket(a, b)

    def pr(self, g: GElement) -> HProjection:
        return project_h(g, self.q)

    def h_bracket(self, y1: HProjection, y2: HProjection) -> HProjection:
        out = project_h(g_bracket(embed_h(y1, self.e), embed_h(y2, self.e)), self.q)
        return out

    def curvature(self, u: GElement, v: GElement) -> HProjection:
        return self.h_bracket(self.pr(u), self.pr(v)) - self.pr(self.bracket(u, v))

    def pr0(self, y) -> HUSeries:
        """Scalar projection ``(1/e) tr(gl_e part) - 1/2 tr(gl_q part)``."""
        if not isinstance(y, HProjection):
            y = self.pr(y)
        tr = sum((y.gl[i][i] for i in range(self.e)), Fraction(0)) / self.e
        trq = sum((y.glq[i][i] for i in range(self.q)), Fraction(0))
        return HUSeries.const(tr - trq / 2)

    def zero_value(self):
        return HUSeries({})

    # -- membership ---------------------------------------------------------
    def _mono_ok(self, key, ideal: bool) -> bool:
        a, b, c = key
        q = self.q
        if c >= 1 or any(b[r] for r in range(q)):
            return True
        if ideal:
            return False
        return not any(a[r] for r in range(q))

    def contains(self, g: GElement, ideal: bool = False) -> bool:
        """Membership in ``N_J`` (or in the ideal ``(1/h) J I + gl_e(J)``)."""
        if not g.check_invariant():
            return False
        scal = g.rows[0][0]
        for (a, b, c), _ in scal.terms.items():
            if c == -1 and not self._mono_ok((a, b, 0), ideal):
                return False
        for i in range(self.e):
            for j in range(self.e):
                for key in g.rows[i][j].terms:
                    if key[2] < 0:
                        continue
                    if not self._mono_ok(key, ideal):
                        return False
        return True

    # -- random sampling ----------------------------------------------------
    def _random_mono(self, rng, max_weight, cmin, ideal):
        n = self.n
        while True:
            w = rng.randint(-1, max_weight)
            c = cmin if rng.random() < 0.7 else rng.randint(cmin, max(cmin, max_weight // 2))
            deg = w - 2 * c
            if deg < 0:
                continue
            a, b = [0] * n, [0] * n
            for _ in range(deg):
                (a if rng.random() < 0.5 else b)[rng.randrange(n)] += 1
            key = (tuple(a), tuple(b), c)
            if self._mono_ok((key[0], key[1], max(c, 0)), ideal):
                return key

    def random_element(self, rng: random.Random, max_weight: int = 2, nterms: int = 3,
                       ideal: bool = False, bound: int = 3) -> GElement:
        n, e = self.n, self.e
        scal_terms = {}
        for _ in range(nterms):
            key = self._random_mono(rng, max_weight, -1, ideal)
            scal_terms[key] = scal_terms.get(key, 0) + rng.randint(-bound, bound)
        scal = WeylElement(n, scal_terms, None, -1)
        rows = []
        for i in range(e):
            row = []
            for j in range(e):
                t = {}
                for _ in range(rng.randint(0, nterms)):
                    key = self._random_mono(rng, max_weight, 0, ideal)
                    t[key] = t.get(key, 0) + rng.randint(-bound, bound)
                x = WeylElement(n, t, None, -1)
                row.append(x + scal if i == j else x)
            rows.append(row)
        g = GElement(rows)
        assert self.contains(g, ideal)
        return g

    def random_h_element(self, rng: random.Random, bound: int = 3) -> HProjection:
        g = self.random_element(rng, max_weight=0, nterms=4, bound=bound)
        return self.pr(g)


def extension_cocycle_c0(g1: GElement, g2: GElement, nvars: int, e: int, q: int = 0) -> HUSeries:
    """``c_0(g1, g2) = pr_0(C(g1, g2))``, the Chern-Weil image of the scalar projection ``pr_0``."""
    alg = WeylLieAlgebra(nvars, q, e)
    return alg.pr0(alg.curvature(g1, g2))


def _tau_poly(alg: WeylLieAlgebra, k: int) -> InvariantPoly:
    """Degree-``k`` piece of ``tr exp(X) * Ahat(Y) * exp(-a')`` on ``h``."""

    def homog(y: HProjection):
        if y is None:
            y = HProjection.zero(alg.n, alg.q, alg.e)
        sp = y.sp_matrix() if alg.p else []
        total = HUSeries({})
        for i in range(k + 1):
            ci = ch_degree(y.gl, i) if i else Fraction(alg.e)
            if not ci:
                continue
            for j in range(k - i + 1):
                aj = ahat_degree(sp, j) if j else Fraction(1)
                if not aj:
                    continue
                m = k - i - j
                a = y.aprime * Fraction(-1) if m else None
                am = a**m if m else HUSeries.const(1)
                total = total + am * (ci * aj / factorial(m))
        return total

    return InvariantPoly(k, homog, f"tau_{k}", HUSeries({}))


def _combined_poly(alg: WeylLieAlgebra, k: int) -> InvariantPoly:
    """Degree-``k`` piece of ``tr exp(X) * exp(-c1/2 - c0)`` with ``c1 = tr`` on ``gl_q``."""

    def homog(y: HProjection):
        if y is None:
            y = HProjection.zero(alg.n, alg.q, alg.e)
        lin = Fraction(-1, 2) * ch_degree(y.glq, 1) - alg.pr0(y).scalar() if alg.q else -alg.pr0(y).scalar()
        total = Fraction(0)
        for i in range(k + 1):
            ci = ch_degree(y.gl, i) if i else Fraction(alg.e)
            total += ci * lin ** (k - i) / factorial(k - i)
        return HUSeries.const(total)

    return InvariantPoly(k, homog, f"combined_{k}", HUSeries({}))


def _ahat_poly(alg: WeylLieAlgebra, k: int) -> InvariantPoly:
    return InvariantPoly(k, lambda y: HUSeries.const(ahat_degree(y.sp_matrix(), k) if k else Fraction(1)),
                         f"ahat_{k}", HUSeries({}))


def tau_dp_component(args: Sequence[GElement], k: int, e: int, p: int, q: int = 0) -> HUSeries:
    """Degree-``2k`` cochain of ``ch_Lie(gl_e) Ahat_Lie(sp_2p) exp(-C(a'))`` evaluated on ``args``."""
    if len(args) != 2 * k:
        raise ArityMismatch(f"degree {2 * k} cochain needs {2 * k} arguments, got {len(args)}")
    alg = WeylLieAlgebra(p + q, q, e)
    S = _tau_poly(alg, k)
    if k == 0:
        return S.multilinear([])
    return _cw_sum(S, alg.curvature, list(args), HUSeries({}))


def ahat_factor_component(args: Sequence[GElement], k: int, alg: WeylLieAlgebra) -> HUSeries:
    if len(args) != 2 * k:
        raise ArityMismatch(f"need {2 * k} arguments")
    S = _ahat_poly(alg, k)
    return S.multilinear([]) if k == 0 else _cw_sum(S, alg.curvature, list(args), HUSeries({}))


def combined_factor_component(args: Sequence[GElement], k: int, alg: WeylLieAlgebra) -> HUSeries:
    """Degree-``2k`` cochain of ``ch_Lie(gl_e) exp(-c_1/2 - c_0)`` evaluated on ``args``."""
    if len(args) != 2 * k:
        raise ArityMismatch(f"need {2 * k} arguments")
    S = _combined_poly(alg, k)
    return S.multilinear([]) if k == 0 else _cw_sum(S, alg.curvature, list(args), HUSeries({}))


# ---------------------------------------------------------------------------
# homological perturbation


@dataclass
class ModuleComplex:
    """A complex ``(M, d)`` with a compatible action of ``g`` (``act(i, m)`` for basis ``e_i``).

    ``d`` and the homotopies are odd; values need ``+``, unary ``-`` and a
    zero test.  ``basis`` is a spanning set used by the checks.
    """

    g: LieAlgebra
    d: Callable
    act: Callable
    zero: object
    basis: list = field(default_factory=list)


HomCochain = dict  # tuple of basis indices (increasing) -> module value; mixed Lie degrees allowed


def _clean(c: HomCochain) -> HomCochain:
    return {k: v for k, v in c.items() if not _is_zero(v)}


def _hom_get(c: HomCochain, idx, zero):
    key, s = _sort_sign(tuple(idx))
    if key is None or key not in c:
        return zero
    v = c[key]
    return v if s == 1 else -v


def _degrees(c: HomCochain):
    return sorted({len(k) for k in c})


def hom_d_bracket(c: HomCochain, cx: ModuleComplex) -> HomCochain:
    g = cx.g
    out = {}
    for l in _degrees(c):
        for idx in combinations(range(g.dim), l + 1):
            acc = cx.zero
            for i in range(l + 1):
                for j in range(i + 1, l + 1):
                    rest = idx[:i] + idx[i + 1 : j] + idx[j + 1 :]
                    for k, cf in g.bracket_basis(idx[i], idx[j]).items():
                        v = _hom_get(c, (k,) + rest, cx.zero)
                        if not _is_zero(v):
                            acc = acc + _vscale(v, cf * (-1 if (i + j) % 2 else 1))
            out[idx] = acc
    return _clean(out)


def hom_delta(c: HomCochain, cx: ModuleComplex) -> HomCochain:
    """The module-action part ``sum_i (-1)^i g_i c(..^i..)``."""
    g = cx.g
    out = {}
    for l in _degrees(c):
        for idx in combinations(range(g.dim), l + 1):
            acc = cx.zero
            for i in range(l + 1):
                v = _hom_get(c, idx[:i] + idx[i + 1 :], cx.zero)
                if not _is_zero(v):
                    w = cx.act(idx[i], v)
                    acc = acc + (w if i % 2 == 0 else -w)
            out[idx] = acc
    return _clean(out)


def hom_post(c: HomCochain, f: Callable, odd: bool = False) -> HomCochain:
    """Post-composition ``c -> f o c``; odd maps pick up ``(-1)^(Lie degree)``."""
    out = {}
    for k, v in c.items():
        w = f(v)
        if odd and len(k) % 2:
            w = -w
        out[k] = w
    return _clean(out)


def hom_d(c: HomCochain, cx: ModuleComplex) -> HomCochain:
    """``d_Hom``: the bracket part plus the internal differential."""
    return hom_add(hom_d_bracket(c, cx), hom_post(c, cx.d, odd=True))


def hom_d_lie(c: HomCochain, cx: ModuleComplex) -> HomCochain:
    return hom_add(hom_d(c, cx), hom_delta(c, cx))


def hom_add(a: HomCochain, b: HomCochain, sign: int = 1) -> HomCochain:
    out = dict(a)
    for k, v in b.items():
        v = v if sign == 1 else -v
        out[k] = out[k] + v if k in out else v
    return _clean(out)


def hom_equal(a: HomCochain, b: HomCochain) -> bool:
    return not hom_add(a, b, -1)


def spanning_cochains(cx: ModuleComplex) -> list[HomCochain]:
    out = []
    for l in range(cx.g.dim + 1):
        for idx in combinations(range(cx.g.dim), l):
            for m in cx.basis:
                out.append({idx: m})
    return out


def _series(c: HomCochain, step: Callable, cap: int) -> HomCochain:
    """``sum_k step^k(c)``, refusing to truncate silently."""
    total = dict(c)
    term = c
    for _ in range(cap):
        term = step(term)
        if not term:
            return total
        total = hom_add(total, term)
    raise NonTerminatingSeries(f"(delta phi)^k did not vanish within {cap} steps")


def _check_side(cond: bool, what: str):
    if not cond:
        raise SideConditionViolation(what)


def check_side_conditions(M: ModuleComplex, f: Callable, phi: Callable, g: Callable | None = None,
                          N: ModuleComplex | None = None):
    for m in M.basis:
        _check_side(_is_zero(phi(phi(m))), "phi phi != 0")
        _check_side(_is_zero(f(phi(m))), "f phi != 0")
    if g is not None and N is not None:
        for n in N.basis:
            _check_side(_is_zero(phi(g(n))), "phi g != 0")


def perturb_f_tilde(M: ModuleComplex, N: ModuleComplex, f: Callable, g: Callable, phi: Callable,
                    cap: int | None = None, check: bool = True) -> Callable[[HomCochain], HomCochain]:
    """``f~ = f_Hom (1 + delta phi_Hom + (delta phi_Hom)^2 + ...)``.

    ``g`` enters only through the side conditions.  ``cap`` bounds the
    number of series terms (default: cochain degree bound times 8).
    """
    if check:
        check_side_conditions(M, f, phi, g, N)
    cap = (M.g.dim + 1) * 8 if cap is None else cap
    step = lambda c: hom_delta(hom_post(c, phi, odd=True), M)

    def apply(c: HomCochain) -> HomCochain:
        return hom_post(_series(c, step, cap), f)

    return apply


def perturb_phi_tilde(M: ModuleComplex, f: Callable, phi: Callable, cap: int | None = None,
                      check: bool = True) -> Callable[[HomCochain], HomCochain]:
    """``phi~ = phi_Hom (1 + delta phi_Hom + ...)``: homotopy between ``1`` and ``f_Hom``."""
    if check:
        check_side_conditions(M, f, phi)
    cap = (M.g.dim + 1) * 8 if cap is None else cap
    step = lambda c: hom_delta(hom_post(c, phi, odd=True), M)

    def apply(c: HomCochain) -> HomCochain:
        return hom_post(_series(c, step, cap), phi, odd=True)

    return apply


def series_length(M: ModuleComplex, phi: Callable, cochains: Iterable[HomCochain], cap: int = 64) -> int:
    """Largest ``k`` with ``(delta phi_Hom)^k != 0`` on the given cochains, plus one."""
    best = 0
    step = lambda c: hom_delta(hom_post(c, phi, odd=True), M)
    for c in cochains:
        k, term = 0, c
        while term and k < cap:
            k += 1
            term = step(term)
        best = max(best, k)
    return best


class Vec(tuple):
    """Immutable rational vector with the arithmetic the perturbation code needs."""

    def __new__(cls, it):
        return super().__new__(cls, (as_fraction(x) for x in it))

    def __add__(self, other):
        return Vec(a + b for a, b in zip(self, other))

    def __neg__(self):
        return Vec(-a for a in self)

    def __sub__(self, other):
        return Vec(a - b for a, b in zip(self, other))

    def scale(self, c):
        return Vec(a * c for a in self)

    def is_zero(self):
        return not any(self)


def matrix_op(m: Sequence[Sequence]) -> Callable[[Vec], Vec]:
    mm = [[as_fraction(v) for v in r] for r in m]
    return lambda v: Vec(linalg.matvec(mm, v))


def matrix_complex(g: LieAlgebra, d: Sequence[Sequence], rep: Sequence[Sequence[Sequence]]) -> ModuleComplex:
    dim = len(d)
    dop = matrix_op(d)
    acts = [matrix_op(r) for r in rep]
    basis = [Vec(int(i == j) for j in range(dim)) for i in range(dim)]
    return ModuleComplex(g, dop, lambda i, v: acts[i](v), Vec([0] * dim), basis)
