"""Characteristic-class algebra over Chern roots.

Classes live in a truncated commutative ring generated by the Chern classes
``c_1..c_r`` of named bundles (``c_i`` has degree ``i``) and by abstract
degree-one generators such as the components of a quantization class.
Coefficients are HUSeries so that ``h``-poles like ``(1/h)[w]`` can be carried.
Symmetric functions of the roots are handled through power sums and Newton's
identities.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence

from .poly import Poly
from .scalars import HUSeries, as_fraction, parse_fraction, series_transcend

__all__ = [
    "ChernClassExpr",
    "NonUnitConstantTerm",
    "ahat_duality_check",
    "ahat_series",
    "chern_character",
    "genus_from_series",
    "grr_identity_check",
    "tau_Y_assemble",
    "todd_series",
]


class NonUnitConstantTerm(ValueError):
    pass


Gen = tuple[str, int]  # (name, chern index); abstract generators use index 0
Mono = tuple[tuple[Gen, int], ...]


def _gen_degree(g: Gen) -> int:
    return g[1] if g[1] else 1


def _mono_degree(m: Mono) -> int:
    return sum(_gen_degree(g) * e for g, e in m)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    out = dict(a)
    for g, e in b:
        out[g] = out.get(g, 0) + e
    return tuple(sorted(out.items()))


class ChernClassExpr:
    """Truncated polynomial in Chern classes and abstract generators, degrees ``<= d``."""

    __slots__ = ("bundles", "abstract", "d", "terms")

    def __init__(
        self,
        bundles: Mapping[str, int],
        abstract: Mapping[str, int] | None = None,
        d: int = 6,
        terms: Mapping[Mono, object] | None = None,
    ):
        self.bundles = dict(bundles)
        self.abstract = dict(abstract or {})
        self.d = d
        clean: dict[Mono, HUSeries] = {}
        for m, c in (terms or {}).items():
            if not isinstance(c, HUSeries):
                c = HUSeries.const(as_fraction(c))
            m = tuple(sorted((tuple(g), e) for g, e in m if e))
            for (name, i), _ in m:
                if i == 0:
                    if name not in self.abstract:
                        raise KeyError(f"unknown abstract generator {name!r}")
                elif name not in self.bundles or i > self.bundles[name]:
                    raise KeyError(f"c_{i}({name}) is not a generator")
            if _mono_degree(m) > d or c.is_zero():
                continue
            clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: c for m, c in clean.items() if not c.is_zero()}

    # -- constructors -------------------------------------------------------
    def _like(self, terms) -> "ChernClassExpr":
        return ChernClassExpr(self.bundles, self.abstract, self.d, terms)

    @classmethod
    def const(cls, c, bundles=None, abstract=None, d=6) -> "ChernClassExpr":
        return cls(bundles or {}, abstract, d, {(): c})

    @classmethod
    def chern(cls, name: str, i: int, bundles, abstract=None, d=6) -> "ChernClassExpr":
        if i == 0:
            return cls.const(1, bundles, abstract, d)
        if i > bundles[name]:
            return cls(bundles, abstract, d)
        return cls(bundles, abstract, d, {(((name, i), 1),): 1})

    @classmethod
    def generator(cls, name: str, bundles, abstract, d=6, coef=1) -> "ChernClassExpr":
        return cls(bundles, abstract, d, {(((name, 0), 1),): coef})

    # -- ring structure -------------------------------------------------------
    def _merge(self, other: "ChernClassExpr"):
        for k, v in other.bundles.items():
            if self.bundles.get(k, v) != v:
                raise ValueError(f"bundle {k!r} has two ranks")
        bundles = {**self.bundles, **other.bundles}
        abstract = {**self.abstract, **other.abstract}
        return bundles, abstract, min(self.d, other.d)

    def _coerce(self, other):
        if isinstance(other, ChernClassExpr):
            return other
        if isinstance(other, HUSeries):
            return ChernClassExpr(self.bundles, self.abstract, self.d, {(): other})
        return ChernClassExpr(self.bundles, self.abstract, self.d, {(): as_fraction(other)})

    def __add__(self, other):
        other = self._coerce(other)
        b, a, d = self._merge(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return ChernClassExpr(b, a, d, t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._like({m: c * as_fraction(other) for m, c in self.terms.items()})
        other = self._coerce(other)
        b, a, d = self._merge(other)
        t: dict[Mono, HUSeries] = {}
        for m1, c1 in self.terms.items():
            d1 = _mono_degree(m1)
            for m2, c2 in other.terms.items():
                if d1 + _mono_degree(m2) > d:
                    continue
                m = _mono_mul(m1, m2)
                v = c1 * c2
                t[m] = t[m] + v if m in t else v
        return ChernClassExpr(b, a, d, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self._like({(): 1})
        for _ in range(k):
            out = out * self
        return out

    def constant(self) -> HUSeries:
        return self.terms.get((), HUSeries({}))

    def degree_part(self, k: int) -> "ChernClassExpr":
        return self._like({m: c for m, c in self.terms.items() if _mono_degree(m) == k})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, (ChernClassExpr, int, Fraction, HUSeries)):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def apply_series(self, coeffs: Sequence) -> "ChernClassExpr":
        """``sum_k coeffs[k] x^k`` for ``x`` with zero constant term (nilpotent by degree)."""
        if not self.constant().is_zero():
            raise NonUnitConstantTerm("series substitution needs a zero constant term")
        out = self._like({})
        power = self._like({(): 1})
        for k in range(self.d + 1):
            if k < len(coeffs) and coeffs[k]:
                out = out + power * as_fraction(coeffs[k])
            power = power * self
            if power.is_zero():
                break
        return out

    def exp(self) -> "ChernClassExpr":
        return self.apply_series([Fraction(1, factorial(k)) for k in range(self.d + 1)])

    def inv(self) -> "ChernClassExpr":
        c = self.constant()
        if not c.is_scalar() or c.scalar() == 0:
            raise NonUnitConstantTerm("inverse needs an invertible rational constant term")
        c0 = c.scalar()
        rest = (self - c0) * (1 / c0)
        return rest.apply_series([Fraction((-1) ** k) for k in range(self.d + 1)]) * (1 / c0)

    def __repr__(self):
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (_mono_degree(t[0]), t[0])):
            mono = "*".join(
                (f"c{i}({n})" if i else n) + (f"^{e}" if e > 1 else "") for (n, i), e in m
            )
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) or "0"

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for m, c in sorted(self.terms.items()):
            terms.append({"mono": [[n, i, e] for (n, i), e in m], "coef": c.to_json()})
        return {
            "bundles": [{"name": k, "rank": v} for k, v in sorted(self.bundles.items())],
            "abstract": [{"name": k, "hpow": v} for k, v in sorted(self.abstract.items())],
            "d": self.d,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ChernClassExpr":
        bundles = {b["name"]: int(b["rank"]) for b in obj.get("bundles", [])}
        abstract = {a["name"]: int(a.get("hpow", 0)) for a in obj.get("abstract", [])}
        terms = {}
        for t in obj.get("terms", []):
            m = tuple(((n, int(i)), int(e)) for n, i, e in t["mono"])
            c = t["coef"]
            terms[m] = HUSeries.from_json(c) if isinstance(c, Mapping) else parse_fraction(str(c))
        return cls(bundles, abstract, int(obj.get("d", 6)), terms)

    # -- root substitution ----------------------------------------------------
    def substitute_roots(self, roots: Mapping[str, Sequence[Poly]], abstract: Mapping[str, Poly] | None = None) -> Poly:
        """Replace ``c_i(E)`` by the elementary symmetric functions of the given root polynomials."""
        sample = next(iter(next(iter(roots.values()))))
        nv, tr, w = sample.nvars, sample.trunc, sample.weights
        one = Poly.const(nv, 1, tr, w)
        elem: dict[Gen, Poly] = {}
        for name, rs in roots.items():
            e = [one] + [Poly(nv, {}, tr, w)] * len(rs)
            for r in rs:
                for i in range(len(rs), 0, -1):
                    e[i] = e[i] + e[i - 1] * r
            for i in range(1, len(rs) + 1):
                elem[(name, i)] = e[i]
        for name, p in (abstract or {}).items():
            elem[(name, 0)] = p
        out = Poly(nv, {}, tr, w)
        for m, c in self.terms.items():
            if not c.is_scalar():
                raise ValueError("root substitution needs rational coefficients")
            t = one * c.scalar()
            for g, e in m:
                t = t * elem[g] ** e
            out = out + t
        return out


# ---------------------------------------------------------------------------
# series


@lru_cache(maxsize=None)
def _ahat_coeffs(d: int) -> tuple[Fraction, ...]:
    sinh_over = HUSeries(
        {(2 * m, 0): Fraction(1, 4**m * factorial(2 * m + 1)) for m in range(d // 2 + 1)}, h_trunc=d + 1, var="z"
    )
    g1_sq = series_transcend("inv", sinh_over)
    return tuple(series_transcend("sqrt", g1_sq).coeffs(d + 1))


@lru_cache(maxsize=None)
def _todd_coeffs(d: int) -> tuple[Fraction, ...]:
    # (1 - e^{-z}) / z = sum (-1)^k z^k / (k+1)!
    s = HUSeries({(k, 0): Fraction((-1) ** k, factorial(k + 1)) for k in range(d + 1)}, h_trunc=d + 1, var="z")
    return tuple(series_transcend("inv", s).coeffs(d + 1))


def ahat_series(d: int) -> list[Fraction]:
    """Coefficients of ``sqrt((z/2)/sinh(z/2))`` up to ``z^d``."""
    return list(_ahat_coeffs(d))


def todd_series(d: int) -> list[Fraction]:
    """Coefficients of ``z/(1 - e^{-z})`` up to ``z^d``."""
    return list(_todd_coeffs(d))


def exp_series(d: int, scale=1) -> list[Fraction]:
    scale = as_fraction(scale)
    return [scale**k / factorial(k) for k in range(d + 1)]


def series_log(coeffs: Sequence) -> list[Fraction]:
    coeffs = [as_fraction(c) for c in coeffs]
    if coeffs[0] != 1:
        raise NonUnitConstantTerm("genus series must have constant term 1")
    s = HUSeries({(k, 0): c for k, c in enumerate(coeffs)}, h_trunc=len(coeffs), var="z")
    return series_transcend("log", s).coeffs(len(coeffs))


# ---------------------------------------------------------------------------
# symmetric functions


def power_sums(bundle: str, rank: int, d: int, bundles=None, abstract=None) -> list[ChernClassExpr]:
    """``p_0..p_d`` of the roots via Newton's identities."""
    bundles = dict(bundles or {bundle: rank})
    bundles.setdefault(bundle, rank)
    c = [ChernClassExpr.chern(bundle, i, bundles, abstract, d) for i in range(d + 1)]
    p = [ChernClassExpr.const(rank, bundles, abstract, d)]
    for k in range(1, d + 1):
        acc = c[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + c[i] * p[k - i] * ((-1) ** (i - 1))
        p.append(acc)
    return p


def elementary_from_power_sums(p: Sequence[ChernClassExpr]) -> list[ChernClassExpr]:
    """Inverse Newton: ``k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i``."""
    one = p[0] * 0 + 1
    e = [one]
    for k in range(1, len(p)):
        acc = p[0] * 0
        for i in range(1, k + 1):
            acc = acc + e[k - i] * p[i] * ((-1) ** (i - 1))
        e.append(acc * Fraction(1, k))
    return e


def genus_from_series(G: Sequence, bundle: str, rank: int, d: int, bundles=None, abstract=None) -> ChernClassExpr:
    """``prod_i G(z_i)`` over the roots of ``bundle`` as a polynomial in its Chern classes."""
    G = [as_fraction(c) for c in G] + [Fraction(0)] * max(0, d + 1 - len(G))
    if G[0] != 1:
        raise NonUnitConstantTerm("genus series must have constant term 1")
    logg = series_log(G[: d + 1])
    p = power_sums(bundle, rank, d, bundles, abstract)
    s = p[0] * 0
    for k in range(1, d + 1):
        if logg[k]:
            s = s + p[k] * logg[k]
    return s.exp()


def chern_character(bundle: str, rank: int, d: int, bundles=None, abstract=None) -> ChernClassExpr:
    p = power_sums(bundle, rank, d, bundles, abstract)
    out = p[0]
    for k in range(1, d + 1):
        out = out + p[k] * Fraction(1, factorial(k))
    return out


def tau_Y_assemble(
    Q: tuple[str, int],
    N: tuple[str, int],
    E: tuple[str, int],
    quant_class: Sequence[tuple[str, int]],
    d: int,
) -> ChernClassExpr:
    """``Ahat(Q) exp(-c_1(N)/2) exp(-c(O_h)|_Y) ch(E)`` with ``c(O_h) = sum_i h^(k_i) [w_i]``."""
    bundles = {Q[0]: Q[1], N[0]: N[1], E[0]: E[1]}
    abstract = {name: k for name, k in quant_class}
    ahat = genus_from_series(ahat_series(d), Q[0], Q[1], d, bundles, abstract)
    c1n = ChernClassExpr.chern(N[0], 1, bundles, abstract, d)
    half = (c1n * Fraction(-1, 2)).exp()
    cls = ChernClassExpr(bundles, abstract, d)
    for name, k in quant_class:
        cls = cls + ChernClassExpr.generator(name, bundles, abstract, d, HUSeries.monomial(k, 0))
    quant = (-cls).exp()
    return ahat * half * quant * chern_character(E[0], E[1], d, bundles, abstract)


# ---------------------------------------------------------------------------
# the Riemann-Roch reduction


def _root_genus(coeffs: Sequence[Fraction], roots: Sequence[Poly]) -> Poly:
    out = Poly.const(roots[0].nvars, 1, roots[0].trunc, roots[0].weights)
    for r in roots:
        g = Poly(r.nvars, {}, r.trunc, r.weights)
        power = Poly.const(r.nvars, 1, r.trunc, r.weights)
        for c in coeffs:
            g = g + power * c
            power = power * r
        out = out * g
    return out


def per_root_identity(d: int) -> bool:
    """``G1(z)^2 / G2(z) = exp(-z/2)`` to degree ``d``."""
    g1 = HUSeries({(k, 0): c for k, c in enumerate(ahat_series(d))}, h_trunc=d + 1, var="z")
    g2 = HUSeries({(k, 0): c for k, c in enumerate(todd_series(d))}, h_trunc=d + 1, var="z")
    lhs = g1 * g1 * series_transcend("inv", g2)
    rhs = HUSeries({(k, 0): c for k, c in enumerate(exp_series(d, Fraction(-1, 2)))}, h_trunc=d + 1, var="z")
    return lhs == rhs


def grr_identity_check(d: int, q: int = 1, p: int = 1) -> bool:
    """Check ``Ahat(T_M|Y)/Td(N) = Ahat(Q) Ahat(N)^2/Td(N) = Ahat(Q) exp(-c_1(N)/2)`` to degree ``d``.

    ``T_M|Y`` is split by the roots of ``N``, of ``Q`` (rank ``2p``) and of
    ``N^vee`` (negated ``N`` roots).  Both sides are compared as polynomials in
    independent root variables, and the Chern-class form is compared after
    substituting the roots.
    """
    nq = 2 * p
    nv = q + nq
    trunc = d + 1
    var = [Poly.var(nv, i, trunc) for i in range(nv)]
    nroots = var[:q]
    qroots = var[q:]
    ahat, todd = ahat_series(d), todd_series(d)

    total = _root_genus(ahat, nroots + qroots + [-r for r in nroots])
    split = _root_genus(ahat, qroots) * _root_genus(ahat, nroots) ** 2
    if total != split:
        return False
    # Td(N) is invertible; compare after multiplying through
    lhs = split
    exp_half = _root_genus(exp_series(d, Fraction(-1, 2)), nroots)
    rhs = _root_genus(ahat, qroots) * exp_half * _root_genus(todd, nroots)
    if lhs != rhs:
        return False
    if not per_root_identity(d):
        return False
    # Chern-class form: Ahat(N)^2 Td(N)^{-1} = exp(-c_1(N)/2)
    bundles = {"N": q, "Q": nq}
    a_n = genus_from_series(ahat, "N", q, d, bundles)
    t_n = genus_from_series(todd, "N", q, d, bundles)
    lhs_c = genus_from_series(ahat, "Q", nq, d, bundles) * a_n * a_n * t_n.inv()
    rhs_c = genus_from_series(ahat, "Q", nq, d, bundles) * (ChernClassExpr.chern("N", 1, bundles, None, d) * Fraction(-1, 2)).exp()
    if lhs_c != rhs_c:
        return False
    sub = lhs_c.substitute_roots({"N": nroots, "Q": qroots})
    return sub == _root_genus(ahat, qroots) * exp_half


def dualize(expr: ChernClassExpr, bundle: str) -> ChernClassExpr:
    """Substitute ``c_i(E) -> (-1)^i c_i(E)``, i.e. pass to the dual bundle."""
    out = {}
    for m, c in expr.terms.items():
        sign = 1
        for (name, i), e in m:
            if name == bundle and (i * e) % 2:
                sign = -sign
        out[m] = c * sign
    return expr._like(out)


def ahat_duality_check(d: int, rank: int = 2) -> bool:
    """``Ahat(N) = Ahat(N^vee)`` as a Chern-class polynomial and in roots."""
    a = genus_from_series(ahat_series(d), "N", rank, d)
    if dualize(a, "N") != a:
        return False
    roots = [Poly.var(rank, i, d + 1) for i in range(rank)]
    return _root_genus(ahat_series(d), roots) == _root_genus(ahat_series(d), [-r for r in roots])
