"""Formal exterior calculus on ``k[[x_1..x_n, y_1..y_n]]`` with coefficients in ``k[h^+-1, u^+-1]``.

A :class:`FormalForm` stores terms keyed by ``(mono, idx, hexp, uexp)`` where
``mono`` is an exponent vector over the ``2n`` coordinates ``x_1..x_n,
y_1..y_n`` and ``idx`` is a strictly increasing tuple of differential indices
(``dx_i`` is index ``i``, ``dy_i`` is index ``n + i``).  A :class:`PolyVec`
uses the same layout for polyvector fields, ``idx`` naming ``d/dz`` factors.

Contraction by a multivector is evaluation, ``i_{X ^ Y} = i_Y i_X``.  The
bivector is ``pi = sum d/dy_i ^ d/dx_i`` so that ``pi(df, dg) = {f, g}`` with
``{y_i, x_j} = delta_ij``; evaluated on ``omega = sum dx_i ^ dy_i`` it gives
``i_pi(omega) = -n``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping

from .poly import Poly
from .scalars import HUSeries, as_fraction, parse_fraction

__all__ = [
    "DimensionMismatch",
    "FormalForm",
    "NonNilpotentField",
    "NotClosed",
    "PolyVec",
    "ZeroWeight",
    "alpha_form",
    "contract",
    "contract_pi",
    "d_de_rham",
    "euler_field",
    "euler_primitive",
    "ham_field",
    "hodge_homotopy_phi",
    "lie_derivative",
    "lie_derivative_pi",
    "omega_form",
    "op_exp_contract_pi",
    "op_exp_wedge",
    "pi_bivector",
    "pullback_exp",
    "regrade_h",
    "regrade_u",
    "sympl_star",
    "wedge",
]


class DimensionMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class ZeroWeight(ValueError):
    pass


class NonNilpotentField(ValueError):
    pass


FKey = tuple[tuple[int, ...], tuple[int, ...], int, int]


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _merge_sign(i1: tuple[int, ...], i2: tuple[int, ...]):
    """Sign and sorted union of two increasing index tuples, or ``(0, None)`` on overlap."""
    if set(i1) & set(i2):
        return 0, None
    inv = 0
    for a in i1:
        for b in i2:
            if a > b:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(i1 + i2))


class _Graded:
    """Shared sparse storage for forms and polyvectors."""

    __slots__ = ("n", "terms", "dtrunc")
    _names = ("dx", "dy")

    def __init__(self, n: int, terms: Mapping[FKey, object] | None = None, dtrunc: int | None = None):
        self.n = n
        self.dtrunc = dtrunc
        clean: dict[FKey, Fraction] = {}
        for (mono, idx, he, ue), c in (terms or {}).items():
            if not isinstance(c, Fraction):
                c = as_fraction(c)
            if not c:
                continue
            mono = tuple(mono)
            idx = tuple(idx)
            if len(mono) != 2 * n:
                raise DimensionMismatch(f"monomial {mono} needs {2 * n} exponents")
            if list(idx) != sorted(set(idx)) or (idx and (idx[0] < 0 or idx[-1] >= 2 * n)):
                raise ValueError(f"index tuple {idx} must be strictly increasing in 0..{2 * n - 1}")
            if dtrunc is not None and sum(mono) >= dtrunc:
                continue
            key = (mono, idx, he, ue)
            clean[key] = clean.get(key, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    def _new(self, terms, dtrunc="same"):
        return type(self)(self.n, terms, self.dtrunc if dtrunc == "same" else dtrunc)

    @classmethod
    def zero(cls, n, dtrunc=None):
        return cls(n, {}, dtrunc)

    @classmethod
    def scalar(cls, n, c=1, hexp=0, uexp=0, dtrunc=None):
        return cls(n, {((0,) * (2 * n), (), hexp, uexp): c}, dtrunc)

    @classmethod
    def basis(cls, n, mono, idx, coef=1, hexp=0, uexp=0, dtrunc=None):
        idx = list(idx)
        sign = 1
        for i in range(len(idx)):
            for j in range(len(idx) - 1 - i):
                if idx[j] > idx[j + 1]:
                    idx[j], idx[j + 1] = idx[j + 1], idx[j]
                    sign = -sign
                elif idx[j] == idx[j + 1]:
                    return cls.zero(n, dtrunc)
        return cls(n, {(tuple(mono), tuple(idx), hexp, uexp): as_fraction(coef) * sign}, dtrunc)

    @classmethod
    def from_poly(cls, p: Poly, n: int, dtrunc=None):
        return cls(n, {(m, (), 0, 0): c for m, c in p.terms.items()}, dtrunc)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"n={self.n} vs n={other.n}")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return self._new(t, _min_trunc(self.dtrunc, other.dtrunc))

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, hexp=0, uexp=0):
        c = as_fraction(c)
        return self._new({(m, i, h + hexp, u + uexp): v * c for (m, i, h, u), v in self.terms.items()})

    def mul_series(self, s: HUSeries):
        out: dict[FKey, Fraction] = {}
        for (m, i, h, u), v in self.terms.items():
            for (sh, su), c in s.items():
                k = (m, i, h + sh, u + su)
                out[k] = out.get(k, 0) + v * c
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, HUSeries):
            return self.mul_series(other)
        return self.scale(other)

    __rmul__ = __mul__

    def with_trunc(self, dtrunc):
        return self._new(self.terms, _min_trunc(self.dtrunc, dtrunc))

    def __eq__(self, other):
        if type(other) is not type(self) or other.n != self.n:
            return NotImplemented
        t = _min_trunc(self.dtrunc, other.dtrunc)
        return self.with_trunc(t).terms == other.with_trunc(t).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree_part(self, i: int):
        return self._new({k: v for k, v in self.terms.items() if len(k[1]) == i})

    def coef_degree_part(self, k: int):
        return self._new({key: v for key, v in self.terms.items() if sum(key[0]) == k})

    def form_degrees(self) -> set[int]:
        return {len(k[1]) for k in self.terms}

    def coef_degrees(self) -> set[int]:
        return {sum(k[0]) for k in self.terms}

    def coefficient(self, idx) -> Poly:
        """Coefficient of ``idx`` at ``h^0 u^0`` as a commutative polynomial."""
        idx = tuple(idx)
        return Poly(
            2 * self.n,
            {m: v for (m, i, h, u), v in self.terms.items() if i == idx and h == 0 and u == 0},
            self.dtrunc,
        )

    def _var_name(self, k):
        n = self.n
        return ("x" if k < n else "y") + str(k % n + 1)

    def _idx_name(self, k):
        n = self.n
        return self._names[0 if k < n else 1] + str(k % n + 1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, i, h, u), v in sorted(self.terms.items()):
            f = [self._var_name(k) + (f"^{e}" if e > 1 else "") for k, e in enumerate(m) if e]
            if h:
                f.append(f"h^{h}")
            if u:
                f.append(f"u^{u}")
            f += [self._idx_name(k) for k in i]
            parts.append(f"{v}" + ("*" + "*".join(f) if f else ""))
        return " + ".join(parts)

    def to_json(self) -> dict:
        grouped: dict = {}
        for (m, i, h, u), v in self.terms.items():
            grouped.setdefault((m, i), {})[(h, u)] = v
        terms = []
        for (m, i) in sorted(grouped):
            terms.append(
                {
                    "mono": list(m),
                    "idx": [self._idx_name(k) for k in i],
                    "coef": HUSeries(grouped[(m, i)]).to_json(),
                }
            )
        return {"n": self.n, "dtrunc": self.dtrunc, "terms": terms}

    @classmethod
    def from_json(cls, data: dict):
        n = int(data["n"])
        terms: dict[FKey, Fraction] = {}
        out = cls(n, {}, data.get("dtrunc"))
        for t in data["terms"]:
            idx = []
            for name in t["idx"]:
                prefix = name.rstrip("0123456789")
                num = int(name[len(prefix):]) - 1
                if prefix == cls._names[0]:
                    idx.append(num)
                elif prefix == cls._names[1]:
                    idx.append(n + num)
                else:
                    raise ValueError(f"unknown index name {name!r}")
            coef = t["coef"]
            if isinstance(coef, (str, int)):
                series = {(0, 0): parse_fraction(str(coef))}
            else:
                series = dict(HUSeries.from_json(coef).items())
            for (h, u), c in series.items():
                out = out + cls.basis(n, t["mono"], idx, c, h, u, data.get("dtrunc"))
        return out


class FormalForm(_Graded):
    _names = ("dx", "dy")


class PolyVec(_Graded):
    _names = ("dX", "dY")


# ---------------------------------------------------------------------------
# standard objects


def _unit(n, k):
    m = [0] * (2 * n)
    m[k] = 1
    return tuple(m)


def omega_form(n: int) -> FormalForm:
    """``omega = sum dx_i ^ dy_i``."""
    z = (0,) * (2 * n)
    return FormalForm(n, {(z, (i, n + i), 0, 0): 1 for i in range(n)})


def alpha_form(n: int) -> FormalForm:
    """``alpha = 1/2 sum (x_i dy_i - y_i dx_i)``, a primitive of omega."""
    t = {}
    for i in range(n):
        t[(_unit(n, i), (n + i,), 0, 0)] = Fraction(1, 2)
        t[(_unit(n, n + i), (i,), 0, 0)] = Fraction(-1, 2)
    return FormalForm(n, t)


def pi_bivector(n: int) -> PolyVec:
    """``pi = sum d/dy_i ^ d/dx_i`` (stored sorted, hence with coefficient -1)."""
    z = (0,) * (2 * n)
    return PolyVec(n, {(z, (i, n + i), 0, 0): -1 for i in range(n)})


def euler_field(n: int) -> PolyVec:
    return PolyVec(n, {(_unit(n, k), (k,), 0, 0): 1 for k in range(2 * n)})


# ---------------------------------------------------------------------------
# operators


def wedge(a: FormalForm, b: FormalForm) -> FormalForm:
    a._check(b)
    tr = _min_trunc(a.dtrunc, b.dtrunc)
    out: dict[FKey, Fraction] = {}
    for (m1, i1, h1, u1), v1 in a.terms.items():
        for (m2, i2, h2, u2), v2 in b.terms.items():
            sign, idx = _merge_sign(i1, i2)
            if not sign:
                continue
            m = tuple(p + q for p, q in zip(m1, m2))
            if tr is not None and sum(m) >= tr:
                continue
            k = (m, idx, h1 + h2, u1 + u2)
            out[k] = out.get(k, 0) + sign * v1 * v2
    return type(a)(a.n, out, tr)


def d_de_rham(a: FormalForm) -> FormalForm:
    out: dict[FKey, Fraction] = {}
    for (m, idx, h, u), v in a.terms.items():
        for k, e in enumerate(m):
            if not e or k in idx:
                continue
            mm = list(m)
            mm[k] -= 1
            pos = sum(1 for j in idx if j < k)
            new_idx = tuple(sorted(idx + (k,)))
            key = (tuple(mm), new_idx, h, u)
            out[key] = out.get(key, 0) + (-1) ** pos * e * v
    return FormalForm(a.n, out, None if a.dtrunc is None else a.dtrunc - 1)


def _contract_index(k: int, m, idx, h, u, v, out):
    if k not in idx:
        return
    pos = idx.index(k)
    key = (m, idx[:pos] + idx[pos + 1:], h, u)
    out[key] = out.get(key, 0) + (-1) ** pos * v


def contract(vec: PolyVec, a: FormalForm) -> FormalForm:
    """Interior product; ``X_1 ^ .. ^ X_m`` contracts ``X_1`` first (evaluation order)."""
    if vec.n != a.n:
        raise DimensionMismatch(f"n={vec.n} vs n={a.n}")
    tr = _min_trunc(a.dtrunc, vec.dtrunc)
    out: dict[FKey, Fraction] = {}
    for (mv, iv, hv, uv), cv in vec.terms.items():
        cur = {k: v for k, v in a.terms.items()}
        for k in iv:
            nxt: dict[FKey, Fraction] = {}
            for (m, idx, h, u), v in cur.items():
                _contract_index(k, m, idx, h, u, v, nxt)
            cur = nxt
        for (m, idx, h, u), v in cur.items():
            mm = tuple(p + q for p, q in zip(m, mv))
            if tr is not None and sum(mm) >= tr:
                continue
            key = (mm, idx, h + hv, u + uv)
            out[key] = out.get(key, 0) + v * cv
    return FormalForm(a.n, out, tr)


def contract_pi(a: FormalForm) -> FormalForm:
    """``i_pi`` for the standard bivector, computed directly."""
    n = a.n
    out: dict[FKey, Fraction] = {}
    for (m, idx, h, u), v in a.terms.items():
        for i in range(n):
            if i in idx and n + i in idx:
                # (d/dy ^ d/dx) evaluated on dx ^ dy is -1
                p1 = idx.index(i)
                rest = idx[:p1] + idx[p1 + 1:]
                p2 = rest.index(n + i)
                rest2 = rest[:p2] + rest[p2 + 1:]
                key = (m, rest2, h, u)
                out[key] = out.get(key, 0) - (-1) ** (p1 + p2) * v
    return FormalForm(n, out, a.dtrunc)


def lie_derivative_pi(a: FormalForm) -> FormalForm:
    """``L_pi = [d, i_pi] = d i_pi - i_pi d``, the graded commutator of d with an even operator."""
    return d_de_rham(contract_pi(a)) - contract_pi(d_de_rham(a))


def lie_derivative(mu: PolyVec, a: FormalForm) -> FormalForm:
    """Cartan formula ``L_mu = d i_mu + i_mu d`` for a vector field ``mu``."""
    if any(len(k[1]) != 1 for k in mu.terms):
        raise ValueError("Lie derivative needs a vector field")
    raw = FormalForm(a.n, a.terms)
    out = d_de_rham(contract(mu, raw)) + contract(mu, d_de_rham(raw))
    if a.dtrunc is not None and all(sum(k[0]) >= 1 for k in mu.terms):
        # the field does not lower coefficient degree, so the known range survives
        return out.with_trunc(a.dtrunc)
    return out if a.dtrunc is None else out.with_trunc(a.dtrunc - 1)


def _homog_parts(a: _Graded):
    parts: dict[tuple[int, int], dict] = {}
    for key, v in a.terms.items():
        parts.setdefault((sum(key[0]), len(key[1])), {})[key] = v
    return parts


def euler_primitive(b: FormalForm, check: bool = True) -> FormalForm:
    """Primitive ``gamma = i_Eu(b) / (k + i)`` on each part of coefficient degree k, form degree i."""
    if check and not d_de_rham(b).with_trunc(None if b.dtrunc is None else b.dtrunc - 1).is_zero():
        raise NotClosed("euler_primitive needs a closed form")
    eu = euler_field(b.n)
    out = FormalForm.zero(b.n, None if b.dtrunc is None else b.dtrunc + 1)
    for (k, i), terms in _homog_parts(b).items():
        if k + i == 0:
            raise ZeroWeight("constant function has no Euler primitive")
        out = out + contract(eu, FormalForm(b.n, terms)).scale(Fraction(1, k + i))
    return out


def _omega_power(n, k):
    w = omega_form(n)
    out = FormalForm.scalar(n)
    for _ in range(k):
        out = wedge(out, w)
    return out


def op_exp_wedge(c: HUSeries, a: FormalForm) -> FormalForm:
    """``exp(c omega) ^ a``; the series stops at ``omega^(n+1) = 0``."""
    w = omega_form(a.n)
    out = a
    term = a
    for k in range(1, a.n + 1):
        term = wedge(w, term).mul_series(c).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def op_exp_contract_pi(c: HUSeries, a: FormalForm) -> FormalForm:
    """``exp(c i_pi) a``; finite since ``i_pi`` lowers form degree by two."""
    out = a
    term = a
    k = 0
    while True:
        k += 1
        term = contract_pi(term).mul_series(c).scale(Fraction(1, k))
        if term.is_zero():
            return out
        out = out + term


def regrade_u(a: FormalForm) -> FormalForm:
    """``g_u``: multiply an i-form by ``u^-i``."""
    return FormalForm(a.n, {(m, i, h, u - len(i)): v for (m, i, h, u), v in a.terms.items()}, a.dtrunc)


def _pairing_sign(n: int, i: int) -> int:
    return -1 if (i * (i - 1) // 2) % 2 else 1


def sympl_star(a: FormalForm, n: int | None = None) -> FormalForm:
    """Symplectic Hodge star on forms over ``n`` variable pairs.

    Defined by ``beta ^ star(alpha) = eps_i omega^n/n! det(pi(beta_j, alpha_k))``
    for decomposable i-forms, with ``eps_i = (-1)^(i(i-1)/2)``.  This sign
    pattern is the one for which ``g_h`` below satisfies the SL2 identity
    ``exp(-omega/uh) g_h exp(-(u/h) omega) = g_u exp((h/u) i_pi)``.
    For ``n = 1``: ``star(1) = omega`` and ``star(omega) = -1``.
    """
    if n is None:
        n = a.n
    if n != a.n:
        raise DimensionMismatch(f"n={n} vs form over n={a.n}")
    out: dict[FKey, Fraction] = {}
    for (m, idx, h, u), v in a.terms.items():
        for tidx, c in _star_basis(n, idx).items():
            key = (m, tidx, h, u)
            out[key] = out.get(key, 0) + c * v
    return FormalForm(n, out, a.dtrunc)


_STAR_CACHE: dict = {}


def _pair(n, j, k):
    """``pi(dz_j, dz_k)`` with ``pi(dx_i, dy_i) = 1``."""
    if j < n and k == j + n:
        return 1
    if k < n and j == k + n:
        return -1
    return 0


def _det(mat):
    size = len(mat)
    if size == 0:
        return Fraction(1)
    m = [list(map(Fraction, r)) for r in mat]
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            f = m[r][c] / m[c][c]
            if f:
                for cc in range(c, size):
                    m[r][cc] -= f * m[c][cc]
    return det


def _star_basis(n: int, idx: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    key = (n, idx)
    if key in _STAR_CACHE:
        return _STAR_CACHE[key]
    from itertools import combinations

    i = len(idx)
    eps = _pairing_sign(n, i)
    top = tuple(range(2 * n))
    # omega^n / n! = sign_top * dz_0 ^ .. ^ dz_{2n-1}
    top_form = _omega_power(n, n).scale(Fraction(1, factorial(n)))
    top_coef = top_form.terms[((0,) * (2 * n), top, 0, 0)]
    result: dict[tuple[int, ...], Fraction] = {}
    # star(alpha) = sum_T s_T dz_T with |T| = 2n - i; solve using beta = dz_S, |S| = i:
    # dz_S ^ star(alpha) = s_{comp(S)} * sign(S, comp S) * dz_top
    for S in combinations(range(2 * n), i):
        comp = tuple(k for k in top if k not in S)
        sgn, _ = _merge_sign(S, comp)
        pairing = _det([[_pair(n, s, t) for t in idx] for s in S])
        if not pairing:
            continue
        val = Fraction(eps) * top_coef * pairing / sgn
        result[comp] = result.get(comp, 0) + val
    result = {k: v for k, v in result.items() if v}
    _STAR_CACHE[key] = result
    return result


def regrade_h(a: FormalForm, n: int | None = None) -> FormalForm:
    """``g_h``: an i-form ``alpha`` goes to ``h^(i-n) u^(-n) star(alpha)``."""
    if n is None:
        n = a.n
    out = FormalForm.zero(n, a.dtrunc)
    for i in sorted(a.form_degrees()):
        part = sympl_star(a.degree_part(i), n)
        out = out + part.scale(1, i - n, -n)
    return out


def hodge_homotopy_phi(a: FormalForm, n: int | None = None) -> FormalForm:
    """``phi(a) = sum_k alpha ^ omega^k ^ a / ((uh)^(k+1) (k+1)!)``."""
    if n is None:
        n = a.n
    al = alpha_form(n)
    w = omega_form(n)
    out = FormalForm.zero(n, a.dtrunc)
    term = wedge(al, a)
    k = 0
    while not term.is_zero():
        out = out + term.scale(Fraction(1, factorial(k + 1)), -(k + 1), -(k + 1))
        term = wedge(w, term)
        k += 1
    return out


def pullback_exp(mu: PolyVec, a: FormalForm, T: int) -> FormalForm:
    """``exp(L_mu) a`` modulo coefficient degree ``T``."""
    for (m, idx, _, _) in mu.terms:
        if len(idx) != 1:
            raise ValueError("pullback needs a vector field")
        if sum(m) < 2:
            raise NonNilpotentField("vector field coefficients must vanish to second order")
    a = a.with_trunc(T)
    out = a
    term = a
    k = 0
    while True:
        k += 1
        term = lie_derivative(mu, term).with_trunc(T).scale(Fraction(1, k))
        if term.is_zero():
            return out
        out = out + term


def ham_field(f: Poly, pi: PolyVec) -> PolyVec:
    """``X_f = pi(df, .)``; for the standard bivector ``X_f = f_y d/dx - f_x d/dy``."""
    n = pi.n
    if f.nvars != 2 * n:
        raise DimensionMismatch(f"polynomial in {f.nvars} variables, bivector over n={n}")
    out = PolyVec.zero(n)
    for (m, idx, h, u), c in pi.terms.items():
        if len(idx) != 2:
            raise ValueError("ham_field needs a bivector")
        j, k = idx
        # c d_j ^ d_k applied to (df, .) = c (f_j d_k - f_k d_j)
        for src, tgt, sgn in ((j, k, 1), (k, j, -1)):
            df = f.diff(src)
            for fm, fc in df.terms.items():
                mm = tuple(p + q for p, q in zip(fm, m))
                out = out + PolyVec(n, {(mm, (tgt,), h, u): sgn * c * fc})
    return out


def random_form(rng, n: int, max_deg: int, nterms: int, form_degrees: Iterable[int] | None = None,
                coef_range: int = 3) -> FormalForm:
    """Random form with small integer coefficients (test helper)."""
    from itertools import combinations

    degs = list(form_degrees) if form_degrees is not None else list(range(2 * n + 1))
    out = {}
    for _ in range(nterms):
        i = rng.choice(degs)
        idx = tuple(sorted(rng.sample(range(2 * n), i)))
        total = rng.randint(0, max_deg)
        mono = [0] * (2 * n)
        for _ in range(total):
            mono[rng.randrange(2 * n)] += 1
        c = rng.randint(-coef_range, coef_range)
        if c:
            key = (tuple(mono), idx, 0, 0)
            out[key] = out.get(key, 0) + c
    return FormalForm(n, out)


def spanning_forms(n: int, max_deg: int) -> list[FormalForm]:
    """Every monomial form of coefficient degree ``<= max_deg``."""
    from itertools import combinations, combinations_with_replacement

    out = []
    for k in range(max_deg + 1):
        for combo in combinations_with_replacement(range(2 * n), k):
            mono = [0] * (2 * n)
            for c in combo:
                mono[c] += 1
            for i in range(2 * n + 1):
                for idx in combinations(range(2 * n), i):
                    out.append(FormalForm(n, {(tuple(mono), idx, 0, 0): 1}))
    return out


# ---------------------------------------------------------------------------
# operator identities (each returns the pair of sides so callers can compare)

_H_OVER_U = HUSeries({(1, -1): 1})
_U_OVER_H = HUSeries({(-1, 1): 1})
_INV_UH = HUSeries({(-1, -1): 1})


def total_differential(a: FormalForm) -> FormalForm:
    """``h L_pi + u d``."""
    return lie_derivative_pi(a).scale(1, 1, 0) + d_de_rham(a).scale(1, 0, 1)


def intertwine_u_sides(a: FormalForm):
    """``exp((h/u) i_pi)(h L_pi + u d)`` versus ``u d exp((h/u) i_pi)``."""
    lhs = op_exp_contract_pi(_H_OVER_U, total_differential(a))
    rhs = d_de_rham(op_exp_contract_pi(_H_OVER_U, a)).scale(1, 0, 1)
    return lhs, rhs


def intertwine_h_sides(a: FormalForm):
    """``exp(-(u/h) omega)(h L_pi + u d)`` versus ``h L_pi exp(-(u/h) omega)``."""
    lhs = op_exp_wedge(-_U_OVER_H, total_differential(a))
    rhs = lie_derivative_pi(op_exp_wedge(-_U_OVER_H, a)).scale(1, 1, 0)
    return lhs, rhs


def sl2_sides(a: FormalForm, n: int | None = None):
    """``exp(-omega/uh) g_h exp(-(u/h) omega)`` versus ``g_u exp((h/u) i_pi)``."""
    lhs = op_exp_wedge(-_INV_UH, regrade_h(op_exp_wedge(-_U_OVER_H, a), n))
    rhs = regrade_u(op_exp_contract_pi(_H_OVER_U, a))
    return lhs, rhs


def homotopy_phi_sides(a: FormalForm, n: int | None = None):
    """``d phi + phi d`` versus ``exp(omega/uh) - 1``."""
    lhs = d_de_rham(hodge_homotopy_phi(a, n)) + hodge_homotopy_phi(d_de_rham(a), n)
    rhs = op_exp_wedge(_INV_UH, a) - a
    return lhs, rhs


def regrade_u_sides(a: FormalForm):
    """``g_u(u d a)`` versus ``d g_u(a)``."""
    return regrade_u(d_de_rham(a).scale(1, 0, 1)), d_de_rham(regrade_u(a))


def regrade_h_sides(a: FormalForm, n: int | None = None):
    """``g_h(h L_pi a)`` versus ``d g_h(a)``."""
    return regrade_h(lie_derivative_pi(a).scale(1, 1, 0), n), d_de_rham(regrade_h(a, n))
