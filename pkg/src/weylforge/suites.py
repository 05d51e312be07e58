"""Verification suites behind ``weylforge verify``.

Each suite runs a seeded batch of cases and returns a :class:`SuiteResult`
listing one entry per property, with a JSON counterexample on failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import cyclic, darboux, formcalc, genus, liecoh
from .poly import Poly
from .weyl import (
    WeylElement,
    principal_symbol,
    poisson_bracket,
    weyl_commutator,
    weyl_mul,
)


@dataclass
class SuiteParams:
    n: int | None = None
    degree: int | None = None
    seed: int = 0
    count: int | None = None


@dataclass
class PropertyResult:
    name: str
    passed: bool
    cases: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"property": self.name, "pass": self.passed, "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteResult:
    suite: str
    properties: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "properties": [p.to_json() for p in sorted(self.properties, key=lambda p: p.name)],
        }


class _Tracker:
    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.bad = None

    def check(self, ok: bool, witness: Callable[[], dict]):
        self.cases += 1
        if not ok and self.bad is None:
            self.bad = witness()

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, self.bad is None, self.cases, self.bad)


# ---------------------------------------------------------------------------
# random generators shared with the tests


def random_weyl(rng: random.Random, n: int, wtrunc: int | None = 8, nterms: int = 4,
                max_weight: int = 5, bound: int = 3) -> WeylElement:
    terms = {}
    for _ in range(nterms):
        w = rng.randint(0, max_weight)
        c = rng.randint(0, w // 2)
        a, b = [0] * n, [0] * n
        for _ in range(w - 2 * c):
            (a if rng.random() < 0.5 else b)[rng.randrange(n)] += 1
        key = (tuple(a), tuple(b), c)
        terms[key] = terms.get(key, 0) + rng.randint(-bound, bound)
    return WeylElement(n, terms, wtrunc)


# ---------------------------------------------------------------------------
# suites


def suite_weyl_assoc(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    count = p.count or 200
    rel = _Tracker("y1*x1 = x1*y1 + h")
    for n in range(1, (p.n or 3) + 1):
        x, y = WeylElement.x(n, 0), WeylElement.y(n, 0)
        lhs = weyl_mul(y, x)
        rhs = weyl_mul(x, y) + WeylElement.h(n)
        rel.check(lhs == rhs, lambda: {"lhs": lhs.to_json(), "rhs": rhs.to_json()})
    assoc = _Tracker("associativity (weight_trunc 8)")
    for k in range(count):
        n = 1 + k % (p.n or 3)
        a, b, c = (random_weyl(rng, n, 8) for _ in range(3))
        l = weyl_mul(weyl_mul(a, b), c)
        r = weyl_mul(a, weyl_mul(b, c))
        assoc.check(l == r, lambda: {"a": a.to_json(), "b": b.to_json(), "c": c.to_json()})
    return SuiteResult("weyl-assoc", [rel.result(), assoc.result()])


def suite_symbol(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    t = _Tracker("sigma([a,b]/h) = {sigma a, sigma b}")
    for k in range(p.count or 100):
        n = 1 + k % (p.n or 3)
        a, b = random_weyl(rng, n, None), random_weyl(rng, n, None)
        br = weyl_commutator(a, b).div_h()
        lhs = principal_symbol(br)
        rhs = poisson_bracket(principal_symbol(a), principal_symbol(b), n)
        t.check(lhs == rhs, lambda: {"a": a.to_json(), "b": b.to_json()})
    return SuiteResult("symbol", [t.result()])


def _forms(p: SuiteParams):
    ns = [p.n] if p.n else [1, 2]
    deg = 4 if p.degree is None else p.degree
    for n in ns:
        for a in formcalc.spanning_forms(n, deg):
            yield n, a


def _sides_suite(name: str, props: list[tuple[str, Callable]], p: SuiteParams) -> SuiteResult:
    trackers = [_Tracker(label) for label, _ in props]
    for n, a in _forms(p):
        for tr, (_, fn) in zip(trackers, props):
            lhs, rhs = fn(a, n)
            tr.check(lhs == rhs, lambda: {"n": n, "form": a.to_json()})
    return SuiteResult(name, [t.result() for t in trackers])


def suite_hodge_sl2(p: SuiteParams) -> SuiteResult:
    return _sides_suite("hodge-sl2", [("sl2 identity", formcalc.sl2_sides)], p)


def suite_intertwine(p: SuiteParams) -> SuiteResult:
    return _sides_suite(
        "intertwine",
        [
            ("u-side intertwining", lambda a, n: formcalc.intertwine_u_sides(a)),
            ("h-side intertwining", lambda a, n: formcalc.intertwine_h_sides(a)),
        ],
        p,
    )


def suite_homotopy_phi(p: SuiteParams) -> SuiteResult:
    return _sides_suite("homotopy-phi", [("d phi + phi d = exp(omega/uh) - 1", formcalc.homotopy_phi_sides)], p)


def _tab_algebras():
    return [("sl2", liecoh.LieAlgebra.sl2()), ("gl2", liecoh.LieAlgebra.gl2()), ("solvable6", liecoh.LieAlgebra.solvable6())]


def suite_lie_d2(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    t = _Tracker("d_lie o d_lie = 0")
    for name, g in _tab_algebras():
        for k in range(p.count or 10):
            l = k % min(g.dim, 4)
            c = liecoh.Cochain.random(g, l, rng)
            dd = liecoh.d_lie(liecoh.d_lie(c, g), g)
            t.check(dd.is_zero(), lambda: {"algebra": name, "cochain": c.to_json()})
    sl = liecoh.LieAlgebra.sl2()
    ex = _Tracker("sl2: d(H*)(E,F) = -1")
    v = liecoh.d_lie(liecoh.Cochain.dual(sl, 0), sl)((0, 1, 0), (0, 0, 1))
    ex.check(v == (Fraction(-1),), lambda: {"value": [str(x) for x in v]})
    return SuiteResult("lie-d2", [t.result(), ex.result()])


def projection_pair_6d():
    g = liecoh.LieAlgebra.solvable6()
    pr1 = liecoh.projection_matrix(g)
    z = lambda c: (0, 0, 0, 0, 0, Fraction(c))
    pr2 = liecoh.projection_matrix(g, {1: z(3), 4: z(-2)})
    return g, pr1, pr2


def suite_chern_weil_closed(p: SuiteParams) -> SuiteResult:
    closed = _Tracker("rho(S) closed and relative (tabulated)")
    g6, pr1, pr2 = projection_pair_6d()
    zlin = liecoh.linear_poly_from(g6, {5: 1})
    cases = [
        ("sl2", liecoh.LieAlgebra.sl2(), liecoh.projection_matrix(liecoh.LieAlgebra.sl2()),
         liecoh.linear_poly_from(liecoh.LieAlgebra.sl2(), {0: 1})),
    ]
    for k in (1, 2):
        S = liecoh.power_poly(zlin, k)
        cases += [("solvable6/pr1", g6, pr1, S), ("solvable6/pr2", g6, pr2, S)]
    for name, g, pr, S in cases:
        r = liecoh.chern_weil(S, g, pr)
        ok = liecoh.is_relative(r, g) and liecoh.d_lie(r, g).is_zero()
        closed.check(ok, lambda: {"algebra": name, "degree": S.l, "cochain": r.to_json()})
    indep = _Tracker("projection independence (exactness_solve)")
    for k in (1, 2):
        S = liecoh.power_poly(zlin, k)
        diff = liecoh.chern_weil(S, g6, pr1) - liecoh.chern_weil(S, g6, pr2)
        try:
            b = liecoh.exactness_solve(diff, g6)
            ok = liecoh.d_lie(b, g6) == diff and not diff.is_zero()
        except liecoh.NotExact:
            ok = False
        indep.check(ok, lambda: {"degree": k, "difference": diff.to_json()})
    rng = random.Random(p.seed)
    proc = _Tracker("rho(S) closed (procedural g, random arguments)")
    for n, q, e in [(1, 0, 2), (2, 1, 2)]:
        alg = liecoh.WeylLieAlgebra(n, q, e)
        for k in (1, 2):
            if q == 0:
                c = liecoh.Cochain(2 * k, proc=lambda *a, k=k, e=e, n=n: liecoh.tau_dp_component(list(a), k, e, n))
            else:
                c = liecoh.Cochain(2 * k, proc=lambda *a, k=k, alg=alg: liecoh.combined_factor_component(list(a), k, alg))
            for _ in range(p.count or 2):
                args = [alg.random_element(rng) for _ in range(2 * k + 1)]
                v = liecoh.lie_differential_eval(c, args, alg.bracket)
                proc.check(v.is_zero(), lambda: {"n": n, "q": q, "e": e, "k": k, "args": [x.to_json() for x in args]})
    return SuiteResult("chern-weil-closed", [closed.result(), indep.result(), proc.result()])


def suite_c0(p: SuiteParams) -> SuiteResult:
    from .weyl import GElement

    rng = random.Random(p.seed)
    t = _Tracker("pr_0((1/h) sum b_ij x_i y_j) = -1/2 sum b_ii")
    for k in range(p.count or 20):
        q = 1 + k % 2
        n = q + rng.randint(0, 1)
        e = rng.randint(1, 2)
        b = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(q)] for _ in range(q)]
        terms = {}
        for i in range(q):
            for j in range(q):
                a, bb = [0] * n, [0] * n
                a[i] += 1
                bb[j] += 1
                terms[(tuple(a), tuple(bb), -1)] = b[i][j]
        g = GElement.scalar(WeylElement(n, terms, None, -1), e)
        val = liecoh.WeylLieAlgebra(n, q, e).pr0(g)
        want = -sum(b[i][i] for i in range(q)) / 2
        t.check(val == want, lambda: {"b": [[str(v) for v in r] for r in b], "value": val.to_json()})
    return SuiteResult("c0", [t.result()])


def suite_ideal_vanishing(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    alg = liecoh.WeylLieAlgebra(2, 1, 2)
    ahat = _Tracker("Ahat factor vanishes with an argument in (1/h)J")
    comb = _Tracker("ch exp(-c1/2 - c0) vanishes with an argument in (1/h)J")
    for t in range(p.count or 50):
        k = 1 + t % 2
        args = [alg.random_element(rng) for _ in range(2 * k)]
        args[rng.randrange(2 * k)] = alg.random_element(rng, ideal=True)
        v1 = liecoh.ahat_factor_component(args, k, alg)
        v2 = liecoh.combined_factor_component(args, k, alg)
        wit = lambda: {"k": k, "args": [x.to_json() for x in args]}
        ahat.check(v1.is_zero(), wit)
        comb.check(v2.is_zero(), wit)
    return SuiteResult("ideal-vanishing", [ahat.result(), comb.result()])


def suite_cyclic(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    names = ["b^2 = 0", "B^2 = 0", "bB + Bb = 0", "(b+uB)(1) = 0"]
    tr = {k: _Tracker(k) for k in names}
    for label, A in [("gl2", cyclic.FinAlgebra.matrix(2)), ("Q[x]/(x^3)", cyclic.FinAlgebra.truncated_poly(3))]:
        for _ in range(p.count or 100):
            c = cyclic.ChainTensor.random(A, rng)
            b = lambda x: cyclic.hochschild_b(x, A)
            B = lambda x: cyclic.connes_B(x, A)
            wit = lambda: {"algebra": label, "chain": c.to_json()}
            tr["b^2 = 0"].check(b(b(c)).is_zero(), wit)
            tr["B^2 = 0"].check(B(B(c)).is_zero(), wit)
            tr["bB + Bb = 0"].check((b(B(c)) + B(b(c))).is_zero(), wit)
        for variant in ("negative", "periodic"):
            v = cyclic.cyclic_differential(cyclic.ChainTensor.unit(A), A, variant)
            tr["(b+uB)(1) = 0"].check(v.is_zero(), lambda: {"algebra": label, "variant": variant})
    return SuiteResult("cyclic-identities", [t.result() for t in tr.values()])


def suite_grr(p: SuiteParams) -> SuiteResult:
    d = 6 if p.degree is None else p.degree
    grr = _Tracker("grr identity")
    for q in range(1, 4):
        for dd in range(0, d + 1):
            grr.check(genus.grr_identity_check(dd, q), lambda: {"q": q, "d": dd})
    per = _Tracker("G1^2/G2 = exp(-z/2) to degree 10")
    per.check(genus.per_root_identity(max(10, d)), lambda: {"degree": max(10, d)})
    odd = _Tracker("Ahat(N) = Ahat(N^vee) to degree 10")
    odd.check(genus.ahat_duality_check(max(10, d), 2), lambda: {"degree": max(10, d)})
    return SuiteResult("grr-identity", [grr.result(), per.result(), odd.result()])


def suite_darboux(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    n, q, T = (p.n or 2), 1, (p.degree or 5)
    rt = _Tracker("pullback returns omega_0 mod degree T")
    pj = _Tracker("every step preserves J")
    for _ in range(p.count or 20):
        a = darboux.random_closed_perturbation(rng, n, q, T)
        f = darboux.darboux_normalize(a, q, T)
        wit = lambda: {"alpha": a.to_json()}
        rt.check(f.pullback(a) == darboux.omega0(n).with_trunc(T), wit)
        pj.check(all(darboux.preserves_J(m, q) for m in f.steps), wit)
    return SuiteResult("darboux-roundtrip", [rt.result(), pj.result()])


def module_lift_cases(rng: random.Random):
    """Presentations for the module-lift check: random flat ones plus the exp branch ``phi = h x``."""
    from .weyl import MatWeyl

    cases = []
    for e, q, n in [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 2)]:
        V = darboux.random_gauge(rng, n, e, 10)
        cases.append(darboux.presentation_from_gauge(V, q, 4))
    phi = [[[WeylElement(1, {((1,), (0,), 1): 1}, 10)]]]
    cases.append(darboux.QuantModulePresentation(1, 1, 1, phi, 4, 10))
    return cases


def suite_module_lift(p: SuiteParams) -> SuiteResult:
    rng = random.Random(p.seed)
    t = _Tracker("y_s (U u)_i = 0 mod h^T")
    for pres in module_lift_cases(rng):
        U = darboux.quantize_module_generators(pres, check=False)
        ok = all(
            darboux._vanishes_mod(m, pres.T, pres.wtrunc - 2)
            for s in range(pres.q)
            for m in darboux.apply_generators(U, pres, s)
        )
        t.check(ok, lambda: {"presentation": pres.to_json()})
    return SuiteResult("module-lift", [t.result()])


def perturbation_example():
    """Test contraction: ``M = N + C`` with ``N``, ``C`` acyclic, a Heisenberg algebra acting."""

    def mat(dim, entries):
        m = [[0] * dim for _ in range(dim)]
        for (r, c), v in entries.items():
            m[r][c] = v
        return m

    # basis of M: n0 n1 | u v1 w z0 ;  d: n0->n1, u->v1, w->z0
    d = mat(6, {(1, 0): 1, (3, 2): 1, (5, 4): 1})
    T = mat(6, {(3, 4): 1})
    X = mat(6, {(0, 2): 1, (1, 3): 1})
    Z = mat(6, {(1, 4): -1})
    heis = liecoh.LieAlgebra(3, {(0, 1): {2: 1}}, labels=["a", "b", "c"])
    M = liecoh.matrix_complex(heis, d, [T, X, Z])
    N = liecoh.matrix_complex(heis, mat(2, {(1, 0): 1}), [mat(2, {})] * 3)
    f = liecoh.matrix_op([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]])
    g = liecoh.matrix_op([[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]])
    phi = liecoh.matrix_op(mat(6, {(2, 3): -1, (4, 5): -1}))
    ab = liecoh.LieAlgebra(2, {}, labels=["a", "b"])
    M2 = liecoh.matrix_complex(ab, d, [T, T])
    P = liecoh.matrix_op(mat(6, {(0, 0): 1, (1, 1): 1}))
    return {"M": M, "N": N, "f": f, "g": g, "phi": phi, "M2": M2, "P": P}


def suite_perturbation(p: SuiteParams) -> SuiteResult:
    ex = perturbation_example()
    M, N, f, g, phi, M2, P = (ex[k] for k in ("M", "N", "f", "g", "phi", "M2", "P"))
    H = liecoh
    cs = H.spanning_cochains(M)
    length = _Tracker("series length >= 2")
    length.check(H.series_length(M, phi, cs) >= 2 and H.series_length(M2, phi, H.spanning_cochains(M2)) >= 2,
                 lambda: {})
    ft = H.perturb_f_tilde(M, N, f, g, phi)
    chain = _Tracker("f~ is a chain map for d_Lie")
    for c in cs:
        ok = H.hom_equal(H.hom_d_lie(ft(c), N), ft(H.hom_d_lie(c, M)))
        chain.check(ok, lambda: {"cochain": {",".join(map(str, k)): [str(x) for x in v] for k, v in c.items()}})
    pt = H.perturb_phi_tilde(M2, P, phi)
    hom = _Tracker("d phi~ + phi~ d = f_Hom - 1")
    for c in H.spanning_cochains(M2):
        lhs = H.hom_add(H.hom_d_lie(pt(c), M2), pt(H.hom_d_lie(c, M2)))
        rhs = H.hom_add(H.hom_post(c, P), c, -1)
        hom.check(H.hom_equal(lhs, rhs), lambda: {"cochain": {",".join(map(str, k)): [str(x) for x in v] for k, v in c.items()}})
    return SuiteResult("perturbation", [length.result(), chain.result(), hom.result()])


SUITES: dict[str, Callable[[SuiteParams], SuiteResult]] = {
    "weyl-assoc": suite_weyl_assoc,
    "symbol": suite_symbol,
    "hodge-sl2": suite_hodge_sl2,
    "intertwine": suite_intertwine,
    "homotopy-phi": suite_homotopy_phi,
    "lie-d2": suite_lie_d2,
    "chern-weil-closed": suite_chern_weil_closed,
    "c0": suite_c0,
    "ideal-vanishing": suite_ideal_vanishing,
    "cyclic-identities": suite_cyclic,
    "grr-identity": suite_grr,
    "darboux-roundtrip": suite_darboux,
    "module-lift": suite_module_lift,
    "perturbation": suite_perturbation,
}


def run_suite(name: str, params: SuiteParams | None = None) -> list[SuiteResult]:
    params = params or SuiteParams()
    if name == "all":
        return [fn(params) for _, fn in sorted(SUITES.items())]
    return [SUITES[name](params)]
