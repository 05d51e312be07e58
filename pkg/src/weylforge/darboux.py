"""Constructive normal forms: linear and formal Darboux adapted to ``J = (y_1..y_q)``,
and the lift of module generators killing ``y_1..y_q`` to higher order in ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .formcalc import (
    FormalForm,
    NotClosed,
    PolyVec,
    d_de_rham,
    euler_primitive,
    pullback_exp,
)
from .poly import Poly
from .weyl import (
    MatWeyl,
    ModuleElement,
    WeylElement,
    act_presented,
    from_symbol,
    principal_symbol,
    weyl_mul,
)

__all__ = [
    "DegenerateForm",
    "FormalDiffeo",
    "IdealCompatibilityFailure",
    "IntegrabilityFailure",
    "NonStandardConstantPart",
    "NotCoisotropic",
    "QuantModulePresentation",
    "darboux_normalize",
    "linear_darboux",
    "quantize_module_generators",
    "solve_gradient_system",
]


class DegenerateForm(ValueError):
    pass


class NotCoisotropic(ValueError):
    pass


class NonStandardConstantPart(ValueError):
    pass


class IdealCompatibilityFailure(ValueError):
    pass


class IntegrabilityFailure(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear normalization


def standard_matrix(n: int) -> linalg.Matrix:
    """Gram matrix of ``omega = sum dx_i ^ dy_i`` in the order ``x_1..x_n, y_1..y_n``."""
    a = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        a[i][n + i] = Fraction(1)
        a[n + i][i] = Fraction(-1)
    return a


def _form(a, u, v):
    return sum((u[i] * a[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if a[i][j]), Fraction(0))


def linear_darboux(A: Sequence[Sequence], q: int = 0) -> linalg.Matrix:
    """Change of basis ``P`` with ``P^T A P = standard`` that keeps ``W = {y_1 = .. = y_q = 0}``.

    The columns are ``E_1..E_n, F_1..F_n`` with ``E_1..E_q`` spanning the
    A-orthogonal of ``W`` and every ``E_i`` and ``F_{>q}`` inside ``W``.
    """
    A = [[Fraction(v) for v in r] for r in A]
    dim = len(A)
    if dim % 2 or any(len(r) != dim for r in A):
        raise ValueError("A must be a square matrix of even size")
    n = dim // 2
    for i in range(dim):
        for j in range(dim):
            if A[i][j] != -A[j][i]:
                raise ValueError("A must be antisymmetric")
    if linalg.det(A) == 0:
        raise DegenerateForm("the 2-form is degenerate")
    ycols = set(range(n, n + q))
    w_basis = [[Fraction(int(i == k)) for i in range(dim)] for k in range(dim) if k not in ycols]
    # W-orthogonal: v with v^T A w = 0 for all w in W
    rows = [linalg.matvec(linalg.transpose(A), w) for w in w_basis]
    perp = linalg.nullspace(rows, dim)
    for v in perp:
        if any(v[k] for k in ycols):
            raise NotCoisotropic("the orthogonal of the coordinate subspace leaves it")
    E: list[list[Fraction]] = [list(v) for v in perp]
    F: list[list[Fraction]] = []
    # F_i dual to E_i, orthogonal to the other E_j
    for i in range(q):
        rows = [linalg.matvec(linalg.transpose(A), E[j]) for j in range(q)]
        rhs = [Fraction(int(i == j)) for j in range(q)]
        sol = linalg.solve(rows, rhs, dim)
        F.append(sol)
    # make span(F) isotropic: F_i += sum_j c_ij E_j with c_ij = -1/2 A(F_i, F_j)
    G = [[_form(A, F[i], F[j]) for j in range(q)] for i in range(q)]
    F = [
        [F[i][k] - sum((G[i][j] / 2 * E[j][k] for j in range(q)), Fraction(0)) for k in range(dim)]
        for i in range(q)
    ]
    # symplectic complement of span(E_1..q, F_1..q), then Gram-Schmidt inside it
    fixed = E + F
    rows = [linalg.matvec(linalg.transpose(A), v) for v in fixed]
    rest = linalg.nullspace(rows, dim) if fixed else linalg.identity(dim)
    pool = [list(v) for v in rest]
    E_rest, F_rest = [], []
    while pool:
        e = pool.pop(0)
        partner = next((k for k, v in enumerate(pool) if _form(A, e, v)), None)
        if partner is None:
            raise DegenerateForm("symplectic complement is degenerate")
        f = pool.pop(partner)
        c = _form(A, e, f)
        f = [x / c for x in f]
        new_pool = []
        for v in pool:
            # v -= A(v, f) e - A(v, e) f   (makes v orthogonal to e and f)
            a_vf = _form(A, v, f)
            a_ve = _form(A, v, e)
            new_pool.append([v[k] - a_vf * e[k] + a_ve * f[k] for k in range(dim)])
        pool = new_pool
        E_rest.append(e)
        F_rest.append(f)
    cols = E + E_rest + F + F_rest
    P = linalg.transpose(cols)
    check = linalg.matmul(linalg.matmul(linalg.transpose(P), A), P)
    if check != standard_matrix(n):
        raise DegenerateForm("internal: symplectic basis check failed")
    return P


# ---------------------------------------------------------------------------
# gradient systems


def _xq_degree(m, q):
    return sum(m[:q])


def solve_gradient_system(F: Sequence[Sequence[Sequence[Poly]]], q: int) -> list[list[Poly]]:
    """Matrix ``G`` with ``dG/dx_s = F_s`` (``s < q``) and no ``x_{<=q}``-free terms.

    ``F[s]`` is a square matrix of polynomials in the ``2n`` variables
    ``x_1..x_n, y_1..y_n``; the variables ``y_1..y_q`` must not occur.  The
    radial primitive ``sum_s x_s F_s`` divided monomial-wise by its
    ``x_{<=q}``-degree is returned after checking both integrability and the
    result.
    """
    if len(F) != q:
        raise ValueError(f"expected {q} matrices, got {len(F)}")
    if q == 0:
        raise ValueError("gradient system needs q >= 1")
    e = len(F[0])
    nv = F[0][0][0].nvars
    n = nv // 2
    for s in range(q):
        for i in range(e):
            for j in range(e):
                for m in F[s][i][j].terms:
                    if any(m[n + r] for r in range(q)):
                        raise ValueError("y_1..y_q may not occur in a gradient system")
    for s in range(q):
        for t in range(s + 1, q):
            for i in range(e):
                for j in range(e):
                    if F[s][i][j].diff(t) != F[t][i][j].diff(s):
                        raise IntegrabilityFailure(f"dF_{s + 1}/dx_{t + 1} != dF_{t + 1}/dx_{s + 1}")
    G = []
    for i in range(e):
        row = []
        for j in range(e):
            radial = F[0][i][j].mul_var(0)
            for s in range(1, q):
                radial = radial + F[s][i][j].mul_var(s)
            terms = {m: c / _xq_degree(m, q) for m, c in radial.terms.items()}
            g = Poly(nv, terms, radial.trunc)
            for s in range(q):
                if g.diff(s) != F[s][i][j]:
                    raise IntegrabilityFailure("gradient system has no solution")
            row.append(g)
        G.append(row)
    return G


# ---------------------------------------------------------------------------
# formal Darboux


@dataclass
class FormalDiffeo:
    """Composite ``exp(mu_1)`` then ``exp(mu_2)`` ...; pulling a form back applies
    ``exp(-L_mu_1)`` first."""

    n: int
    T: int
    steps: list[PolyVec] = field(default_factory=list)

    def pullback(self, a: FormalForm) -> FormalForm:
        out = a.with_trunc(self.T)
        for mu in self.steps:
            if not mu.is_zero():
                out = pullback_exp(-mu, out, self.T)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "T": self.T, "steps": [m.to_json() for m in self.steps]}


def omega0(n: int) -> FormalForm:
    z = (0,) * (2 * n)
    return FormalForm(n, {(z, (i, n + i), 0, 0): 1 for i in range(n)})


def _in_J(p_mono, n, q) -> bool:
    return any(p_mono[n + r] for r in range(q))


def check_ideal_compatible(alpha: FormalForm, q: int) -> bool:
    n = alpha.n
    for (m, idx, _, _), _ in alpha.terms.items():
        if len(idx) == 2 and idx[0] < q and idx[1] < q and not _in_J(m, n, q):
            return False
    return True


def preserves_J(mu: PolyVec, q: int) -> bool:
    """``mu(y_r)`` lies in ``(y_1..y_q)`` for every ``r <= q``."""
    n = mu.n
    for (m, idx, _, _), _ in mu.terms.items():
        if idx[0] >= n and idx[0] - n < q and not _in_J(m, n, q):
            return False
    return True


def dual_field(gamma: FormalForm) -> PolyVec:
    """The vector field ``v`` with ``i_v omega_0 = gamma``: ``P dx + Q dy -> Q d/dx - P d/dy``."""
    n = gamma.n
    out = {}
    for (m, idx, h, u), c in gamma.terms.items():
        if len(idx) != 1:
            raise ValueError("dual_field needs a 1-form")
        k = idx[0]
        if k < n:
            key = (m, (n + k,), h, u)
            out[key] = out.get(key, 0) - c
        else:
            key = (m, (k - n,), h, u)
            out[key] = out.get(key, 0) + c
    return PolyVec(n, out, gamma.dtrunc)


def _adapted_primitive(beta: FormalForm, q: int) -> FormalForm:
    """Primitive of ``beta`` whose ``dx_r`` coefficients (``r <= q``) lie in ``J``.

    Start from the Euler primitive and subtract ``df`` where ``f`` solves the
    gradient system ``df/dx_r = gamma_r`` restricted to ``y_1 = .. = y_q = 0``.
    The system is integrable because ``beta``'s ``dx_r ^ dx_s`` coefficients
    vanish there.
    """
    n = beta.n
    gamma = euler_primitive(beta, check=False)
    if q == 0:
        return gamma
    ycut = [n + r for r in range(q)]
    Fs = []
    for r in range(q):
        coef = gamma.coefficient((r,)).with_trunc(None)
        coef = Poly(2 * n, coef.terms).subs_zero(ycut)
        Fs.append([[coef]])
    if all(f[0][0].is_zero() for f in Fs):
        return gamma
    try:
        f = solve_gradient_system(Fs, q)[0][0]
    except IntegrabilityFailure as exc:
        raise IdealCompatibilityFailure(
            "dx_r ^ dx_s coefficients do not vanish on y_1 = .. = y_q = 0"
        ) from exc
    return gamma - d_de_rham(FormalForm.from_poly(f, n))


def darboux_normalize(alpha: FormalForm, q: int, T: int) -> FormalDiffeo:
    """Formal Darboux diffeomorphism carrying ``alpha`` to ``omega_0`` modulo degree ``T``.

    Pass ``k = 1..T-1`` removes the coefficient-degree-``k`` part ``beta_k``
    with a field of degree ``k + 1`` dual to a primitive of ``beta_k``, always
    recomputing the pullback of the original ``alpha``.  Passes with nothing
    to remove add no step, so a standard ``alpha`` gives an empty list.
    """
    n = alpha.n
    if any(len(idx) != 2 or h or u for (_, idx, h, u) in alpha.terms):
        raise ValueError("alpha must be a 2-form with plain rational coefficients")
    alpha = alpha.with_trunc(T)
    if not d_de_rham(alpha).is_zero():
        raise NotClosed("alpha is not closed")
    if alpha.coef_degree_part(0) != omega0(n):
        raise NonStandardConstantPart("constant part differs from sum dx_i ^ dy_i; use linear_darboux")
    if not check_ideal_compatible(alpha, q):
        raise IdealCompatibilityFailure("dx_r ^ dx_s coefficient outside J")
    diffeo = FormalDiffeo(n, T, [])
    for k in range(1, T):
        current = diffeo.pullback(alpha)
        if not check_ideal_compatible(current, q):
            raise IdealCompatibilityFailure(f"pass {k}: dx_r ^ dx_s coefficient outside J")
        beta = current.coef_degree_part(k)
        if beta.is_zero():
            continue
        gamma = _adapted_primitive(FormalForm(n, beta.terms), q)
        mu = dual_field(gamma)
        if not preserves_J(mu, q):
            raise IdealCompatibilityFailure(f"pass {k}: step does not preserve J")
        diffeo.steps.append(mu)
    final = diffeo.pullback(alpha)
    if final != omega0(n).with_trunc(T):
        raise ArithmeticError("internal: Darboux pullback did not reach omega_0")
    return diffeo


# ---------------------------------------------------------------------------
# module generators


@dataclass
class QuantModulePresentation:
    """``y_s u_i = sum_j phi[s][i][j] u_j`` for ``s < q``; entries are Weyl elements
    free of ``y_1..y_q`` and divisible by ``h``.  ``T`` bounds the h-order,
    ``wtrunc`` the weight to which every series is known."""

    e: int
    n: int
    q: int
    phi: list[list[list[WeylElement]]]
    T: int
    wtrunc: int

    def validate(self):
        if len(self.phi) != self.q:
            raise ValueError("need one matrix per s <= q")
        for mat in self.phi:
            if len(mat) != self.e or any(len(r) != self.e for r in mat):
                raise ValueError("phi matrices must be e x e")
            for r in mat:
                for w in r:
                    for (_, b, c) in w.terms:
                        if c < 1:
                            raise ValueError("phi must vanish modulo h")
                        if any(b[s] for s in range(self.q)):
                            raise ValueError("phi may not contain y_1..y_q")

    def act(self, d: WeylElement, m: ModuleElement) -> ModuleElement:
        return act_presented(d, m, self.phi)

    def is_flat(self) -> bool:
        n, q, e = self.n, self.q, self.e
        for i in range(e):
            g = ModuleElement.generator(n, q, e, i, self.wtrunc)
            for s in range(q):
                for t in range(s + 1, q):
                    ys, yt = WeylElement.y(n, s), WeylElement.y(n, t)
                    a = self.act(yt, self.act(ys, g))
                    b = self.act(ys, self.act(yt, g))
                    if not _vanishes_mod(a - b, self.T, self.wtrunc - 2):
                        return False
        return True

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "n": self.n,
            "q": self.q,
            "T": self.T,
            "wtrunc": self.wtrunc,
            "phi": [[[w.term_list() for w in r] for r in mat] for mat in self.phi],
        }


def _vanishes_mod(m: ModuleElement, T: int, wknown: int) -> bool:
    for comp in m.comps:
        for (a, b, c), v in comp.terms.items():
            if c < T and sum(a) + sum(b) + 2 * c < wknown:
                return False
    return True


def apply_generators(U: MatWeyl, pres: QuantModulePresentation, s: int) -> list[ModuleElement]:
    """``y_s`` acting on each new generator ``u'_i = sum_j U_ij u_j``."""
    out = []
    for i in range(pres.e):
        m = ModuleElement(list(U.rows[i]), pres.q)
        out.append(pres.act(WeylElement.y(pres.n, s), m))
    return out


def _mat_poly_mul(a, b):
    e = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(e)), Poly(a[0][0].nvars, {}, a[0][0].trunc)) for j in range(e)] for i in range(e)]


def _mat_poly_inverse(a, trunc):
    """Inverse of ``I + N`` with ``N`` vanishing at the origin, by the Neumann series."""
    e = len(a)
    nv = a[0][0].nvars
    ident = [[Poly.const(nv, int(i == j), trunc) for j in range(e)] for i in range(e)]
    N = [[(a[i][j] - ident[i][j]).with_trunc(trunc) for j in range(e)] for i in range(e)]
    for r in N:
        for p in r:
            if p.constant_term():
                raise ValueError("matrix must reduce to the identity at the origin")
    out = ident
    term = ident
    for _ in range(trunc):
        term = [[-x for x in r] for r in _mat_poly_mul(term, N)]
        if all(x.is_zero() for r in term for x in r):
            break
        out = [[out[i][j] + term[i][j] for j in range(e)] for i in range(e)]
    return out


def _poly_exp(p: Poly, trunc: int) -> Poly:
    if p.constant_term():
        raise ValueError("exp needs a series without constant term")
    out = Poly.const(p.nvars, 1, trunc)
    term = Poly.const(p.nvars, 1, trunc)
    for k in range(1, trunc + 1):
        term = (term * p).with_trunc(trunc) * Fraction(1, k)
        if term.is_zero():
            break
        out = out + term
    return out


def _residual_coeffs(U: MatWeyl, pres: QuantModulePresentation, l: int):
    """h^l coefficient of ``y_s u'_i`` in the old basis, as polynomial matrices."""
    n, e = pres.n, pres.e
    res = []
    for s in range(pres.q):
        acts = apply_generators(U, pres, s)
        mat = []
        for i in range(e):
            row = []
            for j in range(e):
                comp = acts[i].comps[j]
                lower = [k for k in comp.terms if k[2] < l and sum(k[0]) + sum(k[1]) + 2 * k[2] < pres.wtrunc]
                if lower:
                    raise ArithmeticError(f"internal: order below h^{l} survived")
                terms = {tuple(a) + tuple(b): v for (a, b, c), v in comp.terms.items() if c == l}
                row.append(Poly(2 * n, terms, pres.wtrunc - 2 * l))
            mat.append(row)
        res.append(mat)
    return res


def _solve_flow(F, q, trunc):
    """Matrix ``Phi`` with ``dPhi/dx_s = -Phi F_s`` and ``Phi = I`` where ``x_1..x_q = 0``.

    Integrates one direction at a time; flatness makes the result independent
    of the order.
    """
    e = len(F[0])
    nv = F[0][0][0].nvars
    phi = [[Poly.const(nv, int(i == j), trunc) for j in range(e)] for i in range(e)]
    for s in range(q):
        later = list(range(s + 1, q))
        Fs = [[F[s][i][j].subs_zero(later).with_trunc(trunc) for j in range(e)] for i in range(e)]
        init = phi
        cur = init
        for _ in range(trunc + 1):
            prod = _mat_poly_mul(cur, Fs)
            new = [[(init[i][j] - _integrate(prod[i][j], s)).with_trunc(trunc) for j in range(e)] for i in range(e)]
            if new == cur:
                break
            cur = new
        phi = cur
    return phi


def _integrate(p: Poly, s: int) -> Poly:
    terms = {}
    for m, c in p.terms.items():
        mm = list(m)
        mm[s] += 1
        terms[tuple(mm)] = c / mm[s]
    return Poly(p.nvars, terms, None if p.trunc is None else p.trunc + 1)


def quantize_module_generators(pres: QuantModulePresentation, check: bool = True) -> MatWeyl:
    """Matrix ``U`` over ``D'`` with ``y_s (U u)_i = 0 mod h^T`` for every ``s <= q``.

    ``U`` is the identity at the origin; its h-free part is the gauge found at
    order one and is not the identity in general (``phi = h x`` gives
    ``exp(-x^2/2)``).

    Order 1 solves ``dPhi/dx_s = -Phi F_s`` for the h-free gauge (for ``e = 1``
    this is ``Phi = exp(-H)`` with ``dH/dx_s = F_s``); order ``l >= 2`` solves
    the gradient system ``dG/dx_s = -F_s`` for the residual expressed in the
    current generators and left-multiplies by ``I + h^(l-1) G``.
    """
    pres.validate()
    n, q, e, W = pres.n, pres.q, pres.e, pres.wtrunc
    if q == 0:
        return MatWeyl.from_constant(linalg.identity(e), n, W)
    U = MatWeyl.from_constant(linalg.identity(e), n, W)
    for l in range(1, pres.T):
        res = _residual_coeffs(U, pres, l)
        if all(p.is_zero() for mat in res for r in mat for p in r):
            continue
        if l == 1:
            trunc = W
            if e == 1:
                H = solve_gradient_system([[[f[0][0]]] for f in res], q)[0][0]
                gauge = [[_poly_exp(-H.with_trunc(trunc), trunc)]]
            else:
                gauge = _solve_flow(res, q, trunc)
            G = MatWeyl([[from_symbol(gauge[i][j], n, W) for j in range(e)] for i in range(e)])
            U = G @ U
        else:
            U0 = [[principal_symbol(U.rows[i][j]).with_trunc(W) for j in range(e)] for i in range(e)]
            U0inv = _mat_poly_inverse(U0, W)
            Fs = [_mat_poly_mul(mat, U0inv) for mat in res]
            G = solve_gradient_system(Fs, q)
            corr = MatWeyl(
                [
                    [
                        (WeylElement.const(n, int(i == j), W) - from_symbol(G[i][j], n, W).shift_h(l - 1).with_trunc(W))
                        for j in range(e)
                    ]
                    for i in range(e)
                ]
            )
            U = corr @ U
        U = U.with_trunc(W)
    if check:
        for s in range(q):
            for m in apply_generators(U, pres, s):
                if not _vanishes_mod(m, pres.T, W):
                    raise IntegrabilityFailure("lift failed; presentation is not flat")
    return U


def presentation_from_gauge(V: MatWeyl, q: int, T: int) -> QuantModulePresentation:
    """Presentation of the standard module in the generators ``w = V u``.

    ``y_s w_i = h (dV/dx_s V^-1)_ij w_j``; every presentation arising this
    way is flat, which makes it a convenient source of test inputs.
    """
    n, e = V.n, V.e
    W = V.wtrunc
    Vinv = weyl_matrix_inverse(V)
    phi = []
    for s in range(q):
        dV = V.map(lambda w: _h_dx(w, s))
        prod = dV @ Vinv
        phi.append([[prod.rows[i][j].with_trunc(W) for j in range(e)] for i in range(e)])
    return QuantModulePresentation(e, n, q, phi, T, W)


def _h_dx(w: WeylElement, s: int) -> WeylElement:
    out = {}
    for (a, b, c), v in w.terms.items():
        if a[s]:
            aa = list(a)
            aa[s] -= 1
            key = (tuple(aa), b, c + 1)
            out[key] = out.get(key, 0) + v * a[s]
    return WeylElement(w.n, out, w.wtrunc, w.cmin)


def weyl_matrix_inverse(V: MatWeyl) -> MatWeyl:
    """Inverse of a matrix whose constant part is invertible, by a Neumann series in weight."""
    n, e, W = V.n, V.e, V.wtrunc
    zero_key = ((0,) * n, (0,) * n, 0)
    C = [[V.rows[i][j].terms.get(zero_key, Fraction(0)) for j in range(e)] for i in range(e)]
    Cinv = linalg.inverse(C)
    Cinv_m = MatWeyl.from_constant(Cinv, n, W)
    ident = MatWeyl.from_constant(linalg.identity(e), n, W)
    N = (Cinv_m @ V) - ident
    out = ident
    term = ident
    for _ in range(W + 1):
        term = -(term @ N)
        if term.is_zero():
            break
        out = out + term
    return out @ Cinv_m


def random_closed_perturbation(rng, n: int, q: int, T: int, nterms: int = 6, bound: int = 3) -> FormalForm:
    """``omega_0 + d gamma`` with random polynomial ``gamma`` of coefficient degree ``2..T``.

    The ``dx_r`` coefficients of ``gamma`` (``r < q``) are kept inside ``J``, which makes
    the result ideal-compatible.
    """
    terms = {}
    for _ in range(nterms):
        k = rng.randrange(2 * n)
        deg = rng.randint(2, T)
        mono = [0] * (2 * n)
        for _ in range(deg):
            mono[rng.randrange(2 * n)] += 1
        if k < q and not any(mono[n + r] for r in range(q)):
            j = rng.randrange(2 * n)
            while mono[j] == 0:
                j = rng.randrange(2 * n)
            mono[j] -= 1
            mono[n + rng.randrange(q)] += 1
        key = (tuple(mono), (k,), 0, 0)
        terms[key] = terms.get(key, 0) + rng.randint(-bound, bound)
    gamma = FormalForm(n, terms)
    return (omega0(n) + d_de_rham(gamma)).with_trunc(T)


def random_gauge(rng, n: int, e: int, wtrunc: int, nterms: int = 3, bound: int = 2) -> MatWeyl:
    """``I + (random entries free of y, with positive weight)`` as a test gauge."""
    rows = []
    for i in range(e):
        row = []
        for j in range(e):
            t = {}
            if i == j:
                t[((0,) * n, (0,) * n, 0)] = 1
            for _ in range(nterms):
                a = [0] * n
                for _ in range(rng.randint(1, 2)):
                    a[rng.randrange(n)] += 1
                c = rng.randint(0, 1)
                key = (tuple(a), (0,) * n, c)
                t[key] = t.get(key, 0) + rng.randint(-bound, bound)
            row.append(WeylElement(n, t, wtrunc))
        rows.append(row)
    return MatWeyl(rows)
