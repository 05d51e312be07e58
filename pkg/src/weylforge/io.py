"""Strict JSON readers for the CLI.

Every reader takes the decoded object and a path string such as
``$.args[1].terms[0]``; schema problems raise :class:`InputError` carrying that
path, so the CLI can point at the offending spot.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .cyclic import ChainTensor, FinAlgebra
from .darboux import QuantModulePresentation
from .formcalc import FormalForm
from .genus import ChernClassExpr
from .liecoh import Cochain, LieAlgebra
from .scalars import HUSeries, parse_fraction
from .weyl import GElement, MatWeyl, ModuleElement, WeylElement


class InputError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise InputError(f"line {ex.lineno} column {ex.colno}", ex.msg) from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -- primitives -----------------------------------------------------------


def obj_(x, path: str, required=(), optional=()) -> Mapping:
    if not isinstance(x, Mapping):
        raise InputError(path, "expected an object")
    missing = [k for k in required if k not in x]
    if missing:
        raise InputError(path, f"missing field(s) {missing}")
    extra = set(x) - set(required) - set(optional)
    if extra:
        raise InputError(path, f"unknown field(s) {sorted(extra)}")
    return x


def list_(x, path: str) -> list:
    if not isinstance(x, list):
        raise InputError(path, "expected a list")
    return x


def int_(x, path: str, lo: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(path, "expected an integer")
    if lo is not None and x < lo:
        raise InputError(path, f"must be >= {lo}")
    return x


def opt_int(x, path: str, lo: int | None = None) -> int | None:
    return None if x is None else int_(x, path, lo)


def frac_(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError(path, "expected a fraction string such as \"-3/4\"")
    try:
        return parse_fraction(str(x))
    except (ValueError, ZeroDivisionError) as ex:
        raise InputError(path, str(ex)) from None


def _guard(path: str, fn, *args):
    """Run a library constructor, turning its validation errors into InputError."""
    try:
        return fn(*args)
    except InputError:
        raise
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as ex:
        raise InputError(path, f"{type(ex).__name__}: {ex}") from None


# -- scalars ----------------------------------------------------------------


def series(x, path: str = "$") -> HUSeries:
    if not isinstance(x, Mapping):
        return HUSeries.const(frac_(x, path))
    obj_(x, path, ["terms"], ["h_trunc"])
    for i, t in enumerate(list_(x["terms"], path + ".terms")):
        p = f"{path}.terms[{i}]"
        obj_(t, p, ["h", "coef"], ["u"])
        int_(t["h"], p + ".h")
        int_(t.get("u", 0), p + ".u")
        frac_(t["coef"], p + ".coef")
    opt_int(x.get("h_trunc"), path + ".h_trunc")
    return _guard(path, HUSeries.from_json, x)


# -- Weyl algebra ---------------------------------------------------------------


def _weyl_terms(terms, path: str, n: int, e: int | None):
    """Group a term list by (row, col) into key -> coefficient maps."""
    out: dict[tuple[int, int], dict] = {}
    for i, t in enumerate(list_(terms, path)):
        p = f"{path}[{i}]"
        obj_(t, p, ["x", "y", "h", "coef"], ["row", "col"])
        a = [int_(v, f"{p}.x[{j}]", 0) for j, v in enumerate(list_(t["x"], p + ".x"))]
        b = [int_(v, f"{p}.y[{j}]", 0) for j, v in enumerate(list_(t["y"], p + ".y"))]
        if len(a) != n or len(b) != n:
            raise InputError(p, f"exponent vectors must have length n = {n}")
        c = int_(t["h"], p + ".h")
        r, col = int_(t.get("row", 0), p + ".row", 0), int_(t.get("col", 0), p + ".col", 0)
        if e is not None and (r >= e or col >= e):
            raise InputError(p, f"entry ({r},{col}) outside an {e}x{e} matrix")
        key = (tuple(a), tuple(b), c)
        cell = out.setdefault((r, col), {})
        cell[key] = cell.get(key, 0) + frac_(t["coef"], p + ".coef")
    return out


def _weyl_header(x, path):
    obj_(x, path, ["n", "terms"], ["e", "cmin", "wtrunc"])
    n = int_(x["n"], path + ".n", 1)
    e = int_(x.get("e", 1), path + ".e", 1)
    cmin = int_(x.get("cmin", 0), path + ".cmin")
    wt = opt_int(x.get("wtrunc"), path + ".wtrunc", 1)
    return n, e, cmin, wt


def weyl(x, path: str = "$", trunc: int | None = None) -> WeylElement:
    n, e, cmin, wt = _weyl_header(x, path)
    if e != 1:
        raise InputError(path + ".e", "expected a scalar Weyl element (e = 1)")
    cells = _weyl_terms(x["terms"], path + ".terms", n, 1)
    wt = trunc if trunc is not None else wt
    return _guard(path, WeylElement, n, cells.get((0, 0), {}), wt, cmin)


def mat_weyl(x, path: str = "$", trunc: int | None = None, g: bool = False) -> MatWeyl:
    n, e, cmin, wt = _weyl_header(x, path)
    cells = _weyl_terms(x["terms"], path + ".terms", n, e)
    wt = trunc if trunc is not None else wt
    if g:
        cmin = min(cmin, -1)
    rows = [[_guard(path, WeylElement, n, cells.get((i, j), {}), wt, cmin) for j in range(e)] for i in range(e)]
    if not g:
        return _guard(path, MatWeyl, rows)
    out = _guard(path, GElement, rows)
    if not out.check_invariant():
        raise InputError(path, "the h^-1 part of a g element must be a scalar matrix")
    if any(c < -1 for r in out.rows for w in r for (_, _, c) in w.terms):
        raise InputError(path, "g elements allow h^-1 at most")
    return out


def g_element(x, path: str = "$", trunc: int | None = None) -> GElement:
    return mat_weyl(x, path, trunc, g=True)


def module_element(x, path: str = "$", trunc: int | None = None) -> ModuleElement:
    obj_(x, path, ["n", "q", "comps"], ["e"])
    n = int_(x["n"], path + ".n", 1)
    q = int_(x["q"], path + ".q", 0)
    if q > n:
        raise InputError(path + ".q", "q may not exceed n")
    comps = []
    for i, c in enumerate(list_(x["comps"], path + ".comps")):
        p = f"{path}.comps[{i}]"
        cells = _weyl_terms(c, p, n, 1)
        comps.append(_guard(p, WeylElement, n, cells.get((0, 0), {}), trunc))
    if "e" in x and int_(x["e"], path + ".e", 1) != len(comps):
        raise InputError(path + ".e", "e disagrees with the number of components")
    if not comps:
        raise InputError(path + ".comps", "need at least one component")
    return _guard(path, ModuleElement, comps, q)


def presentation(x, path: str = "$", trunc: int | None = None) -> QuantModulePresentation:
    obj_(x, path, ["e", "n", "q", "T", "wtrunc", "phi"])
    e = int_(x["e"], path + ".e", 1)
    n = int_(x["n"], path + ".n", 1)
    q = int_(x["q"], path + ".q", 1)
    T = int_(x["T"], path + ".T", 1)
    wt = trunc if trunc is not None else int_(x["wtrunc"], path + ".wtrunc", 1)
    if q > n:
        raise InputError(path + ".q", "q may not exceed n")
    phi = []
    for s, m in enumerate(list_(x["phi"], path + ".phi")):
        mat = []
        for i, r in enumerate(list_(m, f"{path}.phi[{s}]")):
            row = []
            for j, t in enumerate(list_(r, f"{path}.phi[{s}][{i}]")):
                p = f"{path}.phi[{s}][{i}][{j}]"
                row.append(_guard(p, WeylElement, n, _weyl_terms(t, p, n, 1).get((0, 0), {}), wt))
            mat.append(row)
        phi.append(mat)
    pres = QuantModulePresentation(e, n, q, phi, T, wt)
    _guard(path + ".phi", pres.validate)
    return pres


# -- other modules ---------------------------------------------------------------


def formal_form(x, path: str = "$") -> FormalForm:
    obj_(x, path, ["n", "terms"], ["dtrunc"])
    n = int_(x["n"], path + ".n", 1)
    opt_int(x.get("dtrunc"), path + ".dtrunc", 1)
    for i, t in enumerate(list_(x["terms"], path + ".terms")):
        p = f"{path}.terms[{i}]"
        obj_(t, p, ["mono", "idx", "coef"])
        mono = list_(t["mono"], p + ".mono")
        if len(mono) != 2 * n:
            raise InputError(p + ".mono", f"expected {2 * n} exponents")
        for j, v in enumerate(mono):
            int_(v, f"{p}.mono[{j}]", 0)
        for j, v in enumerate(list_(t["idx"], p + ".idx")):
            if not isinstance(v, str):
                raise InputError(f"{p}.idx[{j}]", "expected a name such as \"dx1\"")
        series(t["coef"], p + ".coef")
    return _guard(path, FormalForm.from_json, x)


_NAMED_LIE = {"sl2": LieAlgebra.sl2, "gl2": LieAlgebra.gl2, "solvable6": LieAlgebra.solvable6}


def lie_algebra(x, path: str = "$") -> LieAlgebra:
    if isinstance(x, str):
        if x not in _NAMED_LIE:
            raise InputError(path, f"unknown named algebra {x!r}; choose from {sorted(_NAMED_LIE)}")
        return _NAMED_LIE[x]()
    obj_(x, path, ["dim", "sc"], ["h", "rep", "labels"])
    int_(x["dim"], path + ".dim", 1)
    for i, row in enumerate(list_(x["sc"], path + ".sc")):
        if not isinstance(row, list) or len(row) != 4:
            raise InputError(f"{path}.sc[{i}]", "structure constants are [i, j, k, coef] rows")
        for j in range(3):
            int_(row[j], f"{path}.sc[{i}][{j}]", 0)
        frac_(row[3], f"{path}.sc[{i}][3]")
    return _guard(path, LieAlgebra.from_json, x)


def cochain(x, path: str = "$") -> Cochain:
    obj_(x, path, ["degree", "table"], ["dimV"])
    int_(x["degree"], path + ".degree", 0)
    if not isinstance(x["table"], Mapping):
        raise InputError(path + ".table", "expected an object keyed by comma-separated indices")
    for k, v in x["table"].items():
        for j, c in enumerate(list_(v, f"{path}.table[{k!r}]")):
            frac_(c, f"{path}.table[{k!r}][{j}]")
    return _guard(path, Cochain.from_json, x)


def fin_algebra(x, path: str = "$") -> FinAlgebra:
    if isinstance(x, Mapping) and "example" in x:
        obj_(x, path, ["example", "size"])
        size = int_(x["size"], path + ".size", 1)
        if x["example"] == "matrix":
            return FinAlgebra.matrix(size)
        if x["example"] == "truncated_poly":
            return FinAlgebra.truncated_poly(size)
        raise InputError(path + ".example", "expected 'matrix' or 'truncated_poly'")
    obj_(x, path, ["dim", "unit", "mult"], ["labels"])
    int_(x["dim"], path + ".dim", 1)
    return _guard(path, FinAlgebra.from_json, x)


def chain(x, path: str = "$") -> ChainTensor:
    obj_(x, path, ["terms"])
    for i, t in enumerate(list_(x["terms"], path + ".terms")):
        p = f"{path}.terms[{i}]"
        obj_(t, p, ["word", "coef"])
        for j, w in enumerate(list_(t["word"], p + ".word")):
            int_(w, f"{p}.word[{j}]", 0)
        series(t["coef"], p + ".coef")
    return _guard(path, ChainTensor.from_json, x)


def chern_expr(x, path: str = "$") -> ChernClassExpr:
    obj_(x, path, ["d", "terms"], ["bundles", "abstract"])
    return _guard(path, ChernClassExpr.from_json, x)
