"""Exact rational linear algebra on list-of-list matrices of Fractions.

Thin adapter over sympy's ``DomainMatrix`` on ``QQ``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Matrix = list[list[Fraction]]


def _to_dm(a: Sequence[Sequence], rows: int | None = None, cols: int | None = None) -> DomainMatrix:
    rows = len(a) if rows is None else rows
    cols = (len(a[0]) if a else 0) if cols is None else cols
    data = [[QQ(int(Fraction(v).numerator), int(Fraction(v).denominator)) for v in r] for r in a]
    return DomainMatrix(data, (rows, cols), QQ)


def _from_dm(m: DomainMatrix) -> Matrix:
    return [[Fraction(int(v.numerator), int(v.denominator)) for v in r] for r in m.to_list()]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(r, v)), Fraction(0)) for r in a]


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return _to_dm(a).rank()


def det(a: Matrix) -> Fraction:
    if not a:
        return Fraction(1)
    v = _to_dm(a).det()
    return Fraction(int(v.numerator), int(v.denominator))


def inverse(a: Matrix) -> Matrix:
    return _from_dm(_to_dm(a).inv())


def nullspace(a: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : a v = 0}``."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return identity(ncols)
    ns = _to_dm(a, len(a), ncols).nullspace()
    return _from_dm(ns) if ns.shape[0] else []


def solve(a: Matrix, b: Sequence[Fraction], ncols: int | None = None) -> list[Fraction] | None:
    """One exact solution of ``a x = b``, or ``None`` when the system is inconsistent."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    rows = len(a)
    if rows == 0:
        return [Fraction(0)] * ncols
    aug = [list(r) + [b[i]] for i, r in enumerate(a)]
    rref, pivots = _to_dm(aug, rows, ncols + 1).rref()
    if ncols in pivots:
        return None
    red = _from_dm(rref)
    x = [Fraction(0)] * ncols
    for row, p in enumerate(pivots):
        x[p] = red[row][ncols]
    return x
