"""Exact rational helpers: sparse row reduction, kernels, determinants.

Rows are plain dicts ``{column_key: Fraction}`` with zero entries omitted.
Columns are ordered by an explicit key list so that reduced echelon forms
are canonical (same span -> same rows).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Hashable, Iterable, Sequence

Row = dict


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fstr(x: Fraction) -> str:
    """Serialize an exact rational as ``"p/q"`` (or ``"p"`` for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def clean(row: Row) -> Row:
    return {k: v for k, v in row.items() if v != 0}


def row_axpy(target: Row, scale: Fraction, source: Row) -> None:
    """In place: target += scale * source."""
    for k, v in source.items():
        nv = target.get(k, 0) + scale * v
        if nv == 0:
            target.pop(k, None)
        else:
            target[k] = nv


def rref(rows: Iterable[Row], columns: Sequence[Hashable]) -> list[Row]:
    """Reduced row echelon form over Q with pivots normalized to 1.

    The pivot order follows ``columns``; the result is sorted by pivot
    position, so two spanning sets of the same space give identical output.
    """
    position = {c: i for i, c in enumerate(columns)}
    pivots: dict[Hashable, Row] = {}
    for raw in rows:
        row = clean(dict(raw))
        # pivot rows vanish on every other pivot column, so one pass suffices
        for col in [c for c in row if c in pivots]:
            row_axpy(row, -row[col], pivots[col])
        if not row:
            continue
        lead = min(row, key=position.__getitem__)
        inv = 1 / row[lead]
        row = {k: v * inv for k, v in row.items()}
        for prow in pivots.values():
            c = prow.get(lead)
            if c:
                row_axpy(prow, -c, row)
        pivots[lead] = row
    return [pivots[c] for c in sorted(pivots, key=position.__getitem__)]


def pivot_of(row: Row, columns: Sequence[Hashable]) -> Hashable:
    position = {c: i for i, c in enumerate(columns)}
    return min(row, key=position.__getitem__)


def rank(rows: Iterable[Row], columns: Sequence[Hashable]) -> int:
    return len(rref(rows, columns))


def nullspace(rows: Iterable[Row], columns: Sequence[Hashable]) -> list[Row]:
    """Basis (in reduced echelon form) of {x : row . x = 0 for every row}."""
    position = {c: i for i, c in enumerate(columns)}
    lead_of = {}
    for r in rref(rows, columns):
        lead_of[min(r, key=position.__getitem__)] = r
    basis = []
    for free in columns:
        if free in lead_of:
            continue
        vec = {free: Fraction(1)}
        for lead, r in lead_of.items():
            c = r.get(free)
            if c:
                vec[lead] = -c
        basis.append(vec)
    return rref(basis, columns)


def dense_to_rows(matrix: Sequence[Sequence]) -> list[Row]:
    return [clean({j: frac(v) for j, v in enumerate(r)}) for r in matrix]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for row in a:
        out.append([sum((row[k] * b[k][j] for k in range(inner) if row[k]), Fraction(0))
                    for j in range(cols)])
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination."""
    m = [[frac(v) for v in row] for row in matrix]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sqrt_upper(q: Fraction) -> Fraction:
    """A rational upper bound for sqrt(q), q >= 0 (tight to 1/denominator)."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    s = isqrt(num * den)
    if s * s == num * den:
        return Fraction(s, den)
    return Fraction(s + 1, den)
