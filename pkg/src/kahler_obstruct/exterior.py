"""Lattices with integer endomorphisms and the cohomology of complex tori.

For a lattice ``Gamma = Z^{2n}`` with endomorphism ``phi`` the torus built
from ``phi`` has ``H^1(T, Q) = Gamma_Q^*`` with ``phi_T^*`` acting as the
transpose, and ``H^*(T, Q)`` is the exterior algebra on ``H^1``.

Basis conventions: the degree-k basis of the exterior algebra on
generators ``e_1 .. e_N`` is the list of strictly increasing k-subsets in
lexicographic order, and the orientation sends ``e_1 ^ ... ^ e_N`` to 1.
The orientation is a convention: every verdict computed downstream is
invariant under rescaling it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from operator import mul
from typing import Sequence

from ._exact import det, frac

__all__ = [
    "AlgebraError",
    "Lattice",
    "IntegerEndomorphism",
    "ExteriorAlgebra",
    "AlgebraElement",
    "char_poly",
    "companion_matrix",
    "wedge_power_map",
    "wedge",
    "torus_ring",
]


class AlgebraError(ValueError):
    """Elements from incompatible algebras were combined."""


@dataclass(frozen=True)
class Lattice:
    rank: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rank < 4 or self.rank % 2:
            raise ValueError(f"lattice rank must be even and >= 4, got {self.rank}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i + 1}" for i in range(self.rank)))
        if len(self.labels) != self.rank:
            raise ValueError("one label per basis vector")


@dataclass(frozen=True)
class IntegerEndomorphism:
    matrix: tuple[tuple[int, ...], ...]
    lattice: Lattice | None = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("endomorphism matrix must be square")
        if self.lattice is not None and self.lattice.rank != n:
            raise ValueError("matrix size does not match the lattice rank")
        object.__setattr__(self, "matrix", rows)

    @property
    def size(self) -> int:
        return len(self.matrix)

    def transpose(self) -> "IntegerEndomorphism":
        return IntegerEndomorphism(tuple(zip(*self.matrix)), self.lattice)


def _as_square(m) -> list[list[int]]:
    if isinstance(m, IntegerEndomorphism):
        return [list(r) for r in m.matrix]
    rows = [[_as_int(v) for v in r] for r in m]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("dimension error: matrix is not square")
    return rows


def _as_int(v) -> int:
    v = Fraction(v)
    if v.denominator != 1:
        raise ValueError("integer matrix expected")
    return v.numerator


def char_poly(endo) -> list[int]:
    """``det(lambda I - M)`` as integer coefficients, constant term first.

    Faddeev-LeVerrier recursion; every division is exact over Z.
    """
    a = _as_square(endo)
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    am = [[0] * n for _ in range(n)]  # A M_{k-1}, with M_0 = 0
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # M_k = A M_{k-1} + c_{n-k+1} I
        m = [row[:] for row in am]
        for i in range(n):
            m[i][i] += c_prev
        mcols = [list(c) for c in zip(*m)]
        am = [[sum(map(mul, row, col)) for col in mcols] for row in a]
        trace = sum(am[i][i] for i in range(n))
        if trace % k:
            raise ArithmeticError("inexact Faddeev-LeVerrier step")
        coeffs[n - k] = -trace // k
    return coeffs


def companion_matrix(coeffs: Sequence[int]) -> list[list[int]]:
    """Companion matrix of a monic polynomial (coefficients constant first)."""
    coeffs = [int(c) for c in coeffs]
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] != 1:
        raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
    m = [[0] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = 1
    for i in range(n):
        m[i][n - 1] = -coeffs[i]
    return m


def wedge_power_map(endo, p: int) -> list[list[int]]:
    """Matrix of the p-th exterior power of the transpose.

    Entry ``(I, J)`` is the ``I x J`` minor of ``M^t``; rows and columns
    follow the lexicographic increasing-subset basis.
    """
    a = _as_square(endo)
    n = len(a)
    if not 1 <= p <= n:
        raise ValueError(f"exterior power {p} out of range 1..{n}")
    at = [list(col) for col in zip(*a)]
    subsets = list(combinations(range(n), p))
    return [[int(det([[at[i][j] for j in cols] for i in rows])) for cols in subsets]
            for rows in subsets]


class AlgebraElement:
    """Homogeneous element of an exterior algebra, sparse over subsets."""

    __slots__ = ("algebra", "degree", "coords")

    def __init__(self, algebra: "ExteriorAlgebra", degree: int, coords: dict | None = None):
        self.algebra = algebra
        self.degree = degree
        self.coords = {tuple(k): frac(v) for k, v in (coords or {}).items() if v}
        for k in self.coords:
            if len(k) != degree:
                raise ValueError(f"subset {k} does not have size {degree}")

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or other.algebra != self.algebra:
            raise AlgebraError("elements of different exterior algebras")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("adding elements of different degrees")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.algebra, self.degree, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, self.degree, {k: -v for k, v in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.wedge(self, other)
        c = frac(other)
        return AlgebraElement(self.algebra, self.degree, {k: v * c for k, v in self.coords.items()})

    def __rmul__(self, other):
        c = frac(other)
        return AlgebraElement(self.algebra, self.degree, {k: v * c for k, v in self.coords.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.algebra == other.algebra and self.degree == other.degree
                and self.coords == other.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __repr__(self):
        if not self.coords:
            return "0"
        terms = []
        for k in sorted(self.coords):
            name = "^".join(f"e{i + 1}" for i in k) or "1"
            terms.append(f"{self.coords[k]}*{name}")
        return " + ".join(terms)


def _shuffle_sign(i: tuple, j: tuple) -> int:
    inversions = sum(1 for a in i for b in j if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class ExteriorAlgebra:
    generators: int

    def basis(self, k: int) -> list[tuple]:
        if not 0 <= k <= self.generators:
            return []
        return list(combinations(range(self.generators), k))

    def dim(self, k: int) -> int:
        return comb(self.generators, k) if 0 <= k <= self.generators else 0

    @property
    def top_degree(self) -> int:
        return self.generators

    def element(self, degree: int, coords: dict | None = None) -> AlgebraElement:
        return AlgebraElement(self, degree, coords)

    def gen(self, *indices: int) -> AlgebraElement:
        """``e_{i1} ^ e_{i2} ^ ...`` with 1-based indices, in the given order."""
        out = self.one()
        for i in indices:
            if not 1 <= i <= self.generators:
                raise ValueError(f"generator index {i} out of range")
            out = self.wedge(out, AlgebraElement(self, 1, {(i - 1,): 1}))
        return out

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, 0, {(): 1})

    def top(self) -> AlgebraElement:
        return AlgebraElement(self, self.generators, {tuple(range(self.generators)): 1})

    def wedge(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        if x.algebra != self or y.algebra != self:
            raise AlgebraError("wedge of elements from a different exterior algebra")
        deg = x.degree + y.degree
        out: dict[tuple, Fraction] = {}
        if deg <= self.generators:
            for i, a in x.coords.items():
                si = set(i)
                for j, b in y.coords.items():
                    if si.intersection(j):
                        continue
                    key = tuple(sorted(i + j))
                    out[key] = out.get(key, 0) + _shuffle_sign(i, j) * a * b
        return AlgebraElement(self, deg, out)

    cup = wedge

    def evaluate_top(self, x: AlgebraElement) -> Fraction:
        """Orientation functional: coefficient of e_1 ^ ... ^ e_N."""
        if x.degree != self.generators:
            raise ValueError("orientation is only defined on the top degree")
        return x.coords.get(tuple(range(self.generators)), Fraction(0))

    def pairing_matrix(self, k: int) -> list[list[Fraction]]:
        """Matrix of ``(x, y) -> <x ^ y, [T]>`` between degree k and N - k."""
        rows = self.basis(k)
        cols = self.basis(self.generators - k)
        top = tuple(range(self.generators))
        out = []
        for i in rows:
            r = []
            for j in cols:
                r.append(Fraction(0) if set(i) & set(j) or tuple(sorted(i + j)) != top
                         else Fraction(_shuffle_sign(i, j)))
            out.append(r)
        return out


def wedge(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if not isinstance(x, AlgebraElement) or not isinstance(y, AlgebraElement):
        raise AlgebraError("wedge expects exterior algebra elements")
    if x.algebra != y.algebra:
        raise AlgebraError("mismatched generator counts")
    return x.algebra.wedge(x, y)


def torus_ring(n: int):
    """``H^*(T, Q)`` of a complex n-torus as a :class:`GradedRing`.

    Degree-k basis labels are ``e{i}{j}...`` over increasing subsets.
    """
    from .graded import GradedRing

    if n < 1:
        raise ValueError("torus dimension must be positive")
    alg = ExteriorAlgebra(2 * n)
    top = 2 * n
    bases = [alg.basis(k) for k in range(top + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    table = {}
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for i, s in enumerate(bases[p]):
                ss = set(s)
                for j, t in enumerate(bases[q]):
                    if ss.intersection(t):
                        continue
                    key = tuple(sorted(s + t))
                    table[(p, i, q, j)] = {index[p + q][key]: Fraction(_shuffle_sign(s, t))}
    labels = [["e" + "".join(str(i + 1) for i in s) if s else "1" for s in b] for b in bases]
    return GradedRing(
        name=f"torus{n}",
        labels=labels,
        table=table,
        orientation=Fraction(1),
        keys=bases,
    )
