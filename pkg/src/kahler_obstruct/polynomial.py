"""Sparse multivariate polynomials over Q.

Only what the rewrite evaluator needs: ring operations, substitution,
partial degrees and a stable text form. Polynomials with a hundred-odd
indeterminates and a handful of terms are the typical workload, which is
why this is not a dense or recursive representation.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # sorted tuple of (variable, exponent) pairs


def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for v, e in m2:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


class QPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> "QPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "QPoly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, coeff, powers: Mapping[str, int]) -> "QPoly":
        mono = tuple(sorted((v, e) for v, e in powers.items() if e))
        return cls({mono: Fraction(coeff)})

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "QPoly":
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "QPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "QPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "QPoly":
        if isinstance(other, (int, Fraction)):
            return QPoly({m: c * other for m, c in self.terms.items()})
        other = _coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QPoly":
        out = QPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, name: str) -> int:
        return max((e for m in self.terms for v, e in m if v == name), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(e for _, e in m) == degree for m in self.terms)

    def constant(self) -> Fraction:
        """The value of a constant polynomial (error otherwise)."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {()}:
            raise ValueError(f"polynomial {self} is not constant")
        return self.terms[()]

    def subs(self, values: Mapping[str, object]) -> "QPoly":
        """Substitute numbers (or polynomials) for some of the variables."""
        out = QPoly()
        for m, c in self.terms.items():
            term = QPoly({(): c})
            rest = []
            for v, e in m:
                if v in values:
                    term = term * (_coerce(values[v]) ** e)
                else:
                    rest.append((v, e))
            out = out + term * QPoly({tuple(rest): Fraction(1)})
        return out

    def __call__(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at a point; variables missing from ``values`` count as 0."""
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= Fraction(values.get(v, 0)) ** e
                if not t:
                    break
            total += t
        return total

    def __repr__(self) -> str:
        return f"QPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: ([_natural_key(v) + [e] for v, e in m])):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return QPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def poly_sum(items: Iterable[QPoly]) -> QPoly:
    out: dict[Monomial, Fraction] = {}
    for p in items:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return QPoly(out)
