"""Blowup intersection formulas and Segre classes.

For a blowup ``tau: X~ -> X`` along a codimension-r submanifold ``Z`` with
exceptional divisor ``E = P(N_{Z/X})``, the pushforward to ``Z`` of
``[E]^k . tau^* alpha`` is

* 0 for k < r (the fibre class ``h^{k-1}`` has too small a degree),
* ``(-1)^{r-1} alpha|_Z`` for k = r,
* ``(-1)^{k-1} s_{k-r} alpha|_Z`` for k > r,

with ``s_i`` the Segre classes of the normal bundle. At top degree these
classes evaluate to the intersection numbers on ``X~``.

Segre classes that are only known to be supported on an exceptional locus
are carried as the :data:`SUPPORTED` flag instead of explicit classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .graded import GradedRing, RingElement

__all__ = [
    "Supported",
    "SUPPORTED",
    "SegreClasses",
    "segre",
    "BlowupDatum",
    "ExceptionalTerm",
    "exceptional_power",
    "point_ring",
    "point_restriction",
    "blowup_at_points",
]


class Supported:
    """A class known only to be supported on the exceptional locus.

    The supported classes form an ideal: products with anything stay
    supported, and sums of supported classes stay supported.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __mul__(self, other):
        return self

    __rmul__ = __mul__

    def __neg__(self):
        return self

    def __add__(self, other):
        if other is self or _is_zero(other):
            return self
        raise TypeError("cannot add an explicit class to a supported-on-exceptional-locus flag")

    __radd__ = __add__

    def __sub__(self, other):
        return self + other

    def __rsub__(self, other):
        return self + other

    def __repr__(self):
        return "supported-on-exceptional-locus"


SUPPORTED = Supported()


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return False


@dataclass(frozen=True)
class SegreClasses:
    chern: tuple
    classes: tuple

    def __getitem__(self, i: int):
        return self.classes[i]

    def __len__(self):
        return len(self.classes)

    def recursion_residual(self, m: int):
        """``sum_{i=0}^{m} s_i c_{m-i}`` (zero when the recursion holds)."""
        total = self.classes[m] * 1
        for i in range(m):
            c = _chern(self.chern, m - i)
            if c is not None:
                total = total + self.classes[i] * c
        return total


def _chern(c: Sequence, i: int):
    return c[i - 1] if 1 <= i <= len(c) else None


def segre(c: Sequence[Any], L: int, one: Any = 1) -> SegreClasses:
    """Segre classes ``s_0 .. s_L`` from Chern classes ``c = (c_1, .., c_r)``.

    Uses ``s_0 = 1`` and ``s_m = -sum_{i=1}^{m} c_i s_{m-i}``. Entries of
    ``c`` may be ring elements, polynomials, numbers or :data:`SUPPORTED`;
    ``one`` is the unit of whatever they live in.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    s = [one]
    for m in range(1, L + 1):
        acc = None
        for i in range(1, m + 1):
            ci = _chern(c, i)
            if ci is None:
                continue
            term = ci * s[m - i]
            acc = term if acc is None else acc + term
        if acc is None:
            acc = one * 0 if not isinstance(one, Supported) else one
            s.append(acc)
        else:
            s.append(-acc)
    return SegreClasses(tuple(c), tuple(s))


@dataclass
class BlowupDatum:
    """Blowup of ``ambient`` along a centre ``Z`` of complex codimension ``r``.

    ``restriction`` maps an ambient element to the centre ring; ``chern``
    holds ``c_1 .. c_r`` of the normal bundle as centre-ring elements, or
    :data:`SUPPORTED` entries.
    """

    ambient: GradedRing | None
    center: GradedRing
    r: int
    restriction: Callable[[RingElement], RingElement]
    chern: tuple = ()
    segre_classes: SegreClasses | None = field(default=None, init=False)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("centre codimension must be at least 2")
        if len(self.chern) > self.r:
            raise ValueError("a rank-r normal bundle has at most r Chern classes")
        top = self.center.top_degree // 2
        self.segre_classes = segre(list(self.chern), top, self.center.one())

    @property
    def ambient_dim(self) -> int:
        return self.center.top_degree // 2 + self.r

    def check_restriction_morphism(self, pairs: Sequence[tuple]) -> bool:
        """Check ``(xy)|_Z = x|_Z y|_Z`` on the given ambient pairs."""
        for x, y in pairs:
            if self.restriction(x * y) != self.restriction(x) * self.restriction(y):
                return False
        return True


@dataclass(frozen=True)
class ExceptionalTerm:
    value: Any
    branch: str  # below-codim | codim | segre | overflow
    flagged: bool = False

    def number(self, datum: BlowupDatum) -> Fraction:
        """Intersection number, when the class sits in the centre's top degree."""
        if self.value is None:
            return Fraction(0)
        if isinstance(self.value, Supported):
            raise ValueError("a supported-only class has no explicit intersection number")
        if self.value.degree != datum.center.top_degree:
            raise ValueError("not a top-degree intersection")
        return datum.center.evaluate_top(self.value)


def exceptional_power(k: int, datum: BlowupDatum, alpha: RingElement) -> ExceptionalTerm:
    """Pushforward to the centre of ``[E]^k . tau^* alpha``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    top = 2 * datum.ambient_dim
    if alpha.degree + 2 * k > top:
        return ExceptionalTerm(None, "overflow", True)
    if k < datum.r:
        return ExceptionalTerm(None, "below-codim")
    restricted = datum.restriction(alpha)
    sign = -1 if (k - 1) % 2 else 1
    if k == datum.r:
        return ExceptionalTerm(restricted * sign, "codim")
    s = datum.segre_classes[k - datum.r]
    if isinstance(s, Supported):
        return ExceptionalTerm(SUPPORTED, "segre")
    return ExceptionalTerm(s * restricted * sign, "segre")


def point_ring() -> GradedRing:
    return GradedRing("pt", [["1"]], {(0, 0, 0, 0): {0: 1}}, 1)


def point_restriction(center: GradedRing | None = None) -> Callable[[RingElement], RingElement]:
    """Restriction of classes to a point: keep only the degree-0 part."""
    center = center or point_ring()

    def restrict(x: RingElement) -> RingElement:
        if x.degree == 0:
            return center.element(0, {0: x.coords.get(0, 0)})
        return center.element(x.degree, {})

    return restrict


def blowup_at_points(ring: GradedRing, count: int, name: str | None = None) -> GradedRing:
    """Cohomology ring of ``ring``'s manifold blown up at ``count`` points.

    Adds ``E_j^a`` (1 <= a <= r-1, r = complex dimension) in degree 2a with
    ``E_j . tau^* alpha = 0`` for deg alpha > 0, ``E_i E_j = 0`` for i != j,
    and ``E_j^r = (-1)^{r-1} [pt]`` taken from :func:`exceptional_power`.
    """
    if ring.top_degree % 2:
        raise ValueError("complex manifold rings have even top degree")
    r = ring.top_degree // 2
    if r < 2 or count < 0:
        raise ValueError("need complex dimension >= 2 and a non-negative point count")
    datum = BlowupDatum(ring, point_ring(), r, point_restriction())
    top_value = exceptional_power(r, datum, ring.one()).number(datum)

    labels = [list(l) for l in ring.labels]
    keys = [list(k) for k in ring.keys]
    pos = {}
    for j in range(count):
        for a in range(1, r):
            pos[(j, a)] = len(labels[2 * a])
            labels[2 * a].append(f"E{j + 1}^{a}" if a > 1 else f"E{j + 1}")
            keys[2 * a].append(("E", j + 1, a))
    table = {k: dict(v) for k, v in ring.table.items()}
    point = ring.point()
    for j in range(count):
        for a in range(1, r):
            idx = pos[(j, a)]
            table[(0, 0, 2 * a, idx)] = {idx: 1}
            table[(2 * a, idx, 0, 0)] = {idx: 1}
            for b in range(1, r):
                if a + b < r:
                    table[(2 * a, idx, 2 * b, pos[(j, b)])] = {pos[(j, a + b)]: 1}
                elif a + b == r:
                    table[(2 * a, idx, 2 * b, pos[(j, b)])] = {
                        k: v * top_value for k, v in point.coords.items()}
    return GradedRing(name or f"{ring.name}#{count}pt", labels, table, ring.orientation, keys)
