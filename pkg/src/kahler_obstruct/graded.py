"""Finite-dimensional graded-commutative algebras over Q.

A :class:`GradedRing` stores its multiplication as sparse structure
constants keyed by ``(deg_x, i, deg_y, j)``: the product of the i-th basis
element of degree ``deg_x`` with the j-th of degree ``deg_y`` is the sparse
vector ``table[(deg_x, i, deg_y, j)]`` in degree ``deg_x + deg_y``. Degrees
are real cohomological degrees. The top degree is one-dimensional and the
orientation functional assigns ``orientation`` to its basis element.

Subspaces are kept in reduced row echelon form so they compare by value.
The helpers here (subspaces, annihilators, orthogonal complements, the
zero-square check) accept either a :class:`GradedRing` or an
:class:`~kahler_obstruct.exterior.ExteriorAlgebra`; both expose
``basis``, ``element``, ``cup`` and ``evaluate_top``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._exact import frac, fstr, nullspace, rank, rref

__all__ = [
    "RingMismatch",
    "GradedRing",
    "RingElement",
    "Subspace",
    "ZeroSquareVerdict",
    "cup",
    "kunneth",
    "kummer_surface_ring",
    "annihilator",
    "orthogonal_complement",
    "zero_square_components_check",
    "generated_subspace",
    "check_associativity",
    "check_graded_commutativity",
    "pairing_rows",
    "pairing_ranks",
    "is_poincare_nondegenerate",
    "dump_structure_constants",
    "load_structure_constants",
]


class RingMismatch(ValueError):
    pass


class RingElement:
    __slots__ = ("ring", "degree", "coords")

    def __init__(self, ring: "GradedRing", degree: int, coords: dict | None = None):
        self.ring = ring
        self.degree = degree
        dim = ring.dim(degree)
        self.coords = {}
        for k, v in (coords or {}).items():
            if not 0 <= k < dim:
                raise IndexError(f"basis index {k} outside degree {degree} (dim {dim})")
            if v:
                self.coords[k] = frac(v)

    def _same(self, other):
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            raise RingMismatch("elements belong to different rings")

    def __add__(self, other):
        self._same(other)
        if other.degree != self.degree:
            raise ValueError("adding elements of different degrees")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return RingElement(self.ring, self.degree, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return self.ring.cup(self, other)
        c = frac(other)
        return RingElement(self.ring, self.degree, {k: v * c for k, v in self.coords.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.ring), self.degree, frozenset(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def __repr__(self):
        if not self.coords:
            return f"0[deg {self.degree}]"
        labels = self.ring.labels[self.degree]
        return " + ".join(f"{fstr(v)}*{labels[k]}" for k, v in sorted(self.coords.items()))


class GradedRing:
    """Graded-commutative Q-algebra given by sparse structure constants."""

    def __init__(self, name: str, labels: Sequence[Sequence[str]], table: dict,
                 orientation=1, keys: Sequence[Sequence] | None = None):
        self.name = name
        self.labels = [list(l) for l in labels]
        self.keys = [list(k) for k in keys] if keys is not None else [list(l) for l in labels]
        self.table = {k: {i: frac(c) for i, c in v.items() if c} for k, v in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}
        self.orientation = frac(orientation)
        self.top_degree = len(self.labels) - 1
        if self.dim(0) != 1 or self.dim(self.top_degree) != 1:
            raise ValueError("a graded ring here needs b_0 = 1 and a one-dimensional top degree")
        self._index = [{lab: i for i, lab in enumerate(l)} for l in self.labels]

    # basics --------------------------------------------------------------
    def dim(self, k: int) -> int:
        return len(self.labels[k]) if 0 <= k <= self.top_degree else 0

    def betti(self) -> list[int]:
        return [len(l) for l in self.labels]

    def total_dim(self) -> int:
        return sum(self.betti())

    def basis(self, k: int) -> list[int]:
        return list(range(self.dim(k)))

    def element(self, degree: int, coords: dict | None = None) -> RingElement:
        return RingElement(self, degree, coords)

    def gen(self, label: str) -> RingElement:
        for k, idx in enumerate(self._index):
            if label in idx:
                return RingElement(self, k, {idx[label]: 1})
        raise KeyError(label)

    def basis_element(self, degree: int, i: int) -> RingElement:
        return RingElement(self, degree, {i: 1})

    def one(self) -> RingElement:
        return RingElement(self, 0, {0: 1})

    def point(self) -> RingElement:
        """The top class with orientation value 1."""
        return RingElement(self, self.top_degree, {0: 1 / self.orientation})

    def cup(self, x: RingElement, y: RingElement) -> RingElement:
        if x.ring is not self or y.ring is not self:
            raise RingMismatch("cup of elements from different rings")
        p, q = x.degree, y.degree
        out: dict[int, Fraction] = {}
        if p + q <= self.top_degree:
            table = self.table
            for i, a in x.coords.items():
                for j, b in y.coords.items():
                    entry = table.get((p, i, q, j))
                    if entry:
                        ab = a * b
                        for k, c in entry.items():
                            out[k] = out.get(k, 0) + ab * c
        return RingElement(self, p + q, out)

    def evaluate_top(self, x: RingElement) -> Fraction:
        if x.degree != self.top_degree:
            raise ValueError("orientation is only defined on the top degree")
        return x.coords.get(0, Fraction(0)) * self.orientation

    def __repr__(self):
        return f"GradedRing({self.name!r}, betti={self.betti()})"


def cup(x: RingElement, y: RingElement) -> RingElement:
    if not isinstance(x, RingElement) or not isinstance(y, RingElement):
        raise TypeError("cup expects ring elements")
    if x.ring is not y.ring:
        raise RingMismatch("elements belong to different rings")
    return x.ring.cup(x, y)


# --------------------------------------------------------------------------
# constructions


def kunneth(r1: GradedRing, r2: GradedRing, name: str | None = None) -> GradedRing:
    """Tensor product ``H^*(X1) (x) H^*(X2)`` with the Koszul sign.

    ``(x1 (x) x2)(y1 (x) y2) = (-1)^{|x2||y1|} x1 y1 (x) x2 y2``. Degree-k basis
    elements are pairs ordered by the degree of the first factor.
    """
    top = r1.top_degree + r2.top_degree
    labels, keys = [], []
    where: dict[tuple, tuple[int, int]] = {}
    for k in range(top + 1):
        lk, kk = [], []
        for p in range(max(0, k - r2.top_degree), min(k, r1.top_degree) + 1):
            for i in range(r1.dim(p)):
                for j in range(r2.dim(k - p)):
                    where[(p, i, k - p, j)] = (k, len(lk))
                    lk.append(f"{r1.labels[p][i]}|{r2.labels[k - p][j]}")
                    kk.append((r1.keys[p][i], r2.keys[k - p][j]))
        labels.append(lk)
        keys.append(kk)
    table = {}
    for (p1, i1, q1, j1), out1 in r1.table.items():
        for (p2, i2, q2, j2), out2 in r2.table.items():
            sign = -1 if (p2 * q1) % 2 else 1
            dx, ix = where[(p1, i1, p2, i2)]
            dy, iy = where[(q1, j1, q2, j2)]
            prod = {}
            for k1, c1 in out1.items():
                for k2, c2 in out2.items():
                    _, idx = where[(p1 + q1, k1, p2 + q2, k2)]
                    prod[idx] = prod.get(idx, 0) + sign * c1 * c2
            table[(dx, ix, dy, iy)] = prod
    return GradedRing(name or f"{r1.name}x{r2.name}", labels, table,
                      r1.orientation * r2.orientation, keys)


def kummer_surface_ring(n: int = 2, exceptional: int | None = None) -> GradedRing:
    """Rational cohomology ring of the Kummer surface of a 2-torus.

    ``H^2 = wedge^2 H^1(T) (+) <D_1 .. D_16>`` with the wedge part paired by the
    torus orientation (the 2:1 quotient factor is absorbed into the
    orientation, kappa = 1), ``D_i . D_j = -2 delta_ij`` and the two summands
    orthogonal. ``exceptional`` overrides the count 16 for testing only.
    """
    if n != 2:
        raise NotImplementedError("only the Kummer surface (n = 2) ring is modelled")
    from .exterior import ExteriorAlgebra, _shuffle_sign

    count = 2 ** (2 * n) if exceptional is None else exceptional
    alg = ExteriorAlgebra(4)
    wedge2 = alg.basis(2)
    labels = [["1"], ["e" + "".join(str(i + 1) for i in s) for s in wedge2]
              + [f"D{i + 1}" for i in range(count)], ["pt"]]
    table = {}
    dim2 = len(labels[1])
    table[(0, 0, 0, 0)] = {0: 1}
    for i in range(dim2):
        table[(0, 0, 2, i)] = {i: 1}
        table[(2, i, 0, 0)] = {i: 1}
    table[(0, 0, 4, 0)] = {0: 1}
    table[(4, 0, 0, 0)] = {0: 1}
    for i, s in enumerate(wedge2):
        for j, t in enumerate(wedge2):
            if not set(s) & set(t):
                table[(2, i, 2, j)] = {0: _shuffle_sign(s, t)}
    for d in range(count):
        idx = len(wedge2) + d
        table[(2, idx, 2, idx)] = {0: -2}
    labels = [labels[0], [], labels[1], [], labels[2]]
    return GradedRing("kummer", labels, table, 1)


# --------------------------------------------------------------------------
# subspaces


def _columns(ring, degree):
    return ring.basis(degree)


class Subspace:
    """A subspace of one graded piece, stored in canonical echelon form."""

    def __init__(self, ring, degree: int, rows: Iterable[dict] = ()):
        self.ring = ring
        self.degree = degree
        self.rows = tuple(rref(rows, _columns(ring, degree)))

    @classmethod
    def span(cls, ring, degree: int, elements: Iterable) -> "Subspace":
        rows = []
        for x in elements:
            if x.degree != degree:
                raise ValueError("all spanning elements must have the subspace degree")
            rows.append(dict(x.coords))
        return cls(ring, degree, rows)

    @classmethod
    def whole(cls, ring, degree: int) -> "Subspace":
        return cls(ring, degree, [{k: 1} for k in ring.basis(degree)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def elements(self) -> list:
        return [self.ring.element(self.degree, r) for r in self.rows]

    def contains(self, x) -> bool:
        return Subspace(self.ring, self.degree, list(self.rows) + [x.coords]).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(x) for x in self.elements())

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ring, self.degree, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # solve sum a_i s_i = sum b_j w_j
        unknowns = [("s", i) for i in range(self.dim)] + [("w", j) for j in range(other.dim)]
        eqs: dict = defaultdict(dict)
        for i, r in enumerate(self.rows):
            for k, v in r.items():
                eqs[k][("s", i)] = v
        for j, r in enumerate(other.rows):
            for k, v in r.items():
                eqs[k][("w", j)] = -v
        sols = nullspace(eqs.values(), unknowns)
        out = []
        for sol in sols:
            vec: dict = {}
            for (tag, i), a in sol.items():
                if tag == "s":
                    for k, v in self.rows[i].items():
                        vec[k] = vec.get(k, 0) + a * v
            out.append(vec)
        return Subspace(self.ring, self.degree, out)

    def _check(self, other):
        if other.ring is not self.ring or other.degree != self.degree:
            raise RingMismatch("subspaces of different graded pieces")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ring is other.ring and self.degree == other.degree and self.rows == other.rows

    def __repr__(self):
        return f"Subspace(degree={self.degree}, dim={self.dim})"


def annihilator(ring, S: Subspace, degree: int) -> Subspace:
    """``{z in H^degree : z . s = 0 for all s in S}``, computed exactly."""
    if S.dim == 0:
        raise ValueError("annihilator of the zero subspace is not defined here")
    basis = ring.basis(degree)
    eqs: dict = defaultdict(dict)
    gens = S.elements()
    for j in basis:
        e = ring.element(degree, {j: 1})
        for si, s in enumerate(gens):
            for k, v in ring.cup(e, s).coords.items():
                eqs[(si, k)][j] = v
    return Subspace(ring, degree, nullspace(eqs.values(), basis))


def orthogonal_complement(ring, S: Subspace) -> Subspace:
    """Orthogonal complement of S under the Poincare pairing, in degree top - deg S."""
    degree = ring.top_degree - S.degree
    basis = ring.basis(degree)
    eqs = []
    for s in S.elements():
        row = {}
        for j in basis:
            prod = ring.cup(ring.element(degree, {j: 1}), s)
            v = ring.evaluate_top(prod)
            if v:
                row[j] = v
        eqs.append(row)
    return Subspace(ring, degree, nullspace(eqs, basis))


def generated_subspace(ring, generators: Sequence, degree: int) -> Subspace:
    """Degree-``degree`` piece of the subalgebra generated by ``generators``."""
    pieces = {0: Subspace.span(ring, 0, [ring.one()])}
    gdeg = sorted({g.degree for g in generators})
    if any(d <= 0 for d in gdeg):
        raise ValueError("generators must have positive degree")
    for k in range(1, degree + 1):
        prods = []
        for g in generators:
            prev = pieces.get(k - g.degree)
            if prev is None or prev.dim == 0:
                continue
            prods.extend(ring.cup(x, g) for x in prev.elements())
        pieces[k] = Subspace.span(ring, k, prods)
    return pieces[degree]


@dataclass(frozen=True)
class ZeroSquareVerdict:
    independent_images: bool
    image_dims: tuple[int, int, int]
    tensor_rank: int
    expected_rank: int

    @property
    def injective(self) -> bool:
        return self.tensor_rank == self.expected_rank

    @property
    def holds(self) -> bool:
        return self.independent_images and self.injective

    @property
    def status(self) -> str:
        return "decomposed" if self.holds else "not decomposed"


def zero_square_components_check(ring, B1: Subspace, B2: Subspace) -> ZeroSquareVerdict:
    """Check the two ring facts behind ``{eta^2 = 0} on B1 (+) B2 = Z1 u Z2``.

    (i) ``B1.B1``, ``B1.B2`` and ``B2.B2`` span independent subspaces of the
    product degree; (ii) the product map ``B1 (x) B2 -> H^{2k}`` is injective.
    Together they force ``eta1 . eta2 = 0`` with both components nonzero
    to be impossible.
    """
    if B1.degree != B2.degree:
        raise ValueError("B1 and B2 must live in the same degree")
    if B1.intersect(B2).dim:
        raise ValueError("B1 and B2 overlap; they must be independent subspaces")
    e1, e2 = B1.elements(), B2.elements()
    deg = 2 * B1.degree
    p11 = Subspace.span(ring, deg, [ring.cup(x, y) for x in e1 for y in e1])
    p12_elems = [ring.cup(x, y) for x in e1 for y in e2]
    p12 = Subspace.span(ring, deg, p12_elems)
    p22 = Subspace.span(ring, deg, [ring.cup(x, y) for x in e2 for y in e2])
    total = (p11 + p12 + p22).dim
    independent = total == p11.dim + p12.dim + p22.dim
    tensor_rank = rank([x.coords for x in p12_elems], ring.basis(deg))
    return ZeroSquareVerdict(independent, (p11.dim, p12.dim, p22.dim), tensor_rank, B1.dim * B2.dim)


# --------------------------------------------------------------------------
# ring-law checks


def check_associativity(ring: GradedRing):
    """Verify ``(xy)z = x(yz)`` on every basis triple.

    Only triples where one side can be nonzero are expanded; all others
    vanish on both sides by sparsity. Returns ``(ok, witness, checked)``.
    """
    right = defaultdict(list)
    left = defaultdict(list)
    for (p, i, q, j) in ring.table:
        right[(p, i)].append((q, j))
        left[(q, j)].append((p, i))
    triples = set()
    for (p, i, q, j), out in ring.table.items():
        for k in out:
            for z in right[(p + q, k)]:
                triples.add(((p, i), (q, j), z))
            for x in left[(p + q, k)]:
                triples.add((x, (p, i), (q, j)))
    for x, y, z in sorted(triples):
        ex, ey, ez = (ring.basis_element(*t) for t in (x, y, z))
        lhs = ring.cup(ring.cup(ex, ey), ez)
        rhs = ring.cup(ex, ring.cup(ey, ez))
        if lhs != rhs:
            return False, (x, y, z), len(triples)
    return True, None, len(triples)


def check_graded_commutativity(ring: GradedRing):
    """Verify ``xy = (-1)^{|x||y|} yx`` on every basis pair."""
    for (p, i, q, j), out in ring.table.items():
        sign = -1 if (p * q) % 2 else 1
        back = ring.table.get((q, j, p, i), {})
        if {k: sign * v for k, v in out.items()} != back:
            return False, ((p, i), (q, j))
    return True, None


def pairing_rows(ring: GradedRing, k: int) -> list[dict]:
    """Rows of the Poincare pairing ``H^k x H^{top-k} -> Q`` (sparse)."""
    top = ring.top_degree
    rows = [dict() for _ in range(ring.dim(k))]
    for (p, i, q, j), out in ring.table.items():
        if p == k and q == top - k and out.get(0):
            rows[i][j] = out[0] * ring.orientation
    return rows


def pairing_ranks(ring: GradedRing) -> list[int]:
    return [rank(pairing_rows(ring, k), ring.basis(ring.top_degree - k))
            for k in range(ring.top_degree + 1)]


def is_poincare_nondegenerate(ring: GradedRing) -> bool:
    return pairing_ranks(ring) == ring.betti()


# --------------------------------------------------------------------------
# text dump


def _offsets(ring: GradedRing) -> list[int]:
    out, acc = [], 0
    for k in range(ring.top_degree + 1):
        out.append(acc)
        acc += ring.dim(k)
    return out


def dump_structure_constants(ring: GradedRing) -> str:
    """Sparse text form: one ``degree i j k numerator denominator`` line per constant.

    ``i``, ``j``, ``k`` are global basis indices (ordered by degree, then
    position) and ``degree`` is the degree of the product ``e_k``.
    """
    off = _offsets(ring)
    lines = [f"# ring {ring.name} top {ring.top_degree} orientation {fstr(ring.orientation)}"]
    for k in range(ring.top_degree + 1):
        for i, lab in enumerate(ring.labels[k]):
            lines.append(f"# basis {off[k] + i} {k} {lab}")
    for (p, i, q, j) in sorted(ring.table):
        for k, c in sorted(ring.table[(p, i, q, j)].items()):
            lines.append(f"{p + q} {off[p] + i} {off[q] + j} {off[p + q] + k} "
                         f"{c.numerator} {c.denominator}")
    return "\n".join(lines) + "\n"


def load_structure_constants(text: str) -> GradedRing:
    name, top, orientation = "ring", None, Fraction(1)
    basis = []
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("# ring"):
            parts = line.split()
            name, top, orientation = parts[2], int(parts[4]), Fraction(parts[6])
        elif line.startswith("# basis"):
            _, _, g, deg, lab = line.split(maxsplit=4)
            basis.append((int(g), int(deg), lab))
        elif not line.startswith("#"):
            entries.append(tuple(int(t) for t in line.split()))
    if top is None:
        raise ValueError("missing '# ring' header")
    labels = [[] for _ in range(top + 1)]
    place = {}
    for g, deg, lab in sorted(basis):
        place[g] = (deg, len(labels[deg]))
        labels[deg].append(lab)
    table: dict = {}
    for deg, gi, gj, gk, num, den in entries:
        p, i = place[gi]
        q, j = place[gj]
        r, k = place[gk]
        if r != deg or p + q != deg:
            raise ValueError(f"inconsistent degrees in line {deg} {gi} {gj} {gk}")
        table.setdefault((p, i, q, j), {})[k] = Fraction(num, den)
    return GradedRing(name, labels, table, orientation)
