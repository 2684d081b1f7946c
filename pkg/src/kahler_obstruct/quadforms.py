"""Symmetric forms over Q: exact inertia, isotropy witnesses, admissible signatures.

Signatures come from symmetric Gaussian congruence on a sparse copy of the
Gram matrix: a nonzero diagonal pivot contributes its sign; when every
remaining diagonal entry is zero, an off-diagonal pivot ``b`` splits off a
hyperbolic plane ``[[0, b], [b, 0]]`` contributing ``(1, 1)``. No
eigenvalues and no floating point are involved.

The Hodge index theorem, as used here, says that on primitive classes a
Kahler form gives ``q_c`` signature ``(2a, d - 2a)`` with ``a`` the
dimension of the (2,0) part; :func:`admissible_signatures` enumerates
those pairs and :func:`parity_contradiction` compares an observed
signature against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import frac, fstr, nullspace

__all__ = [
    "InputError",
    "IsotropyFailure",
    "SymmetricForm",
    "SignatureResult",
    "AdmissibleSignatureSet",
    "ParityVerdict",
    "IsotropicWitness",
    "QuadraticSpaceData",
    "signature",
    "sparse_signature",
    "admissible_signatures",
    "parity_contradiction",
    "max_isotropic_dimension",
    "isotropic_witness_vanishing_products",
    "gram_qc",
    "e8_cartan",
    "k3_lattice",
    "oguiso_quadratic_space",
    "format_matrix",
]


class InputError(ValueError):
    pass


class IsotropyFailure(ValueError):
    def __init__(self, pair, product):
        super().__init__(f"product of basis vectors {pair[0]} and {pair[1]} is {product}, not zero")
        self.pair = pair
        self.product = product


@dataclass(frozen=True)
class SymmetricForm:
    gram: tuple[tuple[Fraction, ...], ...]

    def __init__(self, gram: Sequence[Sequence]):
        rows = tuple(tuple(frac(v) for v in r) for r in gram)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InputError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"Gram matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", rows)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def scaled(self, c) -> "SymmetricForm":
        c = frac(c)
        return SymmetricForm([[c * v for v in r] for r in self.gram])

    def congruent(self, p: Sequence[Sequence]) -> "SymmetricForm":
        """``P^t F P``."""
        n = self.dim
        p = [[frac(v) for v in r] for r in p]
        fp = [[sum(self.gram[i][k] * p[k][j] for k in range(n) if p[k][j]) for j in range(n)]
              for i in range(n)]
        return SymmetricForm([[sum(p[k][i] * fp[k][j] for k in range(n) if p[k][i])
                               for j in range(n)] for i in range(n)])

    def is_scalar_multiple_of(self, other: "SymmetricForm"):
        """The scalar ``s`` with ``self = s * other``, or None."""
        if self.dim != other.dim:
            return None
        scalar = None
        for r1, r2 in zip(self.gram, other.gram):
            for a, b in zip(r1, r2):
                if b == 0:
                    if a != 0:
                        return None
                    continue
                s = a / b
                if scalar is None:
                    scalar = s
                elif s != scalar:
                    return None
        return Fraction(0) if scalar is None else scalar

    def to_text(self) -> list[list[str]]:
        return [[fstr(v) for v in r] for r in self.gram]


@dataclass(frozen=True)
class SignatureResult:
    p: int
    q: int
    r0: int = 0

    @property
    def dim(self) -> int:
        return self.p + self.q + self.r0

    @property
    def nondegenerate(self) -> bool:
        return self.r0 == 0

    def pair(self) -> tuple[int, int]:
        return (self.p, self.q)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "r0": self.r0}


def sparse_signature(entries: dict, size: int) -> SignatureResult:
    """Inertia of a symmetric matrix given as ``{(i, j): value}`` (both triangles)."""
    rows: dict[int, dict[int, Fraction]] = {i: {} for i in range(size)}
    for (i, j), v in entries.items():
        v = frac(v)
        if v:
            rows[i][j] = v
    for i in rows:
        for j, v in rows[i].items():
            if rows[j].get(i) != v:
                raise InputError(f"matrix is not symmetric at ({i}, {j})")
    p = q = r0 = 0

    def remove(i):
        for j in rows.pop(i):
            if j in rows:
                rows[j].pop(i, None)

    while rows:
        empty = [i for i, r in rows.items() if not r]
        for i in empty:
            r0 += 1
            del rows[i]
        if not rows:
            break
        diag = [i for i, r in rows.items() if r.get(i)]
        if diag:
            i = min(diag, key=lambda k: (len(rows[k]), k))
            d = rows[i][i]
            if d > 0:
                p += 1
            else:
                q += 1
            nbrs = [(j, v) for j, v in rows[i].items() if j != i]
            remove(i)
            for j, vj in nbrs:
                for k, vk in nbrs:
                    nv = rows[j].get(k, 0) - vj * vk / d
                    if nv:
                        rows[j][k] = nv
                    else:
                        rows[j].pop(k, None)
            continue
        i = min(rows, key=lambda k: (len(rows[k]), k))
        j = min(rows[i], key=lambda k: (len(rows[k]), k))
        b = rows[i][j]
        p += 1
        q += 1
        ni = [(k, v) for k, v in rows[i].items() if k not in (i, j)]
        nj = [(k, v) for k, v in rows[j].items() if k not in (i, j)]
        remove(i)
        remove(j)
        # Schur complement of [[0, b], [b, 0]]
        upd: dict = {}
        for k, vki in ni:
            for l, vlj in nj:
                upd[(k, l)] = upd.get((k, l), 0) + vki * vlj / b
                upd[(l, k)] = upd.get((l, k), 0) + vki * vlj / b
        for (k, l), dv in upd.items():
            nv = rows[k].get(l, 0) - dv
            if nv:
                rows[k][l] = nv
            else:
                rows[k].pop(l, None)
    return SignatureResult(p, q, r0)


def signature(form) -> SignatureResult:
    """Exact inertia ``(p, q, r0)`` of a symmetric rational matrix."""
    if not isinstance(form, SymmetricForm):
        form = SymmetricForm(form)
    entries = {(i, j): v for i, r in enumerate(form.gram) for j, v in enumerate(r) if v}
    return sparse_signature(entries, form.dim)


@dataclass(frozen=True)
class AdmissibleSignatureSet:
    d: int
    pairs: frozenset

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def admissible_signatures(d: int) -> AdmissibleSignatureSet:
    """``{(2a, d - 2a) : 0 <= 2a <= d}``."""
    if d < 1:
        raise InputError("dimension must be positive")
    return AdmissibleSignatureSet(d, frozenset((2 * a, d - 2 * a) for a in range(d // 2 + 1)))


@dataclass(frozen=True)
class ParityVerdict:
    kind: str  # contradiction | consistent | degenerate
    observed: SignatureResult
    a: int | None
    reason: str

    @property
    def is_contradiction(self) -> bool:
        return self.kind in ("contradiction", "degenerate")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "observed": self.observed.to_dict(), "a": self.a,
                "reason": self.reason}


def parity_contradiction(observed: SignatureResult, admissible: AdmissibleSignatureSet) -> ParityVerdict:
    if observed.dim != admissible.d:
        raise InputError("observed signature and admissible set have different dimensions")
    if observed.r0:
        return ParityVerdict("degenerate", observed, None,
                             "q_c is degenerate, but an ample class makes it nondegenerate "
                             "on primitive classes")
    if observed.pair() in admissible:
        return ParityVerdict("consistent", observed, observed.p // 2,
                             f"signature {observed.pair()} = (2a, d-2a) with a = {observed.p // 2}")
    return ParityVerdict("contradiction", observed, None,
                         f"signature {observed.pair()} has odd positive part; admissible "
                         f"signatures have the form (2a, {admissible.d}-2a)")


def max_isotropic_dimension(sig: SignatureResult) -> int:
    """Largest real isotropic subspace: ``min(p, q) + r0``."""
    return min(sig.p, sig.q) + sig.r0


@dataclass(frozen=True)
class IsotropicWitness:
    basis: tuple
    dimension: int
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {"basis": [repr(b) for b in self.basis], "dimension": self.dimension, "mode": self.mode}


def isotropic_witness_vanishing_products(ring, S) -> IsotropicWitness:
    """Certify that all products of basis vectors of ``S`` vanish in ``ring``.

    Vanishing products make ``S`` isotropic for ``q_c`` for every ``c`` at
    once. ``S`` is a :class:`~kahler_obstruct.graded.Subspace` or a list of
    elements.
    """
    elems = S.elements() if hasattr(S, "elements") else list(S)
    for i, x in enumerate(elems):
        for j in range(i, len(elems)):
            prod = ring.cup(x, elems[j])
            if not prod.is_zero():
                raise IsotropyFailure((x, elems[j]), prod)
    return IsotropicWitness(tuple(elems), len(elems))


def gram_qc(model, c, basis: Sequence[str]) -> SymmetricForm:
    """Gram matrix of ``q_c`` on the classes ``basis`` of a rewrite model.

    ``c`` maps coefficient names to rationals (missing names count as 0).
    Entries are polarized evaluations ``c^{d-2} s_i s_j``.
    """
    from .rewrite import symbolic_gram

    sym = symbolic_gram(model, tuple(basis))
    values = {k: frac(v) for k, v in (c or {}).items()}
    return SymmetricForm([[entry(values) for entry in row] for row in sym])


# --------------------------------------------------------------------------
# lattices


def e8_cartan() -> list[list[int]]:
    """Cartan matrix of E8 (positive definite): chain 1-..-7, node 8 on node 3."""
    edges = [(i, i + 1) for i in range(6)] + [(2, 7)]
    m = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return m


def k3_lattice() -> list[list[int]]:
    """Gram matrix of ``U^3 + E8(-1)^2`` (rank 22, signature (3, 19))."""
    g = [[0] * 22 for _ in range(22)]
    for k in range(3):
        g[2 * k][2 * k + 1] = g[2 * k + 1][2 * k] = 1
    e8 = e8_cartan()
    for block in range(2):
        off = 6 + 8 * block
        for i in range(8):
            for j in range(8):
                g[off + i][off + j] = -e8[i][j]
    return g


@dataclass(frozen=True)
class QuadraticSpaceData:
    t: int
    rho: int
    gram_n: tuple
    gram_t: tuple
    t_basis: tuple  # rows in lattice coordinates

    def to_dict(self) -> dict:
        return {"t": self.t, "rho": self.rho,
                "gram_T": [[fstr(v) for v in r] for r in self.gram_t],
                "gram_N": [[fstr(v) for v in r] for r in self.gram_n]}


def oguiso_quadratic_space(t: int) -> QuadraticSpaceData:
    """``H^2`` of a K3 split as ``T + N`` with ``N`` negative definite of rank ``22 - t``.

    ``N`` is spanned by the last ``rho`` vectors of the ``E8(-1)^2`` block
    and ``T = N^perp``; so ``T`` has signature ``(3, t - 3)``.
    """
    if t % 2 or t < 6 or t > 22:
        raise InputError("t must be even with 6 <= t <= 22 (rho = 22 - t <= 16)")
    rho = 22 - t
    g = k3_lattice()
    n_idx = list(range(22 - rho, 22))
    gram_n = tuple(tuple(Fraction(g[i][j]) for j in n_idx) for i in n_idx)
    eqs = [{j: Fraction(g[i][j]) for j in range(22) if g[i][j]} for i in n_idx]
    basis = nullspace(eqs, list(range(22)))
    vecs = [[b.get(k, Fraction(0)) for k in range(22)] for b in basis]
    gram_t = tuple(tuple(sum(u[a] * g[a][b] * v[b] for a in range(22) if u[a] for b in range(22) if v[b])
                         for v in vecs) for u in vecs)
    return QuadraticSpaceData(t, rho, gram_n, gram_t, tuple(tuple(v) for v in vecs))


def format_matrix(form: SymmetricForm) -> str:
    """Exact fraction text, one row per line."""
    return "\n".join(" ".join(fstr(v) for v in r) for r in form.gram)
