"""Independent reference computations used only by the tests.

None of these call into the package: they use sympy, numpy and plain
permutation arithmetic so that an agreement is a genuine second route.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
import sympy as sp

X = sp.Symbol("x")


def charpoly(matrix) -> list[int]:
    """Characteristic polynomial, constant term first."""
    coeffs = sp.Matrix(matrix).charpoly(X).all_coeffs()
    return [int(c) for c in reversed(coeffs)]


def signature(matrix, tol: float = 1e-9) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts by floating point."""
    a = np.array([[float(v) for v in row] for row in matrix])
    ev = np.linalg.eigvalsh(a)
    scale = max(1.0, float(np.max(np.abs(ev)))) if len(ev) else 1.0
    return (int(np.sum(ev > tol * scale)), int(np.sum(ev < -tol * scale)),
            int(np.sum(np.abs(ev) <= tol * scale)))


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it repeats)."""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def wedge_top_value(subsets, generators: int) -> int:
    """Coefficient of e_1..e_N in a wedge of basis monomials given as index tuples."""
    flat = [i for s in subsets for i in s]
    if sorted(flat) != list(range(generators)):
        return 0
    return permutation_sign(flat)


def segre_series(chern, L: int) -> list:
    """Segre classes as coefficients of 1 / c_t in the series ring."""
    t = sp.Symbol("t")
    c = 1 + sum(ci * t ** (i + 1) for i, ci in enumerate(chern))
    ser = sp.series(1 / c, t, 0, L + 1).removeO()
    return [sp.expand(ser.coeff(t, k)) for k in range(L + 1)]


def factor_degrees_mod(f, p: int) -> list[int]:
    """Degrees of the irreducible factors of f mod p, with multiplicity."""
    poly = sp.Poly(list(reversed(f)), X, modulus=p)
    _, factors = poly.factor_list()
    return sorted(g.degree() for g, e in factors for _ in range(e))


def real_root_count(f) -> int:
    return len(sp.Poly(list(reversed(f)), X).real_roots())


def pair_products_distinct(f, digits: int = 30) -> bool:
    roots = sp.Poly(list(reversed(f)), X).nroots(n=digits)
    prods = [complex(a * b) for a, b in combinations(roots, 2)]
    return all(abs(p - q) > 1e-8 for p, q in combinations(prods, 2))


def galois_group_order(f) -> int:
    """Order of Gal(f) by sympy's tabulated algorithm (degree <= 6)."""
    G, _ = sp.galois_group(sp.Poly(list(reversed(f)), X), by_name=False)
    return G.order()


def kummer_square_table(a, b, u, v) -> Fraction:
    """C^2 alpha^2 / A^2 on the blown-up Kummer square from explicit pair products.

    With alpha pulled back from the left factor, alpha^2 is a top class of
    the left factor, so every product involving a left divisor vanishes;
    R_i R_j alpha^2 = D_i.D_j = -2 delta_ij; an exceptional divisor over a
    codimension-2 centre satisfies E^2 pi^*beta = -beta|_Z, which gives -1
    for both the diagonal and the graph; E pi^*beta = 0, and the two
    centres meet nothing else in this product.
    """
    pair = {}
    names = [f"L{i}" for i in range(len(a))] + [f"R{i}" for i in range(len(b))] + ["Dd", "Dphi"]
    coeff = dict(zip(names, list(a) + list(b) + [u, v]))
    for x in names:
        for y in names:
            val = 0
            if x == y and x.startswith("R"):
                val = -2
            elif x == y and x in ("Dd", "Dphi"):
                val = -1
            pair[x, y] = val
    return sum(Fraction(coeff[x]) * Fraction(coeff[y]) * pair[x, y] for x in names for y in names)


def k3_square_table(gram_n, x, y, u, v) -> Fraction:
    """Scalar lambda of c^2 t t' = lambda <t, t'> on the blown-up K3 square.

    Same pair-product reasoning as :func:`kummer_square_table`, with the
    right-factor divisor products given by the Neron-Severi Gram matrix.
    """
    g = sp.Matrix(gram_n)
    yv = sp.Matrix(y)
    val = (yv.T * g * yv)[0, 0] - Fraction(u) ** 2 - Fraction(v) ** 2
    return Fraction(str(sp.nsimplify(val)))
