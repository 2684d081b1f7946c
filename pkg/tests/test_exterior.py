from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_obstruct._exact import matmul
from kahler_obstruct.exterior import (
    AlgebraError,
    ExteriorAlgebra,
    char_poly,
    companion_matrix,
    torus_ring,
    wedge,
    wedge_power_map,
)

from oracles import charpoly, signature, wedge_top_value

int_matrix = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=60, deadline=None)
@given(int_matrix)
def test_char_poly_matches_sympy(m):
    assert char_poly(m) == charpoly(m)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_companion_matrix_recovers_polynomial(low):
    f = low + [1]
    assert char_poly(companion_matrix(f)) == f


def test_companion_needs_monic():
    with pytest.raises(ValueError):
        companion_matrix([1, 2])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(*[st.lists(st.lists(st.integers(-2, 2), min_size=n,
                                                                        max_size=n), min_size=n, max_size=n)] * 2)))
def test_wedge_power_is_functorial(pair):
    a, b = pair
    ab = [[int(x) for x in r] for r in matmul(a, b)]
    lhs = wedge_power_map(ab, 2)
    rhs = matmul(wedge_power_map(b, 2), wedge_power_map(a, 2))
    assert lhs == [[int(x) for x in r] for r in rhs]


def test_wedge_square_eigenvalues_are_pair_products():
    f = [1, -1, 0, 0, 1]
    w = wedge_power_map(companion_matrix(f), 2)
    roots = np.roots(list(reversed(f)))
    products = sorted((a * b for a, b in combinations(roots, 2)), key=lambda z: (round(z.real, 8), z.imag))
    ev = sorted(np.linalg.eigvals(np.array(w, dtype=float)), key=lambda z: (round(z.real, 8), z.imag))
    assert np.allclose(products, ev, atol=1e-8)


@settings(max_examples=80, deadline=None)
@given(st.permutations(range(6)), st.integers(1, 5))
def test_wedge_signs_match_permutation_parity(perm, cut):
    alg = ExteriorAlgebra(6)
    left = alg.gen(*[i + 1 for i in perm[:cut]])
    right = alg.gen(*[i + 1 for i in perm[cut:]])
    assert alg.evaluate_top(wedge(left, right)) == wedge_top_value([perm[:cut], perm[cut:]], 6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), st.lists(st.integers(1, 5), min_size=1, max_size=3))
def test_graded_commutativity(i, j):
    alg = ExteriorAlgebra(5)
    x, y = alg.gen(*i), alg.gen(*j)
    sign = (-1) ** (x.degree * y.degree)
    assert wedge(x, y).coords == {k: sign * v for k, v in wedge(y, x).coords.items()}


@pytest.mark.parametrize("n", [4, 8])
def test_middle_pairing_is_nondegenerate_symmetric(n):
    alg = ExteriorAlgebra(n)
    p, q, z = signature(alg.pairing_matrix(n // 2))
    assert z == 0 and p + q == alg.dim(n // 2)


def test_errors():
    with pytest.raises(ValueError):
        ExteriorAlgebra(3).gen(4)
    with pytest.raises(AlgebraError):
        wedge(ExteriorAlgebra(2).gen(1), ExteriorAlgebra(3).gen(1))
    with pytest.raises(ValueError):
        torus_ring(0)


def test_torus_ring_betti():
    assert torus_ring(2).betti() == [1, 4, 6, 4, 1]
    assert torus_ring(3).betti() == [1, 6, 15, 20, 15, 6, 1]
