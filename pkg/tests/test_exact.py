from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_obstruct._exact import det, dense_to_rows, fstr, frac, matmul, nullspace, rank, sqrt_upper

small = st.integers(-5, 5)
square = st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                      min_size=n, max_size=n))
rect = st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(
    lambda s: st.lists(st.lists(small, min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0]))


def test_fstr_round_trips():
    for x in (Fraction(3, 4), Fraction(-7, 2), Fraction(5), Fraction(0)):
        assert frac(fstr(x)) == x
    assert fstr(Fraction(6, 3)) == "2"
    assert fstr(Fraction(-1, 3)) == "-1/3"


@settings(max_examples=60, deadline=None)
@given(square)
def test_det_matches_sympy(m):
    assert det(m) == sp.Matrix(m).det()


@settings(max_examples=60, deadline=None)
@given(rect)
def test_rank_and_nullspace(m):
    cols = list(range(len(m[0])))
    rows = dense_to_rows(m)
    r = rank(rows, cols)
    assert r == sp.Matrix(m).rank()
    kernel = nullspace(rows, cols)
    assert len(kernel) == len(cols) - r
    for vec in kernel:
        for row in m:
            assert sum(Fraction(row[j]) * vec.get(j, 0) for j in cols) == 0


def test_matmul_identity():
    a = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    eye = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    assert matmul(a, eye) == a


@given(st.fractions(min_value=0, max_value=1000, max_denominator=50))
def test_sqrt_upper_bounds(q):
    s = sqrt_upper(q)
    assert s >= 0 and s * s >= q
