import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_obstruct.blowup import (
    SUPPORTED,
    BlowupDatum,
    blowup_at_points,
    exceptional_power,
    point_restriction,
    point_ring,
    segre,
)
from kahler_obstruct.exterior import torus_ring
from kahler_obstruct.graded import check_associativity, check_graded_commutativity, is_poincare_nondegenerate, \
    kummer_surface_ring
from kahler_obstruct.polynomial import QPoly

from oracles import segre_series


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_segre_matches_series_inverse(r):
    cs = sp.symbols(f"c1:{r + 1}")
    s = segre(list(cs), 5, sp.Integer(1))
    ref = segre_series(cs, 5)
    assert all(sp.expand(a - b) == 0 for a, b in zip(s.classes, ref))
    assert all(sp.expand(s.recursion_residual(m)) == 0 for m in range(1, 6))


def test_segre_on_polynomials():
    c1, c2 = QPoly.var("c1"), QPoly.var("c2")
    s = segre([c1, c2], 3, QPoly.const(1))
    assert s[1] == -c1 and s[2] == c1 * c1 - c2
    assert s[3] == -(c1 * c1 * c1) + 2 * c1 * c2


def test_segre_supported_propagates():
    s = segre([SUPPORTED], 2, SUPPORTED)
    assert s[2] is SUPPORTED or str(s[2]) == str(SUPPORTED)


@pytest.mark.parametrize("n, expected", [(2, -1), (3, 1), (4, -1)])
def test_top_exceptional_power_of_a_point(n, expected):
    ambient = torus_ring(n)
    datum = BlowupDatum(ambient, point_ring(), n, point_restriction())
    term = exceptional_power(n, datum, ambient.one())
    assert term.branch == "codim" and term.number(datum) == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 5))
def test_below_codim_and_overflow(k, idx):
    ambient = torus_ring(3)
    datum = BlowupDatum(ambient, point_ring(), 3, point_restriction())
    alpha = ambient.basis_element(2, idx)
    term = exceptional_power(k, datum, alpha)
    if k < 3:
        assert term.branch == "below-codim" and term.value is None
    else:
        assert term.branch == "overflow" and term.flagged


def test_blowup_datum_validation():
    with pytest.raises(ValueError):
        BlowupDatum(None, point_ring(), 1, point_restriction())
    with pytest.raises(ValueError):
        exceptional_power(0, BlowupDatum(None, point_ring(), 2, point_restriction()), point_ring().one())


@pytest.mark.parametrize("base, count", [(torus_ring(2), 1), (torus_ring(2), 3), (kummer_surface_ring(), 2),
                                         (torus_ring(3), 1)])
def test_blown_up_ring(base, count):
    ring = blowup_at_points(base, count)
    r = base.top_degree // 2
    betti = ring.betti()
    for a in range(1, r):
        assert betti[2 * a] == base.betti()[2 * a] + count
    assert check_associativity(ring)[0] and check_graded_commutativity(ring)[0]
    assert is_poincare_nondegenerate(ring)
    e = ring.gen("E1")
    assert ring.evaluate_top(e ** r) == (-1) ** (r - 1)
    assert (e * ring.gen(ring.labels[2][0])).is_zero()
    if count > 1:
        assert (e * ring.gen("E2")).is_zero()
