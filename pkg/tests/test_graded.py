from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_obstruct.exterior import torus_ring
from kahler_obstruct.graded import (
    GradedRing,
    RingMismatch,
    Subspace,
    annihilator,
    check_associativity,
    check_graded_commutativity,
    dump_structure_constants,
    generated_subspace,
    is_poincare_nondegenerate,
    kummer_surface_ring,
    kunneth,
    load_structure_constants,
    orthogonal_complement,
    pairing_rows,
    zero_square_components_check,
)

from oracles import signature


def _dense(rows, size):
    return [[r.get(j, 0) for j in range(size)] for r in rows]


def test_kummer_betti_and_lattice_signature():
    k = kummer_surface_ring()
    assert k.betti() == [1, 0, 22, 0, 1]
    assert signature(_dense(pairing_rows(k, 2), 22)) == (3, 19, 0)
    assert k.evaluate_top(k.gen("D1") * k.gen("D1")) == -2
    assert k.evaluate_top(k.gen("e12") * k.gen("e34")) == 1


def test_kunneth_betti_is_convolution():
    k = kummer_surface_ring()
    kk = kunneth(k, k)
    assert kk.betti() == [1, 0, 44, 0, 486, 0, 44, 0, 1]
    t = kunneth(torus_ring(1), torus_ring(1))
    assert t.betti() == torus_ring(2).betti()
    assert signature(_dense(pairing_rows(t, 2), 6)) == (3, 3, 0)


@pytest.mark.parametrize("ring", [torus_ring(2), kummer_surface_ring(), kunneth(torus_ring(1), torus_ring(2))],
                         ids=["torus2", "kummer", "torus1xtorus2"])
def test_ring_laws_and_duality(ring):
    assert check_associativity(ring)[0]
    assert check_graded_commutativity(ring)[0]
    assert is_poincare_nondegenerate(ring)


def test_associativity_check_finds_tampered_constant():
    ring = torus_ring(2)
    table = {k: dict(v) for k, v in ring.table.items()}
    key = next(k for k in sorted(table) if k[0] == 1 and k[2] == 1)
    table[key] = {i: -c for i, c in table[key].items()}
    broken = GradedRing("broken", ring.labels, table, 1)
    ok, witness, _ = check_associativity(broken)
    assert not ok and witness is not None


coords = st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=4)


@settings(max_examples=50, deadline=None)
@given(coords, coords, st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=3))
def test_cup_associative_and_distributive_on_elements(a, b, c):
    t = torus_ring(2)
    x, y, z = t.element(2, a), t.element(2, b), t.element(1, c)
    assert (x * y) * z == x * (y * z)
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x


def test_dump_round_trip():
    for ring in (torus_ring(2), kummer_surface_ring()):
        back = load_structure_constants(dump_structure_constants(ring))
        assert back.betti() == ring.betti()
        assert back.table == ring.table
        assert back.labels == ring.labels


def test_subspace_operations():
    t = torus_ring(2)
    s = Subspace.span(t, 2, [t.gen("e12"), t.gen("e13")])
    w = Subspace.span(t, 2, [t.gen("e13"), t.gen("e14")])
    assert s.dim == 2 and (s + w).dim == 3 and s.intersect(w).dim == 1
    assert s.intersect(w).contains(t.gen("e13"))
    assert s <= Subspace.whole(t, 2)
    # <e12>^perp in H^2 of T^4 is everything except e34
    perp = orthogonal_complement(t, Subspace.span(t, 2, [t.gen("e12")]))
    assert perp.dim == 5 and not perp.contains(t.gen("e34"))
    ann = annihilator(t, Subspace.span(t, 1, [t.gen("e1")]), 1)
    assert ann == Subspace.span(t, 1, [t.gen("e1")])
    with pytest.raises(RingMismatch):
        s + Subspace.whole(t, 1)


def test_generated_subspace_of_torus_is_everything():
    t = torus_ring(2)
    gens = [t.gen(f"e{i}") for i in range(1, 5)]
    for k in range(5):
        assert generated_subspace(t, gens, k).dim == t.dim(k)


def test_zero_square_check_rejects_overlap():
    t = torus_ring(2)
    s = Subspace.span(t, 2, [t.gen("e12")])
    with pytest.raises(ValueError):
        zero_square_components_check(t, s, s)


def test_mixing_rings_is_rejected():
    with pytest.raises(RingMismatch):
        torus_ring(1).one() * torus_ring(1).one()


def test_orientation_scales_evaluation():
    t = torus_ring(1)
    scaled = GradedRing("scaled", t.labels, t.table, Fraction(3))
    x = scaled.gen("e1") * scaled.gen("e2")
    assert scaled.evaluate_top(x) == 3
    assert scaled.evaluate_top(scaled.point()) == 1
