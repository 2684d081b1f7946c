from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_obstruct.polynomial import QPoly
from kahler_obstruct.quadforms import gram_qc, k3_lattice
from kahler_obstruct.rewrite import (
    InputError,
    UnsupportedMonomial,
    confluence_check,
    evaluate,
    wedge_pairing_labels,
    x2_model,
    x3_model,
    x4_model,
    x5_model,
)

from oracles import k3_square_table, kummer_square_table, wedge_top_value

rat = st.fractions(min_value=-5, max_value=5, max_denominator=4)
X2 = x2_model(2)
X2_SMALL = x2_model(2, exceptional=2)
X4 = x4_model(10)


def _values(model, draw):
    return {n: draw(rat) for n in model.coefficient_names()}


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_kummer_square_against_hand_table(data):
    vals = _values(X2, data.draw)
    a = [vals[f"a{i}"] for i in range(1, 17)]
    b = [vals[f"b{i}"] for i in range(1, 17)]
    got = evaluate(X2, 2, ("A", "A"), values=vals)
    expected = kummer_square_table(a, b, vals["u"], vals["v"])
    assert got.coefficient(("A", "A")) == QPoly.const(expected)


def test_kummer_square_symbolic_has_no_left_coefficients():
    value = evaluate(X2, 2, ("A", "A"))
    assert len(value.terms) == 1
    poly = value.coefficient(("A", "A"))
    assert not any(v.startswith("a") for v in poly.variables())
    assert poly.is_homogeneous(2)
    assert poly.terms[(("u", 2),)] == -1 and poly.terms[(("b7", 2),)] == -2


@pytest.mark.parametrize("n, power, alphas", [(2, 3, ("A",)), (3, 5, ("A",)), (3, 4, ("A", "A"))])
def test_vanishing(n, power, alphas):
    assert evaluate(x2_model(n), power, alphas).is_zero()


@pytest.mark.parametrize("strategy", ["sequential", "multinomial"])
@pytest.mark.parametrize("power, alphas", [(2, ("A", "A")), (3, ("A",)), (2, ("e12", "e34"))])
def test_strategies_agree(strategy, power, alphas):
    assert evaluate(X2_SMALL, power, alphas, strategy=strategy) == evaluate(X2_SMALL, power, alphas)


def test_sequential_strategy_on_full_model():
    assert evaluate(X2, 2, ("A", "A"), strategy="sequential") == evaluate(X2, 2, ("A", "A"))


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)))
def test_resolved_pairing_is_scalar_times_wedge(perm):
    labels = X2_SMALL.alpha_basis
    s, t = labels[perm[0]], labels[perm[1]]
    scalar = evaluate(X2_SMALL, 2, ("A", "A")).coefficient(("A", "A"))
    resolved = evaluate(X2_SMALL, 2, (s, t)).resolve(X2_SMALL.alpha_pairing)
    subsets = [tuple(int(c) - 1 for c in lab[1:]) for lab in (s, t)]
    assert resolved == scalar * wedge_top_value(subsets, 4)


def test_wedge_pairing_labels():
    assert wedge_pairing_labels(("e12", "e34"), 4) == 1
    assert wedge_pairing_labels(("e13", "e24"), 4) == -1
    assert wedge_pairing_labels(("e12", "e13"), 4) == 0
    with pytest.raises(ValueError):
        wedge_pairing_labels(("e1",), 4)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_multilinear_in_the_coefficients(data):
    v1, v2 = _values(X2_SMALL, data.draw), _values(X2_SMALL, data.draw)
    sym = evaluate(X2_SMALL, 2, ("A", "A"))
    for vals in (v1, v2):
        assert evaluate(X2_SMALL, 2, ("A", "A"), values=vals) == sym.specialize(vals)
    # C^2 is a quadratic form: q(x + y) + q(x - y) = 2 q(x) + 2 q(y)
    q = sym.coefficient(("A", "A"))
    plus = {k: v1[k] + v2[k] for k in v1}
    minus = {k: v1[k] - v2[k] for k in v1}
    assert q(plus) + q(minus) == 2 * q(v1) + 2 * q(v2)


@pytest.mark.parametrize("m, q, expected", [(1, 1, -1), (2, 4, -4), (2, 1, -1), (3, Fraction(1, 2), Fraction(-1, 2))])
def test_product_identity(m, q, expected):
    model = x3_model(2, m, q, exceptional=2)
    value = evaluate(model, 2 + m, ("A", "A")).coefficient(("A", "A"))
    base = evaluate(X2_SMALL, 2, ("A", "A")).coefficient(("A", "A"))
    assert value == base * (-expected)
    raw = x3_model(2, m, q, exceptional=2, normalized=False)
    assert evaluate(raw, 2 + m, ("A", "A")).coefficient(("A", "A")) == base * comb(m + 2, 2) * q


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_k3_square_against_hand_table(data):
    vals = _values(X4, data.draw)
    rho = X4.params["rho"]
    x = [vals[f"x{k}"] for k in range(1, rho + 1)]
    y = [vals[f"y{k}"] for k in range(1, rho + 1)]
    gram_n = X4.base.gram_n
    lam = k3_square_table(gram_n, x, y, vals["u"], vals["v"])
    form = gram_qc(X4, vals, X4.alpha_basis)
    ref = [[Fraction(v) for v in r] for r in X4.alpha_gram]
    assert form.gram == tuple(tuple(lam * v for v in r) for r in ref)


def test_k3_cube_vanishes():
    assert evaluate(X4, 3, ("t1",)).is_zero()
    assert evaluate(x4_model(6), 3, ("t3",)).is_zero()


@pytest.mark.parametrize("d, factor", [(1, lambda z: 3 * z), (3, lambda z: 10 * 5 * z ** 3)])
def test_hypersurface_factor_scaling(d, factor):
    base = x4_model(6)
    model = x5_model(6, d)
    lam0 = evaluate(base, 2, ("t1", "t1")).coefficient(("t1", "t1"))
    lam = evaluate(model, model.dim - 2, ("t1", "t1")).coefficient(("t1", "t1"))
    assert lam == lam0 * factor(QPoly.var("z"))


def test_k3_factor_scaling():
    model = x5_model(6, 2)
    vals = {"z1": 1, "z2": 2, "z7": -1, "u": 1, "y3": 2}
    lam0 = evaluate(x4_model(6), 2, ("t1", "t1"), values=vals).coefficient(("t1", "t1")).constant()
    lam = evaluate(model, 4, ("t1", "t1"), values=vals).coefficient(("t1", "t1")).constant()
    g = k3_lattice()
    z = [vals.get(f"z{i}", 0) for i in range(1, 23)]
    qz = sum(z[i] * g[i][j] * z[j] for i in range(22) for j in range(22))
    assert qz and lam == comb(4, 2) * qz * lam0


def test_input_errors():
    with pytest.raises(InputError):
        x2_model(1)
    with pytest.raises(InputError):
        x3_model(2, 0, 1)
    with pytest.raises(InputError):
        x3_model(2, 1, 0)
    with pytest.raises(InputError):
        x4_model(7)
    with pytest.raises(InputError):
        x4_model(10, rho=11)
    with pytest.raises(InputError):
        x5_model(10, 0)
    with pytest.raises(UnsupportedMonomial):
        evaluate(X2, 3, ("A", "A"))
    with pytest.raises(ValueError):
        evaluate(X2_SMALL, 2, ("A", "A"), strategy="bogus")


def test_confluence_passes_and_catches_a_corrupted_rule():
    for model in (X2, x3_model(2, 2, 4), X4, x5_model(10, 3)):
        assert confluence_check(model, 60, seed=3).passed
    bad = X2.corrupted("exceptional-low")
    report = confluence_check(bad, 100, seed=0)
    assert not report.passed
    assert report.witness["monomial"] and len(set(report.witness["results"])) > 1
    assert "(corrupted)" in bad.rule_table()
    with pytest.raises(KeyError):
        X2.corrupted("no-such-rule")


@settings(max_examples=10, deadline=None)
@given(st.randoms(use_true_random=False))
def test_result_is_independent_of_rule_order(rnd):
    names = list(X2_SMALL.rule_names)
    rnd.shuffle(names)
    reordered = X2_SMALL.with_rule_order(names)
    for power, alphas in ((2, ("A", "A")), (3, ("A",))):
        assert evaluate(reordered, power, alphas) == evaluate(X2_SMALL, power, alphas)


def test_trace_and_rendering():
    trace = []
    value = evaluate(X2_SMALL, 2, ("A", "A"), trace=trace)
    rules = {step["rule"] for step in trace}
    assert rules and rules <= set(X2_SMALL.rule_names)
    assert value.to_dict() == {"A^2": "-2*b1^2 - 2*b2^2 - u^2 - v^2"}
    assert X2_SMALL.describe() == "x2(n=2)"
    table = X2_SMALL.rule_table()
    assert all(name in table for name in X2_SMALL.rule_names)
    with pytest.raises(ValueError):
        X2_SMALL.with_rule_order(X2_SMALL.rule_names[:-1])
