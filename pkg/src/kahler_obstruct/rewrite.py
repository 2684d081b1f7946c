"""Rewrite models for top-degree monomials on blown-up self-products.

A model describes ``X = Bl(Y x Y)`` blown up along the diagonal and the
graph of an automorphism (optionally times a factor manifold) through
distinguished degree-2 generators:

* ``L{i}`` = ``D_i x Y`` and ``R{i}`` = ``Y x D_i`` for divisor classes
  ``D_i`` of the base ``Y`` (exceptional curves of a Kummer surface, or a
  basis of the Neron-Severi part of a K3 surface),
* ``Dd`` and ``Dphi``, the exceptional divisors over the diagonal and the
  graph,
* ``E{i}``, exceptional divisors over isolated points (K3 models only),
* factor classes (``h`` or ``F{i}``) for products with another manifold,

plus "alpha" classes ``A x Y`` with ``A`` a transcendental class of the
base (``wedge^2 H^1`` of the torus for Kummer bases, ``T`` for K3 bases).
Alphas are symbols; the engine leaves their base pairing as a token
that is resolved against a concrete pairing only on request.

Every monomial evaluation is decided by a named rule. Rules flagged
``class_zero`` certify that the (partial) product vanishes as a
cohomology class, so they may prune partial expansions; all other rules
only speak about top-degree numbers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .exterior import _shuffle_sign
from .polynomial import QPoly, poly_sum

__all__ = [
    "InputError",
    "UnsupportedMonomial",
    "Generator",
    "Rule",
    "Shape",
    "SymbolicValue",
    "RewriteModel",
    "ConfluenceReport",
    "x2_model",
    "x3_model",
    "x4_model",
    "x5_model",
    "evaluate",
    "evaluate_monomial",
    "confluence_check",
    "symbolic_gram",
    "wedge_pairing_labels",
]


class InputError(ValueError):
    pass


class UnsupportedMonomial(ValueError):
    def __init__(self, monomial: str, why: str = "no rule applies"):
        super().__init__(f"unsupported monomial {monomial}: {why}")
        self.monomial = monomial


@dataclass(frozen=True)
class Generator:
    name: str
    family: str  # L | R | Dd | Dphi | E | F
    index: int
    coefficient: str | None  # indeterminate name; None means coefficient 1


# --------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Shape:
    alphas: tuple
    left: tuple  # sorted (index, exponent)
    right: tuple
    p: int
    q: int
    points: tuple
    factor: tuple
    reduced: bool = False  # factor part already integrated out

    @property
    def left_degree(self) -> int:
        return len(self.alphas) + sum(e for _, e in self.left)

    @property
    def right_degree(self) -> int:
        return sum(e for _, e in self.right)

    @property
    def factor_degree(self) -> int:
        return sum(e for _, e in self.factor)

    @property
    def degree(self) -> int:
        return (self.left_degree + self.right_degree + self.p + self.q
                + sum(e for _, e in self.points) + self.factor_degree)

    def text(self, model: "RewriteModel") -> str:
        parts = []
        for a in sorted(set(self.alphas)):
            k = self.alphas.count(a)
            parts.append(a if k == 1 else f"{a}^{k}")
        for fam, items in (("L", self.left), ("R", self.right), ("E", self.points)):
            for i, e in items:
                parts.append(f"{fam}{i}" + (f"^{e}" if e > 1 else ""))
        for name, e in (("Dd", self.p), ("Dphi", self.q)):
            if e:
                parts.append(name + (f"^{e}" if e > 1 else ""))
        for i, e in self.factor:
            name = model.factor.generator_names[i] if model.factor else f"F{i}"
            parts.append(name + (f"^{e}" if e > 1 else ""))
        return "*".join(parts) or "1"


def _shape_from_key(alphas: tuple, key: tuple, gens: Sequence[Generator]) -> Shape:
    left, right, points, factor = [], [], [], []
    p = q = 0
    for gi, e in key:
        g = gens[gi]
        if g.family == "L":
            left.append((g.index, e))
        elif g.family == "R":
            right.append((g.index, e))
        elif g.family == "Dd":
            p += e
        elif g.family == "Dphi":
            q += e
        elif g.family == "E":
            points.append((g.index, e))
        else:
            factor.append((g.index, e))
    return Shape(alphas, tuple(sorted(left)), tuple(sorted(right)), p, q,
                 tuple(sorted(points)), tuple(sorted(factor)))


# --------------------------------------------------------------------------
# values


Value = dict  # token (sorted tuple of alpha labels) -> Fraction


def _vmul(a: Value, b: Value) -> Value:
    out: Value = {}
    for ta, va in a.items():
        for tb, vb in b.items():
            t = tuple(sorted(ta + tb))
            out[t] = out.get(t, 0) + va * vb
    return {t: v for t, v in out.items() if v}


def _vscale(a: Value, c) -> Value:
    return {t: v * c for t, v in a.items() if v * c}


def _token_text(token: tuple) -> str:
    if not token:
        return "1"
    parts = []
    for a in sorted(set(token)):
        k = token.count(a)
        parts.append(a if k == 1 else f"{a}^{k}")
    return "*".join(parts)


class SymbolicValue:
    """``sum_token poly_token * <token>`` with ``<token>`` the base pairing of the alphas."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, QPoly] | None = None):
        self.terms = {t: p for t, p in (terms or {}).items() if not p.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, token: Sequence[str] = ()) -> QPoly:
        return self.terms.get(tuple(sorted(token)), QPoly())

    def variables(self) -> set[str]:
        out = set()
        for p in self.terms.values():
            out |= p.variables()
        return out

    def specialize(self, values: Mapping[str, object]) -> "SymbolicValue":
        return SymbolicValue({t: p.subs(values) for t, p in self.terms.items()})

    def resolve(self, pairing: Callable[[tuple], Fraction | None]) -> QPoly:
        """Replace each token by its base pairing; error if one is symbolic."""
        out = []
        for t, p in self.terms.items():
            v = pairing(t)
            if v is None:
                raise ValueError(f"no concrete pairing for {_token_text(t)}")
            out.append(p * v)
        return poly_sum(out)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*{_token_text(t)}" for t, p in sorted(self.terms.items()))

    def __repr__(self):
        return f"SymbolicValue({self})"

    def to_dict(self) -> dict:
        return {_token_text(t): str(p) for t, p in sorted(self.terms.items())}


# --------------------------------------------------------------------------
# bases and factors


@dataclass(frozen=True)
class KummerBase:
    """Kummer manifold of a complex n-torus: alphas in wedge^2 H^1(T), D_i exceptional divisors."""

    n: int
    count: int

    kind = "kummer"

    def rules(self):
        return [
            ("base-degree", "a product of the wrong degree has no top part"),
            ("wedge-kills-exceptional", "wedge^2 classes restrict to zero on every D_i"),
            ("exceptional-disjoint", "D_i D_j = 0 for i != j"),
            ("exceptional-self", "D_i^n = (-2)^(n-1)"),
            ("wedge-top", "a pure wedge product is left as its pairing token"),
        ]

    def top(self, alphas: tuple, divisors: dict, log) -> Value:
        deg = len(alphas) + sum(divisors.values())
        if deg != self.n:
            log("base-degree")
            return {}
        if alphas and divisors:
            log("wedge-kills-exceptional")
            return {}
        if len(divisors) > 1:
            log("exceptional-disjoint")
            return {}
        if divisors:
            log("exceptional-self")
            return {(): Fraction((-2) ** (self.n - 1))}
        log("wedge-top")
        return {tuple(sorted(alphas)): Fraction(1)}

    def kills(self, alphas: tuple, divisors: Sequence[int]) -> bool:
        """Whether the product vanishes as a class on the base."""
        return bool(alphas) and bool(divisors) or len(set(divisors)) > 1

    def phi_image_orthogonal(self, alphas) -> bool:
        # phi^* preserves the span of the D_i, which wedge^2 classes annihilate
        return bool(alphas)


@dataclass(frozen=True)
class K3Base:
    """K3 surface with H^2 = T + N: alphas in T, divisors a basis of N with Gram ``gram_n``."""

    gram_n: tuple

    n = 2
    kind = "k3"

    def rules(self):
        return [
            ("base-degree", "a product of the wrong degree has no top part"),
            ("transcendental-perp", "T is orthogonal to N"),
            ("ns-pairing", "N_k N_l = Gram_N[k][l]"),
            ("transcendental-top", "alpha beta is left as its pairing token"),
        ]

    def top(self, alphas: tuple, divisors: dict, log) -> Value:
        deg = len(alphas) + sum(divisors.values())
        if deg != 2:
            log("base-degree")
            return {}
        if alphas and divisors:
            log("transcendental-perp")
            return {}
        if divisors:
            log("ns-pairing")
            idx = [i for i, e in divisors.items() for _ in range(e)]
            return {(): Fraction(self.gram_n[idx[0] - 1][idx[1] - 1])}
        log("transcendental-top")
        return {tuple(sorted(alphas)): Fraction(1)}

    def kills(self, alphas: tuple, divisors: Sequence[int]) -> bool:
        # alpha . nu lies in H^4 and pairs to zero, so it vanishes as a class
        return bool(alphas) and bool(divisors)

    def phi_image_orthogonal(self, alphas) -> bool:
        return bool(alphas)


@dataclass(frozen=True)
class FactorModel:
    """Second factor ``M`` of complex dimension ``dim`` with degree-2 generators."""

    name: str
    dim: int
    generator_names: tuple
    coefficients: tuple  # one indeterminate name (or None) per generator
    gram: tuple | None = None  # pairing for surface factors
    top_power: Fraction | None = None  # integral of h^dim for one-generator factors

    def top(self, exps: dict) -> Fraction:
        if sum(exps.values()) != self.dim:
            return Fraction(0)
        if self.gram is not None:
            idx = [i for i, e in exps.items() for _ in range(e)]
            return Fraction(self.gram[idx[0]][idx[1]])
        return Fraction(self.top_power)


# --------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class Rule:
    name: str
    description: str
    class_zero: bool
    matches: Callable
    apply: Callable
    corrupted: bool = False


def _zero(shape, model, log):
    return {}


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _merge(a: tuple, b: tuple) -> dict:
    out: dict = {}
    for i, e in a + b:
        out[i] = out.get(i, 0) + e
    return out


def _base_rules(model_kind: str) -> list[Rule]:
    n_of = lambda m: m.base.n  # noqa: E731

    def alpha_left(s, m):
        return bool(s.alphas) and bool(s.left)

    def left_overflow(s, m):
        return s.left_degree > n_of(m)

    def right_overflow(s, m):
        return s.right_degree > n_of(m)

    def left_disjoint(s, m):
        return m.base.kind == "kummer" and len(s.left) > 1

    def right_disjoint(s, m):
        return m.base.kind == "kummer" and len(s.right) > 1

    def points_kill(s, m):
        return bool(s.points) and (bool(s.alphas) or bool(s.left) or bool(s.right))

    def restriction_zero(s, m):
        divisors = [i for i, _ in s.left + s.right]
        return (s.left_degree + s.right_degree > n_of(m)
                or m.base.kills(s.alphas, divisors))

    def diagonal_kills(s, m):
        return s.p >= 1 and restriction_zero(s, m)

    def graph_restriction_zero(s, m):
        if s.left_degree + s.right_degree > n_of(m):
            return True
        if m.base.kills(s.alphas, [i for i, _ in s.left]):
            return True
        return bool(s.right) and m.base.phi_image_orthogonal(s.alphas)

    def graph_kills(s, m):
        return s.q >= 1 and graph_restriction_zero(s, m)

    def factor_overflow(s, m):
        return m.factor is not None and s.factor_degree > m.factor.dim

    def top_only(pred):
        return lambda s, m: s.degree == m.top_degree(s) and pred(s, m)

    def base_part(s, m):
        return m.factor is None or s.reduced

    def factor_degree(s, m):
        return m.factor is not None and not s.reduced and s.factor_degree != m.factor.dim

    def factor_top_match(s, m):
        return m.factor is not None and not s.reduced and s.factor_degree == m.factor.dim

    def factor_top(s, m, log):
        value = m.factor.top(dict(s.factor))
        return ("reduce", value, replace(s, factor=(), reduced=True))

    def mixed(s, m):
        n = n_of(m)
        return base_part(s, m) and not s.points and s.p >= 1 and s.q >= 1 and (s.p < n or s.q < n)

    def low(s, m):
        n = n_of(m)
        return base_part(s, m) and not s.points and (
            (1 <= s.p < n and s.q == 0) or (1 <= s.q < n and s.p == 0))

    def diag_equal(s, m):
        return base_part(s, m) and not s.points and s.p == n_of(m) and s.q == 0

    def diag_equal_apply(s, m, log):
        v = m.base.top(s.alphas, _merge(s.left, s.right), log)
        return _vscale(v, _sign(n_of(m) - 1))

    def diag_high(s, m):
        return base_part(s, m) and not s.points and s.p > n_of(m) and s.q == 0

    def diag_high_apply(s, m, log):
        if not s.alphas:
            raise UnsupportedMonomial(s.text(m), "needs explicit Segre classes of the diagonal")
        # s_l of the normal bundle is supported on exceptional divisors, which alphas kill
        return {}

    def graph_equal(s, m):
        return base_part(s, m) and not s.points and s.q == n_of(m) and s.p == 0

    def graph_equal_apply(s, m, log):
        if s.right:
            if m.base.phi_image_orthogonal(s.alphas):
                return {}
            raise UnsupportedMonomial(s.text(m), "phi^* of divisor classes is opaque")
        v = m.base.top(s.alphas, dict(s.left), log)
        return _vscale(v, _sign(n_of(m) - 1))

    def graph_high(s, m):
        return base_part(s, m) and not s.points and s.q > n_of(m) and s.p == 0

    def graph_high_apply(s, m, log):
        if not s.alphas:
            raise UnsupportedMonomial(s.text(m), "needs explicit Segre classes of the graph")
        return {}

    def kunneth(s, m):
        return base_part(s, m) and not s.points and s.p == 0 and s.q == 0

    def kunneth_apply(s, m, log):
        left = m.base.top(s.alphas, dict(s.left), log)
        if not left:
            return {}
        right = m.base.top((), dict(s.right), log)
        return _vmul(left, right)

    left_name = "left-kills-wedge" if model_kind == "kummer" else "left-transcendental-perp"
    rules = [
        Rule(left_name, "alpha x 1 times (divisor x 1) vanishes on the base", True, alpha_left, _zero),
        Rule("left-overflow", "pullbacks from the first factor above its dimension vanish", True,
             left_overflow, _zero),
        Rule("right-overflow", "pullbacks from the second factor above its dimension vanish", True,
             right_overflow, _zero),
    ]
    if model_kind == "kummer":
        rules += [
            Rule("left-disjoint", "distinct exceptional curves are disjoint (first factor)", True,
                 left_disjoint, _zero),
            Rule("right-disjoint", "distinct exceptional curves are disjoint (second factor)", True,
                 right_disjoint, _zero),
        ]
    else:
        rules.append(Rule("point-kills-pullback",
                          "exceptional divisors over points kill positive-degree pullbacks", True,
                          points_kill, _zero))
    rules += [
        Rule("diagonal-kills", "Dd . Psi = 0 when Psi restricts to zero on the diagonal", True,
             diagonal_kills, _zero),
        Rule("graph-kills", "Dphi . Psi = 0 when Psi restricts to zero on the graph", True,
             graph_kills, _zero),
        Rule("factor-overflow", "factor classes above the factor dimension vanish", True,
             factor_overflow, _zero),
        Rule("factor-degree", "top monomials need exactly the factor dimension in factor classes",
             False, top_only(factor_degree), _zero),
        Rule("factor-top", "integrate the factor classes (Kunneth)", False,
             top_only(factor_top_match), factor_top),
        Rule("mixed-exceptional", "Dd^k Dphi^l Psi = 0 if k < n or l < n", False, top_only(mixed), _zero),
        Rule("exceptional-low", "Dd^k Psi = Dphi^k Psi = 0 for 0 < k < n", False, top_only(low), _zero),
        Rule("diagonal-equal", "Dd^n (eta x zeta) = (-1)^(n-1) eta . zeta", False,
             top_only(diag_equal), diag_equal_apply),
        Rule("diagonal-high", "Dd^k Psi = (-1)^(k-1) s_(k-n) Psi|diag, and s_l is killed by alphas",
             False, top_only(diag_high), diag_high_apply),
        Rule("graph-equal", "Dphi^n (eta x zeta) = (-1)^(n-1) eta . phi^* zeta", False,
             top_only(graph_equal), graph_equal_apply),
        Rule("graph-high", "Dphi^k Psi = (-1)^(k-1) s_(k-n) Psi|graph, and s_l is killed by alphas",
             False, top_only(graph_high), graph_high_apply),
        Rule("kunneth-split", "pullbacks evaluate as (first factor) x (second factor)", False,
             top_only(kunneth), kunneth_apply),
    ]
    return rules


# --------------------------------------------------------------------------
# models


@dataclass
class RewriteModel:
    kind: str
    params: dict
    base: object
    generators: tuple
    rules: tuple
    dim: int
    alpha_basis: tuple = ()
    alpha_gram: tuple | None = None
    factor: FactorModel | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._gen_index = {g.name: i for i, g in enumerate(self.generators)}

    @property
    def rule_names(self) -> list[str]:
        return [r.name for r in self.rules]

    def top_degree(self, shape: Shape) -> int:
        if shape.reduced:
            return self.dim - self.factor.dim
        return self.dim

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(f"unknown rule {name!r}")

    def default_coefficients(self) -> dict[str, QPoly]:
        return {g.name: (QPoly.var(g.coefficient) if g.coefficient else QPoly.const(1))
                for g in self.generators}

    def coefficient_names(self) -> list[str]:
        return [g.coefficient for g in self.generators if g.coefficient]

    def alpha_pairing(self, token: tuple) -> Fraction | None:
        if not token:
            return Fraction(1)
        index = {lab: i for i, lab in enumerate(self.alpha_basis)}
        if any(t not in index for t in token):
            return None
        if self.base.kind == "kummer":
            return wedge_pairing_labels(token, 2 * self.base.n)
        if len(token) != 2:
            return None
        return Fraction(self.alpha_gram[index[token[0]]][index[token[1]]])

    def corrupted(self, rule_name: str) -> "RewriteModel":
        """Copy with one rule returning a wrong nonzero value (negative control)."""
        def wrong(s, m, log):
            return {tuple(sorted(s.alphas)): Fraction(1)}
        rules = tuple(replace(r, apply=wrong, class_zero=False, corrupted=True)
                      if r.name == rule_name else r for r in self.rules)
        if rules == self.rules:
            raise KeyError(f"unknown rule {rule_name!r}")
        return replace(self, rules=rules, kind=self.kind, _cache={})

    def with_rule_order(self, names: Sequence[str]) -> "RewriteModel":
        if sorted(names) != sorted(self.rule_names):
            raise ValueError("a rule order must be a permutation of the model's rules")
        by_name = {r.name: r for r in self.rules}
        return replace(self, rules=tuple(by_name[n] for n in names), _cache={})

    def rule_table(self) -> str:
        lines = [f"# rule table for {self.describe()}",
                 "# name | class-zero | statement"]
        for r in self.rules:
            flag = "yes" if r.class_zero else "no"
            extra = " (corrupted)" if r.corrupted else ""
            lines.append(f"{r.name} | {flag} | {r.description}{extra}")
        lines.append("# base evaluation rules")
        for name, desc in self.base.rules():
            lines.append(f"{name} | - | {desc}")
        return "\n".join(lines) + "\n"

    def describe(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({params})"


def x2_model(n: int, exceptional: int | None = None) -> RewriteModel:
    """Blowup of K x K along the diagonal and the graph, K the Kummer manifold of a complex n-torus.

    Coefficients: ``a_i`` on ``L_i``, ``b_i`` on ``R_i``, ``u`` on ``Dd``,
    ``v`` on ``Dphi``. ``exceptional`` overrides ``2^(2n)`` for testing.
    """
    if n < 2:
        raise InputError("n must be at least 2")
    count = 2 ** (2 * n) if exceptional is None else exceptional
    gens = ([Generator(f"L{i}", "L", i, f"a{i}") for i in range(1, count + 1)]
            + [Generator(f"R{i}", "R", i, f"b{i}") for i in range(1, count + 1)]
            + [Generator("Dd", "Dd", 0, "u"), Generator("Dphi", "Dphi", 0, "v")])
    labels = tuple("e" + "".join(str(i + 1) for i in s) for s in combinations(range(2 * n), 2))
    return RewriteModel("x2", {"n": n}, KummerBase(n, count), tuple(gens),
                        tuple(_base_rules("kummer")), 2 * n, labels)


def x3_model(n: int, m: int, deg_h_top, exceptional: int | None = None,
             normalized: bool = True) -> RewriteModel:
    """``X2 x M`` with ``b_2(M) = 1``, ``h^(m+1) = 0`` and ``q(h^m) = deg_h_top``.

    ``C`` carries ``h`` with coefficient 1. Expanding ``C^(2+m)`` picks
    ``h^m`` in ``binom(m+2, 2)`` ways, so with a plain Kunneth top
    functional ``C^(2+m) alpha^2 = -binom(m+2, 2) q(h^m) (2 sum b_i^2 + u^2 + v^2) A^2``.
    With ``normalized`` (default) the isomorphism ``q: H^2m(M) -> Q`` is
    scaled by ``1/binom(m+2, 2)`` so that the identity reads
    ``-q(h^m) (...) A^2``; the factor is a positive constant either way.
    """
    if m < 1:
        raise InputError("m must be at least 1")
    deg = Fraction(deg_h_top)
    if deg == 0:
        raise InputError("q(h^m) must be nonzero (h^m != 0 on M)")
    base = x2_model(n, exceptional)
    binomial = comb(m + 2, 2)
    top = deg / binomial if normalized else deg
    factor = FactorModel("M", m, ("h",), (None,), top_power=top)
    gens = base.generators + (Generator("h", "F", 0, None),)
    q = deg if normalized else binomial * deg
    params = {"n": n, "m": m, "deg_h_top": deg, "normalized": normalized, "q": q}
    return RewriteModel("x3", params, base.base, gens, base.rules, 2 * n + m,
                        base.alpha_basis, factor=factor)


def _k3_space(t: int):
    from .quadforms import oguiso_quadratic_space

    if t % 2:
        raise InputError("t must be even: the characteristic polynomial of phi^* on T is "
                         "irreducible of even degree")
    if t < 6 or t > 22:
        raise InputError("t must satisfy 6 <= t <= 22 (Picard number 22 - t <= 16)")
    return oguiso_quadratic_space(t)


def x4_model(t: int, rho: int | None = None, fixed_points: int = 2) -> RewriteModel:
    """Blowup of S x S (S a K3 surface with rank-t transcendental part) as in Oguiso's fourfolds.

    Coefficients: ``x_k`` on ``L_k = N_k x S``, ``y_k`` on ``R_k = S x N_k``,
    ``u``, ``v`` on ``Dd``, ``Dphi``, ``w_i`` on the point divisors ``E_i``.
    The number of fixed points only adds generators that every rule kills.
    """
    space = _k3_space(t)
    if rho is not None and rho != space.rho:
        raise InputError(f"rho must equal 22 - t = {space.rho}")
    r = space.rho
    gens = ([Generator(f"L{k}", "L", k, f"x{k}") for k in range(1, r + 1)]
            + [Generator(f"R{k}", "R", k, f"y{k}") for k in range(1, r + 1)]
            + [Generator("Dd", "Dd", 0, "u"), Generator("Dphi", "Dphi", 0, "v")]
            + [Generator(f"E{i}", "E", i, f"w{i}") for i in range(1, fixed_points + 1)])
    labels = tuple(f"t{i}" for i in range(1, t + 1))
    return RewriteModel("x4", {"t": t, "rho": r}, K3Base(space.gram_n), tuple(gens),
                        tuple(_base_rules("k3")), 4, labels, space.gram_t)


def x5_model(t: int, d: int, fixed_points: int = 2) -> RewriteModel:
    """``X4 x F_d`` with ``F_d`` a degree d+2 hypersurface in P^(d+1) (``F_1 = P^1``).

    d = 1: ``<1, h>``, ``h^2 = 0``; d = 2: K3 lattice ``F1..F22``;
    d >= 3: truncated ``<1, h, .., h^d>`` with ``h^d = d + 2`` (primitive
    middle cohomology is omitted; it never meets these monomials).
    """
    if d < 1:
        raise InputError("d must be at least 1")
    base = x4_model(t, fixed_points=fixed_points)
    if d == 2:
        from .quadforms import k3_lattice

        names = tuple(f"F{i}" for i in range(1, 23))
        factor = FactorModel("F2", 2, names, tuple(f"z{i}" for i in range(1, 23)),
                             gram=tuple(tuple(r) for r in k3_lattice()))
        extra = tuple(Generator(nm, "F", i, f"z{i + 1}") for i, nm in enumerate(names))
    else:
        factor = FactorModel(f"F{d}", d, ("h",), ("z",), top_power=Fraction(1 if d == 1 else d + 2))
        extra = (Generator("h", "F", 0, "z"),)
    return RewriteModel("x5", {"t": t, "d": d}, base.base, base.generators + extra, base.rules,
                        4 + d, base.alpha_basis, base.alpha_gram, factor=factor)


def wedge_pairing_labels(token: Sequence[str], generators: int) -> Fraction:
    """Orientation value of a wedge of 2-forms given by labels like ``e12``."""
    subsets = []
    for lab in token:
        digits = lab[1:]
        if len(digits) != 2:
            raise ValueError(f"label {lab!r} is not a wedge of two generators")
        subsets.append((int(digits[0]) - 1, int(digits[1]) - 1))
    acc: tuple = ()
    sign = 1
    for s in subsets:
        if set(acc) & set(s):
            return Fraction(0)
        sign *= _shuffle_sign(acc, s)
        acc = tuple(sorted(acc + s))
    return Fraction(sign) if len(acc) == generators else Fraction(0)


# --------------------------------------------------------------------------
# evaluation


def _rule_order(model: RewriteModel, rule_order) -> list[Rule]:
    if rule_order is None:
        return list(model.rules)
    by = {r.name: r for r in model.rules}
    return [by[n] for n in rule_order]


def evaluate_monomial(model: RewriteModel, shape: Shape, rule_order=None, trace=None) -> Value:
    """Top-degree value of one monomial: the first matching rule decides."""
    rules = _rule_order(model, rule_order)
    scale = Fraction(1)
    while True:
        if shape.degree != model.top_degree(shape):
            raise UnsupportedMonomial(shape.text(model), "not a top-degree monomial")
        for rule in rules:
            if rule.matches(shape, model):
                break
        else:
            raise UnsupportedMonomial(shape.text(model))
        steps: list[str] = []
        result = rule.apply(shape, model, steps.append)
        if trace is not None:
            trace.append({"monomial": shape.text(model), "rule": rule.name,
                          "base_rules": steps})
        if isinstance(result, tuple) and result and result[0] == "reduce":
            _, factor, shape = result
            scale *= factor
            if not scale:
                return {}
            continue
        return _vscale(result, scale)


def _class_zero(model: RewriteModel, shape: Shape, rules: Sequence[Rule]) -> bool:
    return any(r.class_zero and not r.corrupted and r.matches(shape, model) for r in rules)


def _multinomial(exps) -> int:
    out = factorial(sum(exps))
    for e in exps:
        out //= factorial(e)
    return out


def _active(model, coefficients):
    base = model.default_coefficients()
    if coefficients is not None:
        for name, c in coefficients.items():
            if name not in base:
                raise KeyError(f"unknown generator {name!r}")
            base[name] = c if isinstance(c, QPoly) else QPoly.const(Fraction(c))
    return [(i, base[g.name]) for i, g in enumerate(model.generators) if not base[g.name].is_zero()]


def _coefficients_by_indeterminate(model, values: Mapping[str, object] | None):
    """Translate ``{indeterminate: value}`` into per-generator coefficients."""
    if values is None:
        return None
    out = {}
    for g in model.generators:
        if g.coefficient is None:
            continue
        out[g.name] = Fraction(values.get(g.coefficient, 0))
    return out


def evaluate(model: RewriteModel, power: int, alphas: Sequence[str], coefficients=None,
             strategy: str = "pruned", rule_order=None, trace: list | None = None,
             values: Mapping[str, object] | None = None) -> SymbolicValue:
    """Expand ``C^power . prod(alphas)`` with ``C = sum coeff_g g`` and evaluate every monomial.

    ``coefficients`` maps generator names to numbers or polynomials
    (defaults: the model's indeterminates); ``values`` instead maps
    indeterminate names to numbers. Strategies: ``pruned`` (depth-first
    over multisets, pruning class-zero partial products), ``sequential``
    (multiply by ``C`` one factor at a time) and ``multinomial`` (all
    multisets, no pruning; small models only).
    """
    alphas = tuple(sorted(alphas))
    plain = (coefficients is None and values is None and strategy == "pruned"
             and rule_order is None and trace is None)
    if plain and ("eval", power, alphas) in model._cache:
        return model._cache[("eval", power, alphas)]
    if power < 0:
        raise ValueError("power must be non-negative")
    if power + len(alphas) != model.dim:
        raise UnsupportedMonomial(f"C^{power}*{_token_text(alphas)}",
                                  f"degree {power + len(alphas)} is not the top degree {model.dim}")
    if values is not None:
        coefficients = _coefficients_by_indeterminate(model, values)
    active = _active(model, coefficients)
    gens = model.generators
    rules = _rule_order(model, rule_order)
    prune = strategy != "multinomial"

    empty = _shape_from_key(alphas, (), gens)
    if prune and _class_zero(model, empty, rules):
        return SymbolicValue()
    usable = []
    for gi, c in active:
        if prune and _class_zero(model, _shape_from_key(alphas, ((gi, 1),), gens), rules):
            continue
        usable.append((gi, c))
    bad_pairs = set()
    if prune:
        for (gi, _), (gj, _) in combinations(usable, 2):
            if _class_zero(model, _shape_from_key(alphas, ((gi, 1), (gj, 1)), gens), rules):
                bad_pairs.add((gi, gj))

    leaves: dict[tuple, QPoly] = {}
    if strategy in ("pruned", "multinomial"):
        coeff_of = dict(usable)
        order = [gi for gi, _ in usable]

        def dfs(start: int, remaining: int, key: tuple):
            if remaining == 0:
                poly = QPoly.const(_multinomial([e for _, e in key]))
                for gi, e in key:
                    poly = poly * coeff_of[gi] ** e
                leaves[key] = poly
                return
            for pos in range(start, len(order)):
                gi = order[pos]
                if prune and any((gj, gi) in bad_pairs for gj, _ in key):
                    continue
                for e in range(1, remaining + 1):
                    new = key + ((gi, e),)
                    if prune and _class_zero(model, _shape_from_key(alphas, new, gens), rules):
                        break
                    dfs(pos + 1, remaining - e, new)

        dfs(0, power, ())
    elif strategy == "sequential":
        states: dict[tuple, QPoly] = {(): QPoly.const(1)}
        for _ in range(power):
            nxt: dict[tuple, QPoly] = {}
            for key, poly in states.items():
                exps = dict(key)
                for gi, c in usable:
                    if any((min(gi, gj), max(gi, gj)) in bad_pairs for gj in exps if gj != gi):
                        continue
                    new_exps = dict(exps)
                    new_exps[gi] = new_exps.get(gi, 0) + 1
                    new_key = tuple(sorted(new_exps.items()))
                    if new_key not in nxt and _class_zero(
                            model, _shape_from_key(alphas, new_key, gens), rules):
                        continue
                    nxt[new_key] = nxt.get(new_key, QPoly()) + poly * c
            states = nxt
        leaves = states
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    acc: dict[tuple, list] = {}
    for key in sorted(leaves):
        poly = leaves[key]
        if poly.is_zero():
            continue
        shape = _shape_from_key(alphas, key, gens)
        value = evaluate_monomial(model, shape, rule_order, trace)
        for token, v in value.items():
            acc.setdefault(token, []).append(poly * v)
    result = SymbolicValue({t: poly_sum(ps) for t, ps in acc.items()})
    if plain:
        model._cache[("eval", power, alphas)] = result
    return result


# --------------------------------------------------------------------------
# confluence


@dataclass
class ConfluenceReport:
    model: str
    trials: int
    orders: list
    passed: bool
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"model": self.model, "trials": self.trials, "orders": len(self.orders),
                "passed": self.passed, "witness": self.witness}


def _random_shape(model: RewriteModel, rng: random.Random) -> Shape:
    m = rng.choice([1, 2])
    alphas = tuple(sorted(rng.choice(model.alpha_basis[:3] or ("A",)) for _ in range(m)))
    families: dict[str, list[int]] = {}
    for i, g in enumerate(model.generators):
        families.setdefault(g.family, []).append(i)
    names = sorted(families)
    exps: dict[int, int] = {}
    for _ in range(model.dim - m):
        fam = rng.choice(names)
        # few distinct indices so that repeated classes actually occur
        gi = rng.choice(families[fam][:3])
        exps[gi] = exps.get(gi, 0) + 1
    return _shape_from_key(alphas, tuple(sorted(exps.items())), model.generators)


def _outcome(model, shape, order):
    try:
        return ("value", tuple(sorted(evaluate_monomial(model, shape, order).items())))
    except UnsupportedMonomial:
        return ("unsupported",)


def confluence_check(model: RewriteModel, trials: int = 100, seed: int = 0,
                     shuffles: int = 2) -> ConfluenceReport:
    """Evaluate random top-degree monomials under several rule orders and compare.

    Orders: the model's own, its reverse and ``shuffles`` seeded
    permutations. A divergence is reported with the monomial and the
    competing results.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    names = model.rule_names
    orders = [list(names), list(reversed(names))]
    for _ in range(shuffles):
        perm = list(names)
        rng.shuffle(perm)
        orders.append(perm)
    for _ in range(trials):
        shape = _random_shape(model, rng)
        results = [_outcome(model, shape, o) for o in orders]
        if any(r != results[0] for r in results[1:]):
            witness = {"monomial": shape.text(model),
                       "results": [_outcome_text(r) for r in results],
                       "first_rules": [_first_rule(model, shape, o) for o in orders]}
            return ConfluenceReport(model.describe(), trials, orders, False, witness)
    return ConfluenceReport(model.describe(), trials, orders, True)


def _outcome_text(r) -> str:
    if r[0] == "unsupported":
        return "unsupported"
    if not r[1]:
        return "0"
    return " + ".join(f"{v}*{_token_text(t)}" for t, v in r[1])


def _first_rule(model, shape, order) -> str:
    by = {r.name: r for r in model.rules}
    for name in order:
        if by[name].matches(shape, model):
            return name
    return "-"


# --------------------------------------------------------------------------
# Gram matrices


def symbolic_gram(model: RewriteModel, basis: tuple) -> list[list[QPoly]]:
    """``[[c^(d-2) s_i s_j]]`` as polynomials in the model's indeterminates (cached)."""
    key = ("gram", basis)
    if key in model._cache:
        return model._cache[key]
    power = model.dim - 2
    k = len(basis)
    out = [[QPoly() for _ in range(k)] for _ in range(k)]
    generic = None
    for i in range(k):
        for j in range(i, k):
            val = evaluate(model, power, (basis[i], basis[j]))
            if generic is None:
                generic = val
            entry = val.resolve(model.alpha_pairing)
            out[i][j] = out[j][i] = entry
    model._cache[key] = out
    return out
