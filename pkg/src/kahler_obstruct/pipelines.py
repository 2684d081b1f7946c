"""End-to-end obstruction drivers.

Each driver certifies the computational hypotheses of a construction,
evaluates the intersection identities on its rewrite model, and runs the
signature case analysis against the admissible Hodge-index signatures.
The Hodge-theoretic steps that are quoted rather than computed are
recorded in the trace as ``cited``.

Verdicts: ``contradiction-derived`` (every stage passed and every sign
case of the scalar yields a contradiction), ``hypothesis-not-certified``
(a hypothesis failed or was skipped) and ``identity-mismatch`` (an
identity, the confluence check or the sampled cross-check failed).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from . import __version__
from ._exact import fstr
from .config import ConfigError, ConstructionConfig
from .exterior import ExteriorAlgebra, char_poly, torus_ring
from .galois import (
    InputError as GaloisInputError,
    UndecidedError,
    certify_symmetric_group,
    distinct_pair_products,
    is_irreducible,
    is_squarefree,
    pair_orbit_decision,
    no_real_roots,
    poly_str,
)
from .polynomial import QPoly, poly_sum
from .quadforms import (
    IsotropyFailure,
    SymmetricForm,
    admissible_signatures,
    gram_qc,
    isotropic_witness_vanishing_products,
    k3_lattice,
    oguiso_quadratic_space,
    parity_contradiction,
    signature,
)
from .rewrite import (
    RewriteModel,
    UnsupportedMonomial,
    confluence_check,
    evaluate,
    symbolic_gram,
    x2_model,
    x3_model,
    x4_model,
    x5_model,
)

__all__ = [
    "SCHEMA_VERSION",
    "EXIT_CODES",
    "ObstructionReport",
    "run",
    "run_voisin",
    "run_voisin_product",
    "run_oguiso",
    "run_oguiso_product",
    "stage_names",
]

SCHEMA_VERSION = "1.0"
EXIT_CODES = {"contradiction-derived": 0, "hypothesis-not-certified": 2, "identity-mismatch": 3}

VOISIN_STAGES = ("characteristic-polynomial", "galois", "real-roots", "distinct-products",
                 "isotropic-witness", "orbit")
OGUISO_STAGES = ("irreducible", "even-degree", "picard-bound", "negative-definite-ns",
                 "transcendental-signature")
ENGINE_STAGES = ("confluence", "sampled-agreement")


def stage_names(kind: str) -> tuple:
    hyp = VOISIN_STAGES if kind.startswith("voisin") else OGUISO_STAGES
    return hyp + ENGINE_STAGES


@dataclass
class ObstructionReport:
    config: ConstructionConfig
    hypotheses: list = field(default_factory=list)
    engine: list = field(default_factory=list)
    identities: list = field(default_factory=list)
    signatures: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    verdict: str = "hypothesis-not-certified"
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def stage(self, name: str) -> dict:
        for s in self.hypotheses + self.engine + self.identities:
            if s["name"] == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "kind": self.config.kind,
            "config": self.config.to_dict(),
            "config_hash": self.config.config_hash(),
            "seed": self.config.seed,
            "hypotheses": self.hypotheses,
            "engine": self.engine,
            "identities": self.identities,
            "signatures": self.signatures,
            "verdict": self.verdict,
            "reason": self.reason,
            "trace": self.trace,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# stage helpers


def _record(report: ObstructionReport, bucket: list, name: str, fn: Callable[[], tuple]):
    """Run a stage unless it is skipped; ``fn`` returns ``(ok, detail)``."""
    if name in report.config.skip:
        entry = {"name": name, "status": "skipped", "detail": {"reason": "skipped by config"}}
    else:
        try:
            ok, detail = fn()
        except UnsupportedMonomial as exc:
            ok, detail = False, {"error": str(exc), "divergent_monomial": exc.monomial}
        entry = {"name": name, "status": "passed" if ok else "failed", "detail": detail}
    bucket.append(entry)
    report.trace.append(f"{name}: {entry['status']}")
    return entry["status"] == "passed"


def _not_run(report: ObstructionReport, bucket: list, name: str, why: str):
    bucket.append({"name": name, "status": "not-run", "detail": {"reason": why}})
    report.trace.append(f"{name}: not-run")


def _cite(report: ObstructionReport, text: str):
    report.trace.append(f"cited: {text}")


def _validate_skip(cfg: ConstructionConfig):
    allowed = stage_names(cfg.kind)
    bad = [s for s in cfg.skip if s not in allowed]
    if bad:
        raise ConfigError(f"unknown stage(s) to skip: {', '.join(bad)}; known: {', '.join(allowed)}")


def _apply_fault(cfg: ConstructionConfig, model: RewriteModel) -> RewriteModel:
    if cfg.corrupt_rule is None:
        return model
    try:
        return model.corrupted(cfg.corrupt_rule)
    except KeyError:
        raise ConfigError(f"unknown rule {cfg.corrupt_rule!r}; known: "
                          f"{', '.join(model.rule_names)}") from None


def _matrix_text(rows) -> list:
    return [[str(e) if isinstance(e, QPoly) else fstr(e) for e in r] for r in rows]


def _sample(rng: random.Random, names, relevant) -> dict:
    """Random rationals for every indeterminate, not all zero on ``relevant``."""
    while True:
        vals = {n: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for n in names}
        if any(vals[n] for n in relevant):
            return vals


def _quadratic_sign(poly: QPoly, variables) -> dict:
    """Definiteness of a homogeneous quadratic polynomial via its Gram matrix."""
    variables = list(variables)
    if not poly.is_homogeneous(2):
        return {"kind": "not-quadratic"}
    idx = {v: i for i, v in enumerate(variables)}
    g = [[Fraction(0)] * len(variables) for _ in variables]
    for mono, coef in poly.terms.items():
        vs = [v for v, e in mono for _ in range(e)]
        i, j = idx[vs[0]], idx[vs[1]]
        if i == j:
            g[i][i] += coef
        else:
            g[i][j] += coef / 2
            g[j][i] += coef / 2
    sig = signature(SymmetricForm(g))
    if sig.q == len(variables):
        kind = "negative-definite"
    elif sig.p == len(variables):
        kind = "positive-definite"
    else:
        kind = "indefinite"
    return {"kind": kind, "variables": len(variables), "signature": sig.to_dict()}


# --------------------------------------------------------------------------
# model stages shared by all pipelines


@dataclass
class _ModelPlan:
    model: RewriteModel
    vanishing: list  # (name, power, alphas)
    main_name: str
    main_power: int
    main_alphas: tuple
    main_token: tuple
    expected: QPoly  # scalar multiplying the token
    relevant: tuple  # indeterminates that make the scalar nonzero
    gram_basis: tuple
    gram_reference: list  # pairing on gram_basis
    gram_mode: str  # symbolic | sampled
    gram_samples: int


def _engine_stages(report: ObstructionReport, plan: _ModelPlan, rng: random.Random):
    cfg = report.config
    model = plan.model

    def confluence():
        rep = confluence_check(model, cfg.confluence_trials, cfg.seed)
        return rep.passed, rep.to_dict()

    _record(report, report.engine, "confluence", confluence)

    def sampled():
        symbolic = evaluate(model, plan.main_power, plan.main_alphas)
        count = cfg.samples if model.factor is None or model.factor.gram is None else min(cfg.samples, 3)
        for k in range(count):
            vals = _sample(rng, model.coefficient_names(), plan.relevant)
            direct = evaluate(model, plan.main_power, plan.main_alphas, values=vals)
            if direct != symbolic.specialize(vals):
                return False, {"samples": k + 1, "mismatch_at": {n: fstr(v) for n, v in sorted(vals.items())},
                               "direct": str(direct), "specialized": str(symbolic.specialize(vals))}
        return True, {"samples": count}

    _record(report, report.engine, "sampled-agreement", sampled)


def _identity_stages(report: ObstructionReport, plan: _ModelPlan) -> QPoly | None:
    model = plan.model
    for name, power, alphas in plan.vanishing:
        def vanish(power=power, alphas=alphas):
            value = evaluate(model, power, alphas)
            return value.is_zero(), {"expression": f"C^{power}*{'*'.join(alphas)}",
                                     "expected": "0", "result": str(value)}
        _record(report, report.identities, name, vanish)

    found: dict = {}

    def main():
        trace: list = []
        value = evaluate(model, plan.main_power, plan.main_alphas, trace=trace)
        scalar = value.coefficient(plan.main_token)
        found["scalar"] = scalar
        others = [t for t in value.terms if t != tuple(sorted(plan.main_token))]
        counts: dict = {}
        for step in trace:
            counts[step["rule"]] = counts.get(step["rule"], 0) + 1
        detail = {"expression": f"C^{plan.main_power}*{'*'.join(plan.main_alphas)}",
                  "expected": f"({plan.expected})*{'*'.join(sorted(plan.main_token))}",
                  "result": str(value), "rule_counts": dict(sorted(counts.items()))}
        ok = scalar == plan.expected and not others
        if not ok:
            bad = [s for s in trace if model.rule(s["rule"]).corrupted]
            if bad:
                detail["divergent_monomial"] = bad[0]["monomial"]
        return ok, detail

    _record(report, report.identities, plan.main_name, main)
    return found.get("scalar")


def _gram_stage(report: ObstructionReport, plan: _ModelPlan, rng: random.Random):
    model = plan.model
    ref = SymmetricForm(plan.gram_reference)

    def gram():
        if plan.gram_mode == "symbolic":
            sym = symbolic_gram(model, plan.gram_basis)
            for i, row in enumerate(sym):
                for j, entry in enumerate(row):
                    if entry != plan.expected * ref.gram[i][j]:
                        return False, {"mode": "symbolic", "entry": [i, j], "value": str(entry)}
            return True, {"mode": "symbolic", "statement": f"Gram = ({plan.expected}) * reference"}
        # sampled: numeric Gram at random c, compared with the scalar
        for k in range(plan.gram_samples):
            vals = _sample(rng, model.coefficient_names(), plan.relevant)
            if model.factor is not None and model.factor.gram is not None:
                # keep a U plane and one E8(-1) vector of the surface factor: the
                # factor form stays generic there and the expansion stays small
                keep = {"z1", "z2", "z7"}
                vals = {n: (x if not n.startswith("z") or n in keep else Fraction(0))
                        for n, x in vals.items()}
            scalar = plan.expected(vals)
            rows = []
            for i, a in enumerate(plan.gram_basis):
                row = []
                for j, b in enumerate(plan.gram_basis):
                    if j < i:
                        row.append(rows[j][i])
                        continue
                    v = evaluate(model, model.dim - 2, (a, b), values=vals)
                    row.append(v.resolve(model.alpha_pairing).constant())
                rows.append(row)
            if SymmetricForm(rows).is_scalar_multiple_of(ref) != scalar:
                return False, {"mode": "sampled", "sample": k, "scalar": fstr(scalar)}
        return True, {"mode": "sampled", "samples": plan.gram_samples,
                      "factor_support": ["z1", "z2", "z7"] if model.factor and model.factor.gram else None,
                      "statement": f"Gram = ({plan.expected}) * reference at each sample"}

    _record(report, report.identities, "gram-proportional", gram)


def _case_analysis(report: ObstructionReport, plan: _ModelPlan, scalar: QPoly | None, d: int,
                   sampled_forms: list | None = None):
    ref = SymmetricForm(plan.gram_reference)
    adm = admissible_signatures(d)
    cases = []
    if scalar is not None and scalar.is_zero():
        signs = [("scalar=0", 0)]
    else:
        signs = [("scalar>0", 1), ("scalar<0", -1), ("scalar=0", 0)]
    for label, s in signs:
        obs = signature(ref.scaled(s))
        verdict = parity_contradiction(obs, adm)
        cases.append({"case": label, "observed": obs.to_dict(), "verdict": verdict.kind,
                      "reason": verdict.reason})
    out = {
        "dimension": d,
        "admissible": [list(p) for p in adm.sorted_pairs()],
        "reference_signature": signature(ref).to_dict(),
        "scalar": str(scalar) if scalar is not None else None,
        "cases": cases,
        "all_cases_contradict": all(c["verdict"] in ("contradiction", "degenerate") for c in cases),
    }
    if scalar is not None and not scalar.is_zero():
        out["scalar_sign"] = _quadratic_sign(scalar, plan.relevant)
    if sampled_forms is not None:
        out["samples"] = sampled_forms
    report.signatures = out
    report.trace.append("signature-cases: " + ", ".join(f"{c['case']} -> {c['verdict']}" for c in cases))


def _sampled_signatures(plan: _ModelPlan, rng: random.Random, count: int, d: int) -> dict:
    adm = admissible_signatures(d)
    seen: dict = {}
    for _ in range(count):
        vals = _sample(rng, plan.model.coefficient_names(), plan.relevant)
        form = gram_qc(plan.model, vals, plan.gram_basis)
        sig = signature(form)
        v = parity_contradiction(sig, adm)
        key = f"{sig.p},{sig.q},{sig.r0}:{v.kind}"
        seen[key] = seen.get(key, 0) + 1
    return {"count": count, "observed": dict(sorted(seen.items()))}


def _finish(report: ObstructionReport):
    engine_bad = [s["name"] for s in report.engine + report.identities if s["status"] == "failed"]
    skipped = [s["name"] for s in report.hypotheses + report.engine if s["status"] == "skipped"]
    failed = [s["name"] for s in report.hypotheses if s["status"] == "failed"]
    not_run = [s["name"] for s in report.identities if s["status"] == "not-run"]
    if engine_bad:
        report.verdict = "identity-mismatch"
        witness = ""
        for s in report.engine + report.identities:
            if s["name"] in engine_bad:
                d = s["detail"]
                m = d.get("divergent_monomial") or (d.get("witness") or {}).get("monomial")
                if m:
                    witness = f"; divergent monomial {m}"
                    break
        report.reason = "failed: " + ", ".join(engine_bad) + witness
    elif failed or skipped or not_run:
        report.verdict = "hypothesis-not-certified"
        parts = []
        if failed:
            parts.append("failed: " + ", ".join(failed))
        if skipped:
            parts.append("skipped: " + ", ".join(skipped))
        if not_run:
            parts.append("not run: " + ", ".join(not_run))
        report.reason = "; ".join(parts)
    elif report.signatures.get("all_cases_contradict"):
        report.verdict = "contradiction-derived"
        report.reason = ("every sign case of the q_c scalar contradicts the admissible "
                         f"signatures (2a, {report.signatures['dimension']}-2a) or nondegeneracy")
    else:
        report.verdict = "identity-mismatch"
        report.reason = "signature analysis produced no contradiction"
    report.trace.append(f"verdict: {report.verdict}")
    return report


# --------------------------------------------------------------------------
# Voisin-type constructions


def _voisin_hypotheses(report: ObstructionReport, n: int):
    cfg = report.config
    state: dict = {}

    def charpoly():
        if cfg.phi is not None:
            f = char_poly([list(r) for r in cfg.phi])
            source = "phi"
        else:
            f = list(cfg.polynomial)
            source = "polynomial"
        state["f"] = f
        detail = {"source": source, "polynomial": poly_str(f, "x"), "coefficients": f,
                  "degree": len(f) - 1}
        problems = []
        if len(f) - 1 != 2 * n:
            problems.append(f"degree must be 2n = {2 * n}")
        if f[-1] != 1:
            problems.append("must be monic")
        if abs(f[0]) != 1:
            problems.append("constant term must be +-1 (phi invertible over Z)")
        if problems:
            detail["problems"] = problems
        return not problems, detail

    _record(report, report.hypotheses, "characteristic-polynomial", charpoly)
    f = state.get("f") or (list(cfg.polynomial) if cfg.polynomial else None)

    def galois():
        if f is None:
            return False, {"reason": "no polynomial"}
        if not is_squarefree(f):
            return False, {"reason": "polynomial is not squarefree", "verdict": "refuted"}
        try:
            cert = certify_symmetric_group(f, cfg.prime_bound)
        except GaloisInputError as exc:
            return False, {"reason": str(exc)}
        return cert.certified and cert.degree == 2 * n, cert.to_dict()

    _record(report, report.hypotheses, "galois", galois)

    def real_roots():
        if f is None:
            return False, {"reason": "no polynomial"}
        ok = no_real_roots(f)
        return ok, {"method": "Sturm", "no_real_roots": ok}

    _record(report, report.hypotheses, "real-roots", real_roots)

    def products():
        if f is None or len(f) < 3:
            return False, {"reason": "no polynomial"}
        if not is_squarefree(f):
            return False, {"reason": "polynomial is not squarefree: repeated roots give equal products"}
        try:
            ok = distinct_pair_products(f, cfg.digits)
        except UndecidedError as exc:
            return False, {"reason": f"undecided: {exc}"}
        return ok, {"digits": cfg.digits, "distinct": ok}

    _record(report, report.hypotheses, "distinct-products", products)

    def witness():
        ring = torus_ring(n)
        elems = [ring.gen("e12"), ring.gen("e13")]
        try:
            w = isotropic_witness_vanishing_products(ring, elems)
        except IsotropyFailure as exc:
            return False, {"reason": str(exc)}
        state["s20"] = True
        return True, {"basis": ["e12", "e13"], "dimension": w.dimension, "mode": w.mode,
                      "meaning": "a 2-dimensional subspace with vanishing products exceeds the "
                                 "isotropic bound of a form with at most one nonzero (2,0) piece"}

    _record(report, report.hypotheses, "isotropic-witness", witness)

    def orbit():
        rep = pair_orbit_decision(n, bool(state.get("s20")))
        return rep.no_hodge_classes, rep.to_dict()

    _record(report, report.hypotheses, "orbit", orbit)
    _cite(report, "the Kunneth and exceptional summands of H^2 are sub-Hodge structures")
    _cite(report, "no Hodge classes in the wedge^2 summand place every ample class in the span "
                  "of the divisor, diagonal and graph classes")
    _cite(report, "Hodge index: q_c of an ample c has signature (2a, d-2a) on a sub-Hodge "
                  "structure with a = dim of its (2,0) part, and is nondegenerate")


def _voisin_plan(model: RewriteModel, n: int, q: Fraction | None, cfg) -> _ModelPlan:
    count = 2 ** (2 * n)
    b = [QPoly.var(f"b{i}") for i in range(1, count + 1)]
    u, v = QPoly.var("u"), QPoly.var("v")
    extra = model.dim - 4 * n
    if n == 2:
        expected = -(poly_sum([bi * bi for bi in b]) * 2 + u * u + v * v)
        if q is not None:
            expected = expected * q
        main = ("square-identity", model.dim - 2)
    else:
        expected = QPoly()
        main = ("square-vanishing", model.dim - 2)
    alg = ExteriorAlgebra(2 * n)
    pairing = alg.pairing_matrix(2)
    if n != 2:
        pairing = [[Fraction(0)] * len(pairing) for _ in pairing]
    return _ModelPlan(
        model=model,
        vanishing=[("top-minus-one-vanishing", 4 * n - 1 + extra, ("A",))],
        main_name=main[0], main_power=main[1], main_alphas=("A", "A"), main_token=("A", "A"),
        expected=expected,
        relevant=tuple([f"b{i}" for i in range(1, count + 1)] + ["u", "v"]),
        gram_basis=model.alpha_basis, gram_reference=pairing,
        gram_mode="symbolic", gram_samples=0)


def _run_voisin_common(cfg: ConstructionConfig, model_fn, n: int, q: Fraction | None):
    _validate_skip(cfg)
    report = ObstructionReport(cfg)
    report.trace.append(f"construction: {cfg.kind} n={n}")
    _voisin_hypotheses(report, n)
    model = _apply_fault(cfg, model_fn())
    report.trace.append(f"model: {model.describe()}")
    plan = _voisin_plan(model, n, q, cfg)
    rng = random.Random(cfg.seed)
    _engine_stages(report, plan, rng)
    scalar = _identity_stages(report, plan)
    if n == 2:
        _gram_stage(report, plan, rng)
        sampled = _sampled_signatures(plan, rng, cfg.samples, len(plan.gram_basis))
    else:
        # the vanishing of C^(2n-2) alpha^2 is the whole Gram: check it entrywise
        _gram_stage(report, plan, rng)
        sampled = None
    _case_analysis(report, plan, scalar, len(plan.gram_basis), sampled)
    return _finish(report)


def run_voisin(cfg: ConstructionConfig) -> ObstructionReport:
    """Blown-up Kummer self-product: certificates, identities and the signature contradiction."""
    if cfg.kind != "voisin":
        raise ConfigError("run_voisin needs a voisin config")
    n = cfg.n or 2
    return _run_voisin_common(cfg, lambda: x2_model(n), n, None)


def run_voisin_product(cfg: ConstructionConfig) -> ObstructionReport:
    """The Kummer construction times a manifold with ``b_2 = 1``."""
    if cfg.kind != "voisin-product":
        raise ConfigError("run_voisin_product needs a voisin-product config")
    m = cfg.m or 1
    q = cfg.q if cfg.q is not None else Fraction(1)
    if q == 0:
        raise ConfigError("q(h^m) must be nonzero: h^m != 0 on the factor")
    return _run_voisin_common(cfg, lambda: x3_model(2, m, q), 2, q)


# --------------------------------------------------------------------------
# Oguiso-type constructions


def _oguiso_hypotheses(report: ObstructionReport) -> int | None:
    cfg = report.config
    f = list(cfg.polynomial)
    t = len(f) - 1
    report.trace.append(f"characteristic polynomial on T: {poly_str(f, 'x')} (t = {t})")
    if cfg.rho is not None and cfg.rho != 22 - t:
        raise ConfigError(f"rho = {cfg.rho} does not match 22 - deg f = {22 - t}")

    def irreducible():
        ok = is_irreducible(f)
        return ok, {"polynomial": poly_str(f, "x"), "irreducible": ok}

    _record(report, report.hypotheses, "irreducible", irreducible)
    _record(report, report.hypotheses, "even-degree",
                  lambda: (t % 2 == 0, {"degree": t}))
    _record(report, report.hypotheses, "picard-bound",
                  lambda: (6 <= t <= 22, {"rho": 22 - t, "bound": 16}))
    if not (t % 2 == 0 and 6 <= t <= 22):
        for name in ("negative-definite-ns", "transcendental-signature"):
            _not_run(report, report.hypotheses, name, "no quadratic space for this t")
        return None
    space = oguiso_quadratic_space(t)

    def ns():
        sig = signature(SymmetricForm(space.gram_n))
        return sig.q == space.rho and sig.p == 0, {"signature": sig.to_dict(),
                                                   "role": "elliptic NS: pairing negative definite"}

    def ts():
        sig = signature(SymmetricForm(space.gram_t))
        return sig.pair() == (3, t - 3) and sig.r0 == 0, {"signature": sig.to_dict()}

    _record(report, report.hypotheses, "negative-definite-ns", ns)
    _record(report, report.hypotheses, "transcendental-signature", ts)
    _cite(report, "T and N are sub-Hodge structures and phi^* acts on T with characteristic polynomial f")
    _cite(report, "f irreducible of even degree makes T an irreducible Hodge structure without Hodge classes")
    _cite(report, "Hodge index: q_c of an ample c on T has signature (2a, t-2a) and is nondegenerate")
    return t


def _oguiso_plan(model: RewriteModel, t: int, d: int | None) -> _ModelPlan:
    space = oguiso_quadratic_space(t)
    r = space.rho
    y = [QPoly.var(f"y{k}") for k in range(1, r + 1)]
    u, v = QPoly.var("u"), QPoly.var("v")
    lam = poly_sum([y[k] * y[l] * space.gram_n[k][l] for k in range(r) for l in range(r)
                    if space.gram_n[k][l]]) - u * u - v * v
    relevant = [f"y{k}" for k in range(1, r + 1)] + ["u", "v"]
    extra = 0
    if d is not None:
        extra = d
        if d == 1:
            qf = QPoly.var("z")
        elif d == 2:
            g = k3_lattice()
            z = [QPoly.var(f"z{i}") for i in range(1, 23)]
            qf = poly_sum([z[i] * z[j] * g[i][j] for i in range(22) for j in range(22) if g[i][j]])
        else:
            qf = QPoly.var("z") ** d * (d + 2)
        lam = lam * qf * comb(d + 2, 2)
    return _ModelPlan(
        model=model,
        vanishing=[("cube-vanishing", 3 + extra, ("A",))],
        main_name="proportionality-scalar", main_power=2 + extra,
        main_alphas=("A", "B"), main_token=("A", "B"),
        expected=lam, relevant=tuple(relevant),
        gram_basis=model.alpha_basis, gram_reference=[list(r_) for r_ in space.gram_t],
        gram_mode="sampled" if d == 2 else "symbolic", gram_samples=1)


def _run_oguiso_common(cfg: ConstructionConfig, d: int | None):
    _validate_skip(cfg)
    report = ObstructionReport(cfg)
    report.trace.append(f"construction: {cfg.kind}" + (f" d={d}" if d is not None else ""))
    t = _oguiso_hypotheses(report)
    if t is None or t % 2 or not 6 <= t <= 22:
        for name in ENGINE_STAGES:
            _not_run(report, report.engine, name, "no model for this t")
        _not_run(report, report.identities, "identities", "no model for this t")
        return _finish(report)
    model = x4_model(t, fixed_points=cfg.fixed_points) if d is None else x5_model(t, d, cfg.fixed_points)
    model = _apply_fault(cfg, model)
    report.trace.append(f"model: {model.describe()}")
    plan = _oguiso_plan(model, t, d)
    rng = random.Random(cfg.seed)
    _engine_stages(report, plan, rng)
    scalar = _identity_stages(report, plan)
    _gram_stage(report, plan, rng)
    sampled = None
    if d is None:
        sampled = _sampled_signatures(plan, rng, min(cfg.samples, 20), t)
    _case_analysis(report, plan, scalar, t, sampled)
    return _finish(report)


def run_oguiso(cfg: ConstructionConfig) -> ObstructionReport:
    """Blown-up K3 self-product: Prop-10 checks, proportionality and the three sign cases."""
    if cfg.kind != "oguiso":
        raise ConfigError("run_oguiso needs an oguiso config")
    return _run_oguiso_common(cfg, None)


def run_oguiso_product(cfg: ConstructionConfig) -> ObstructionReport:
    """The K3 construction times a hypersurface ``F_d``."""
    if cfg.kind != "oguiso-product":
        raise ConfigError("run_oguiso_product needs an oguiso-product config")
    d = cfg.d if cfg.d is not None else 1
    if d < 1:
        raise ConfigError("d must be at least 1")
    return _run_oguiso_common(cfg, d)


RUNNERS = {
    "voisin": run_voisin,
    "voisin-product": run_voisin_product,
    "oguiso": run_oguiso,
    "oguiso-product": run_oguiso_product,
}


def run(cfg: ConstructionConfig) -> ObstructionReport:
    return RUNNERS[cfg.kind](cfg)
