import json

import jsonschema
import pytest

from kahler_obstruct.config import ConfigError, load_config, parse_config, schema
from kahler_obstruct.pipelines import ENGINE_STAGES, VOISIN_STAGES, run, run_voisin_product

FAST = {"sampling": {"count": 20}, "engine": {"confluence_trials": 30}}


def _run(doc):
    return run(parse_config(dict(doc, **FAST)))


EXPECTED = {
    "voisin_n2": 0, "voisin_n2_phi": 0, "voisin_n3": 0, "voisin_identity": 2,
    "voisin_product_m1": 0, "voisin_product_m2": 0, "oguiso_lehmer": 0, "oguiso_t6": 0,
    "oguiso_odd": 2, "oguiso_product_d1": 0, "oguiso_product_d3": 0,
    "corrupted_rule": 3, "skip_galois": 2,
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_shipped_config_verdicts(configs_dir, name):
    report = run(load_config(configs_dir / f"{name}.toml"))
    assert report.exit_code == EXPECTED[name], report.reason
    jsonschema.validate(report.to_dict(), schema("report"))


def test_report_contents():
    report = _run({"kind": "voisin", "seed": 5})
    doc = json.loads(report.to_json())
    assert doc["schema_version"] == "1.0" and doc["seed"] == 5
    assert doc["config_hash"] == report.config.config_hash()
    assert [s["name"] for s in doc["hypotheses"]] == list(VOISIN_STAGES)
    assert [s["name"] for s in doc["engine"]] == list(ENGINE_STAGES)
    assert all(s["status"] == "passed" for s in doc["hypotheses"] + doc["engine"] + doc["identities"])
    assert report.verdict == "contradiction-derived"


def test_reports_are_byte_identical_for_a_seed():
    doc = {"kind": "oguiso", "construction": {"polynomial": [1, -1, 0, 0, 0, 0, 1]}, "seed": 9}
    assert _run(doc).to_json() == _run(doc).to_json()


def test_corrupted_rule_gives_mismatch_with_witness():
    report = _run({"kind": "voisin", "fault": {"corrupt_rule": "exceptional-low"}})
    assert report.verdict == "identity-mismatch" and report.exit_code == 3
    conf = report.stage("confluence")
    assert conf["status"] == "failed"
    assert "divergent" in report.reason


@pytest.mark.parametrize("stage", ["galois", "real-roots", "orbit"])
def test_skipped_hypothesis_never_contradicts(stage):
    report = _run({"kind": "voisin", "fault": {"skip": [stage]}})
    assert report.verdict == "hypothesis-not-certified"
    assert report.stage(stage)["status"] == "skipped"


def test_unknown_skip_or_fault_is_rejected():
    with pytest.raises(ConfigError):
        _run({"kind": "voisin", "fault": {"skip": ["no-such-stage"]}})
    with pytest.raises(ConfigError):
        _run({"kind": "voisin", "fault": {"corrupt_rule": "no-such-rule"}})


def test_failed_hypothesis_short_circuits_identities():
    report = _run({"kind": "oguiso", "construction": {"polynomial": [1, -1, 0, 0, 0, 0, 0, 1]}})
    assert report.stage("even-degree")["status"] == "failed"
    assert report.verdict == "hypothesis-not-certified"


def test_reducible_polynomial_is_not_certified():
    report = _run({"kind": "voisin", "construction": {"polynomial": [1, 0, 2, 0, 1]}})
    assert report.verdict == "hypothesis-not-certified"


def test_zero_q_is_rejected():
    with pytest.raises(ConfigError):
        run_voisin_product(parse_config({"kind": "voisin-product", "construction": {"q": 0}}))
