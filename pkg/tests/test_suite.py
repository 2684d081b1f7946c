import jsonschema

from kahler_obstruct.config import schema
from kahler_obstruct.suite import CHECKS, run_suite, select, summary_json


def test_select():
    assert select(None) == list(CHECKS)
    assert select("07*") == ["07-galois-certificates"]
    assert select("ring") == ["10-ring-laws", "11-ring-subspaces"]
    assert select("nothing-here") == []


def test_summary_schema_and_determinism():
    a = run_suite("0[789]*", seed=3)
    b = run_suite("0[789]*", seed=3)
    assert summary_json(a) == summary_json(b)
    jsonschema.validate(a, schema("suite"))
    assert a["passed"] and [r["name"] for r in a["results"]] == select("0[789]*")


def test_empty_selection_is_not_a_pass():
    assert not run_suite("nothing-here")["passed"]
