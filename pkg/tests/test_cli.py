import json
import subprocess
import sys

import jsonschema
import pytest

from kahler_obstruct.cli import main
from kahler_obstruct.config import schema


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_ring_torus(capsys):
    assert main(["ring", "--torus", "2"]) == 0
    doc = _json(capsys)
    assert doc["betti"] == [1, 4, 6, 4, 1]
    assert doc["pairing"][2]["signature"] == {"p": 3, "q": 3, "r0": 0}
    assert all(p["nondegenerate"] for p in doc["pairing"])


def test_ring_kummer_and_kunneth(capsys):
    assert main(["ring", "--kummer", "--dump"]) == 0
    doc = _json(capsys)
    assert doc["pairing"][2]["signature"] == {"p": 3, "q": 19, "r0": 0}
    assert doc["structure_constants"].startswith("# ring kummer")
    assert main(["ring", "--kunneth", "torus1", "torus1"]) == 0
    assert _json(capsys)["betti"] == [1, 4, 6, 4, 1]


def test_galois(capsys, tmp_path):
    out = tmp_path / "cert.json"
    assert main(["galois", "1", "-1", "0", "0", "1", "--prime-bound", "100", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "certified" and doc["no_real_roots"] and doc["distinct_products"] is True
    assert doc["text"] == "x^4 - x + 1"


def test_evaluate(capsys):
    assert main(["evaluate", "--model", "x2", "--power", "2", "--alpha", "A", "--alpha", "A"]) == 0
    doc = _json(capsys)
    assert doc["value"]["A^2"].endswith("- u^2 - v^2") and not doc["zero"]
    assert main(["evaluate", "--model", "x2", "--power", "3"]) == 0
    assert _json(capsys)["zero"]
    assert main(["evaluate", "--model", "x4", "--rule-table"]) == 0
    assert "kunneth-split" in capsys.readouterr().out


def test_evaluate_verbose_trace(capsys):
    assert main(["evaluate", "--model", "x3", "--m", "1", "--power", "3", "--alpha", "A", "--alpha", "A",
                 "-v"]) == 0
    cap = capsys.readouterr()
    assert json.loads(cap.out)["trace"] and "->" in cap.err


@pytest.mark.parametrize("name, code", [("voisin_n2", 0), ("skip_galois", 2), ("corrupted_rule", 3)])
def test_obstruction_exit_codes(capsys, configs_dir, name, code):
    assert main(["obstruction", str(configs_dir / f"{name}.toml")]) == code
    cap = capsys.readouterr()
    jsonschema.validate(json.loads(cap.out), schema("report"))
    assert "verdict:" in cap.err


@pytest.mark.parametrize("argv", [
    ["ring"],
    ["ring", "--torus", "0"],
    ["ring", "--kunneth", "torus2", "sphere"],
    ["galois", "x", "1"],
    ["galois", "1", "2", "1"],
    ["evaluate", "--model", "x2"],
    ["evaluate", "--model", "x2", "--power", "5"],
    ["evaluate", "--model", "x4", "--t", "7", "--power", "2"],
    ["obstruction", "/nonexistent.toml"],
    ["suite", "--filter", "no-such-check"],
    ["bogus"],
    ["evaluate", "--model", "x9"],
])
def test_usage_errors_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 64
    assert "Traceback" not in capsys.readouterr().err


def test_suite_filter_and_determinism(capsys):
    assert main(["suite", "--filter", "kummer", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["suite", "--filter", "kummer", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    names = [r["name"] for r in json.loads(first)["results"]]
    assert names == ["01-kummer-square-identity", "02-kummer-vanishing", "04-kummer-signature"]


def test_installed_entry_point_has_no_traceback(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kahler_obstruct.cli", "obstruction", str(tmp_path / "x.toml")],
                          capture_output=True, text=True)
    assert proc.returncode == 64 and "Traceback" not in proc.stderr
