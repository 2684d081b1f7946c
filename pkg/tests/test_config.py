from fractions import Fraction

import pytest

from kahler_obstruct.config import LEHMER, ConfigError, load_config, parse_config


def test_defaults_per_kind():
    cfg = parse_config({"kind": "voisin"})
    assert cfg.n == 2 and cfg.polynomial == (1, -1, 0, 0, 1) and cfg.seed == 0
    cfg = parse_config({"kind": "oguiso"})
    assert cfg.polynomial == LEHMER and cfg.n is None
    cfg = parse_config({"kind": "voisin-product", "construction": {"m": 2, "q": "3/2"}})
    assert cfg.m == 2 and cfg.q == Fraction(3, 2)


def test_large_integers_as_strings():
    cfg = parse_config({"kind": "voisin", "construction": {"polynomial": ["1", "-1", 0, 0, "1"]}})
    assert cfg.polynomial == (1, -1, 0, 0, 1)


def test_phi_replaces_default_polynomial():
    phi = [[0, 0, 0, -1], [1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]
    cfg = parse_config({"kind": "voisin", "construction": {"phi": phi}})
    assert cfg.polynomial is None and cfg.phi[1] == (1, 0, 0, 1)


@pytest.mark.parametrize("doc", [
    {},
    {"kind": "nonsense"},
    {"kind": "voisin", "construction": {"n": 1}},
    {"kind": "voisin", "construction": {"rho": 12}},
    {"kind": "voisin", "construction": {"m": 1}},
    {"kind": "oguiso", "construction": {"n": 2}},
    {"kind": "oguiso", "construction": {"d": 1}},
    {"kind": "voisin-product", "construction": {"n": 3}},
    {"kind": "voisin", "construction": {"polynomial": [1, 0, 0]}},
    {"kind": "voisin", "construction": {"phi": [[1, 0], [0]]}},
    {"kind": "voisin", "unknown": 1},
])
def test_invalid_documents(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_hash_and_seed():
    a = parse_config({"kind": "voisin", "seed": 1})
    b = parse_config({"kind": "voisin", "seed": 1})
    assert a.config_hash() == b.config_hash()
    assert a.with_seed(2).config_hash() != a.config_hash()
    assert len(a.config_hash()) == 64


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("kind = \n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_shipped_configs_parse(configs_dir):
    paths = sorted(configs_dir.glob("*.toml"))
    assert len(paths) >= 10
    for path in paths:
        load_config(path)
