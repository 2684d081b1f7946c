"""Construction configs: TOML documents validated against a JSON schema.

Integers may be written as strings (for large coefficients) and rationals
as ``"p/q"`` strings. Example::

    kind = "voisin"
    seed = 0

    [construction]
    n = 2
    polynomial = [1, -1, 0, 0, 1]   # constant term first

    [sampling]
    count = 100
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ._exact import fstr

__all__ = ["ConfigError", "ConstructionConfig", "load_config", "parse_config", "schema", "LEHMER"]

LEHMER = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)

DEFAULTS = {
    "voisin": {"n": 2, "polynomial": (1, -1, 0, 0, 1)},
    "voisin-product": {"n": 2, "polynomial": (1, -1, 0, 0, 1), "m": 1, "q": 1},
    "oguiso": {"polynomial": LEHMER},
    "oguiso-product": {"polynomial": LEHMER, "d": 1},
}


class ConfigError(ValueError):
    pass


def schema(name: str) -> dict:
    text = resources.files("kahler_obstruct").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ConstructionConfig:
    kind: str
    n: int | None = None
    polynomial: tuple | None = None
    phi: tuple | None = None
    rho: int | None = None
    m: int | None = None
    q: Fraction | None = None
    d: int | None = None
    fixed_points: int = 2
    prime_bound: int = 1000
    digits: int = 50
    samples: int = 100
    symbolic: bool = True
    confluence_trials: int = 100
    seed: int = 0
    corrupt_rule: str | None = None
    skip: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        for k, v in asdict(self).items():
            if isinstance(v, Fraction):
                v = fstr(v)
            elif isinstance(v, tuple):
                v = [list(r) if isinstance(r, tuple) else r for r in v]
            out[k] = v
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_seed(self, seed: int) -> "ConstructionConfig":
        from dataclasses import replace

        return replace(self, seed=seed)


def _int(x) -> int:
    return int(x)


def parse_config(doc: dict) -> ConstructionConfig:
    """Validate a parsed document and fill in kind-specific defaults."""
    try:
        jsonschema.validate(doc, schema("config"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    kind = doc["kind"]
    con = dict(DEFAULTS[kind])
    given = doc.get("construction", {})
    if "phi" in given:
        con.pop("polynomial", None)
    con.update(given)
    if kind == "voisin-product" and con.get("n", 2) != 2:
        raise ConfigError("voisin-product needs n = 2")
    if kind.startswith("oguiso") and ("n" in given or "phi" in given):
        raise ConfigError("oguiso configs take a polynomial, not n or phi")
    if not kind.startswith("oguiso") and ("rho" in given or "d" in given):
        raise ConfigError("rho and d only apply to oguiso configs")
    if kind != "voisin-product" and ("m" in given or "q" in given):
        raise ConfigError("m and q only apply to voisin-product configs")
    if kind != "oguiso-product" and "d" in given:
        raise ConfigError("d only applies to oguiso-product configs")
    phi = None
    if "phi" in con:
        rows = [tuple(_int(x) for x in r) for r in con["phi"]]
        if any(len(r) != len(rows) for r in rows):
            raise ConfigError("phi must be a square matrix")
        phi = tuple(rows)
    poly = tuple(_int(x) for x in con["polynomial"]) if "polynomial" in con else None
    if poly is not None and poly[-1] == 0:
        raise ConfigError("polynomial must have a nonzero leading coefficient")
    cert = doc.get("certification", {})
    samp = doc.get("sampling", {})
    fault = doc.get("fault", {})
    return ConstructionConfig(
        kind=kind,
        n=con.get("n") if not kind.startswith("oguiso") else None,
        polynomial=poly,
        phi=phi,
        rho=con.get("rho"),
        m=con.get("m"),
        q=Fraction(con["q"]) if "q" in con else None,
        d=con.get("d"),
        fixed_points=con.get("fixed_points", 2),
        prime_bound=cert.get("prime_bound", 1000),
        digits=cert.get("digits", 50),
        samples=samp.get("count", 100),
        symbolic=samp.get("symbolic", True),
        confluence_trials=doc.get("engine", {}).get("confluence_trials", 100),
        seed=doc.get("seed", 0),
        corrupt_rule=fault.get("corrupt_rule"),
        skip=tuple(fault.get("skip", ())),
    )


def load_config(path) -> ConstructionConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from None
    return parse_config(doc)
