"""Wire formats: exact coefficient strings, divisors, sections and run configs.

Polynomials travel as arrays of exact ``"p/q"`` strings, lowest degree first.
Divisors travel as ``{"places": [{"basis_poly": [...], "mult": m}], "inf_mult": k}``.

Config files are TOML::

    [E1]
    A = ["0", "1"]
    B = ["1"]
    P = { x_num = ["0"], y_num = ["1"] }     # x_den / y_den default to ["1"]
    Q = "identity"                           # optional

    [E2]
    ...

    [pair]
    independence_asserted = true

    [ar]
    a = ["0", "1"]
    b = ["1", "1"]

    [params]
    n_max = 10
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .divisor import DivisorP1
from .errors import EllGcdError, NotOnCurve, SchemaError, SingularModel
from .polynomial import RationalPolynomial, as_fraction
from .ratfunc import RationalFunction
from .surface import IDENTITY, FFPoint, SurfaceModel

__all__ = [
    "poly_to_json",
    "poly_from_json",
    "parse_coeff_list",
    "divisor_to_json",
    "divisor_from_json",
    "divisor_compact",
    "point_to_json",
    "point_from_json",
    "surface_to_json",
    "RunConfig",
    "load_config",
    "parse_config",
    "config_digest",
    "fraction_str",
]

_PARAM_KEYS = {"n_max", "n_min", "prime_max", "depth", "t_height_cap", "m", "curve", "t", "workers"}


def fraction_str(q: Fraction) -> str:
    return str(as_fraction(q))


def poly_to_json(p: RationalPolynomial) -> list:
    return [fraction_str(c) for c in p.coeffs]


def poly_from_json(data) -> RationalPolynomial:
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        data = [data]
    if not isinstance(data, list):
        raise SchemaError(f"expected a coefficient array, got {data!r}")
    try:
        return RationalPolynomial(data)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad coefficient array {data!r}: {exc}") from exc


def parse_coeff_list(text: str) -> RationalPolynomial:
    """``"0,1"`` -> t (comma separated, lowest degree first)."""
    parts = [s for s in (p.strip() for p in text.split(",")) if s]
    return poly_from_json(parts)


def divisor_to_json(D: DivisorP1) -> dict:
    return {
        "places": [{"basis_poly": poly_to_json(p), "mult": m} for p, m in D.items],
        "inf_mult": D.inf_mult,
    }


def divisor_from_json(data: dict) -> DivisorP1:
    try:
        finite = [(poly_from_json(e["basis_poly"]), int(e["mult"])) for e in data.get("places", [])]
        return DivisorP1(finite, int(data.get("inf_mult", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad divisor record: {exc}") from exc


def divisor_compact(D: DivisorP1) -> str:
    """One-cell CSV form: ``2*[0 1];1*oo`` (coefficients lowest degree first)."""
    parts = [f"{m}*[{' '.join(poly_to_json(p))}]" for p, m in D.items]
    if D.inf_mult:
        parts.append(f"{D.inf_mult}*oo")
    return ";".join(parts)


def point_to_json(P: FFPoint):
    if P.is_identity:
        return "identity"
    return {
        "x_num": poly_to_json(P.x.num), "x_den": poly_to_json(P.x.den),
        "y_num": poly_to_json(P.y.num), "y_den": poly_to_json(P.y.den),
    }


def point_from_json(E: SurfaceModel, data) -> FFPoint:
    if data == "identity":
        return IDENTITY
    if not isinstance(data, dict) or "x_num" not in data or "y_num" not in data:
        raise SchemaError(f'a section is "identity" or a table with x_num and y_num, got {data!r}')
    unknown = set(data) - {"x_num", "x_den", "y_num", "y_den"}
    if unknown:
        raise SchemaError(f"unknown section keys {sorted(unknown)}")
    try:
        x = RationalFunction(poly_from_json(data["x_num"]), poly_from_json(data.get("x_den", ["1"])))
        y = RationalFunction(poly_from_json(data["y_num"]), poly_from_json(data.get("y_den", ["1"])))
        return E.point(x, y)
    except ZeroDivisionError as exc:
        raise SchemaError(f"section with zero denominator: {exc}") from exc
    except NotOnCurve as exc:
        raise SchemaError(str(exc)) from exc


def surface_to_json(E: SurfaceModel) -> dict:
    return {"A": poly_to_json(E.A), "B": poly_to_json(E.B)}


@dataclass
class RunConfig:
    """Validated run configuration: up to two (surface, P, Q) members."""

    members: dict = field(default_factory=dict)
    independence_asserted: bool = True
    ar: tuple | None = None
    params: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        """Order-stable JSON-able view, used for the reproducibility digest."""
        out = {
            "members": {
                k: {"surface": surface_to_json(E), "P": point_to_json(P), "Q": point_to_json(Q)}
                for k, (E, P, Q) in sorted(self.members.items())
            },
            "independence_asserted": self.independence_asserted,
            "params": {k: self.params[k] for k in sorted(self.params)},
        }
        if self.ar is not None:
            out["ar"] = {"a": poly_to_json(self.ar[0]), "b": poly_to_json(self.ar[1])}
        return out


def config_digest(canonical: dict) -> str:
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _member(name: str, table) -> tuple:
    if not isinstance(table, dict):
        raise SchemaError(f"[{name}] must be a table")
    unknown = set(table) - {"A", "B", "P", "Q"}
    if unknown:
        raise SchemaError(f"unknown keys in [{name}]: {sorted(unknown)}")
    for key in ("A", "B", "P"):
        if key not in table:
            raise SchemaError(f"[{name}] is missing {key}")
    try:
        E = SurfaceModel(poly_from_json(table["A"]), poly_from_json(table["B"]))
    except SingularModel as exc:
        raise SchemaError(str(exc)) from exc
    P = point_from_json(E, table["P"])
    Q = point_from_json(E, table.get("Q", "identity"))
    return E, P, Q


def parse_config(data: dict) -> RunConfig:
    """Validate an already-decoded TOML document."""
    if not isinstance(data, dict):
        raise SchemaError("config root must be a table")
    unknown = set(data) - {"E1", "E2", "pair", "ar", "params"}
    if unknown:
        raise SchemaError(f"unknown top-level keys: {sorted(unknown)}")
    cfg = RunConfig()
    for name in ("E1", "E2"):
        if name in data:
            cfg.members[name] = _member(name, data[name])
    pair = data.get("pair", {})
    if not isinstance(pair, dict) or set(pair) - {"independence_asserted"}:
        raise SchemaError("[pair] accepts only independence_asserted")
    flag = pair.get("independence_asserted", True)
    if not isinstance(flag, bool):
        raise SchemaError("independence_asserted must be a boolean")
    cfg.independence_asserted = flag
    if "ar" in data:
        ar = data["ar"]
        if not isinstance(ar, dict) or set(ar) != {"a", "b"}:
            raise SchemaError("[ar] needs exactly a and b")
        cfg.ar = (poly_from_json(ar["a"]), poly_from_json(ar["b"]))
    params = data.get("params", {})
    if not isinstance(params, dict) or set(params) - _PARAM_KEYS:
        raise SchemaError(f"[params] keys must be among {sorted(_PARAM_KEYS)}")
    cfg.params = dict(params)
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError(f"malformed TOML in {path}: {exc}") from exc
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_config(data)
    except SchemaError:
        raise
    except EllGcdError as exc:
        raise SchemaError(str(exc)) from exc
