"""Example configuration: JSON schema, loading and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .algebra import QQ, MPoly, NFElem, NumberField, to_mpq
from .covers import PERMUTATIONS, parity_failures
from .linsys import VARS, SingularityChain
from .piclattice import BlowupGeometry, BlowupLattice, DivClass, evaluate_expression


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` holds ``(json_pointer, message)`` pairs."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [("", errors)]
        self.errors = list(errors)
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in self.errors))


class FieldMembershipError(ConfigError):
    pass


RATIONAL = {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"}
SCALAR = {"oneOf": [RATIONAL, {"type": "integer"}]}
ELEMENT = {"oneOf": [SCALAR, {"type": "array", "items": SCALAR, "minItems": 1}]}
PAIR = {"type": "array", "items": ELEMENT, "minItems": 2, "maxItems": 2}
INT_LIST = {"type": "array", "items": {"type": "integer"}}
CLASS = {
    "type": "object",
    "required": ["deg", "mults"],
    "properties": {"deg": {"type": "integer"}, "mults": INT_LIST},
    "additionalProperties": False,
}
CHAIN = {
    "type": "object",
    "required": ["mults"],
    "properties": {
        "point": {"oneOf": [{"type": "string"}, PAIR]},
        "mults": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "dirs": {"type": "array", "items": PAIR},
    },
    "additionalProperties": False,
}
NAME_LIST = {"type": "array", "items": {"type": "string"}}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["field", "points", "classes", "h0_targets"],
    "properties": {
        "schema_version": {"const": 1},
        "description": {"type": "string"},
        "field": {
            "type": "object",
            "required": ["min_poly"],
            "properties": {
                "generator": {"type": "string", "pattern": r"^[A-Za-z][A-Za-z0-9_]*$"},
                "min_poly": {"type": "array", "items": SCALAR, "minItems": 2},
            },
            "additionalProperties": False,
        },
        "points": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "coords", "exceptional"],
                "properties": {
                    "name": {"type": "string"},
                    "coords": PAIR,
                    "exceptional": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "directions": {"type": "array", "items": PAIR},
                },
                "additionalProperties": False,
            },
        },
        "base": {
            "type": "object",
            "properties": {"chi": {"type": "integer"}, "p_g": {"type": "integer"}},
            "additionalProperties": False,
        },
        "classes": {"type": "object", "additionalProperties": CLASS},
        "curves": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["degree"],
                "properties": {
                    "degree": {"type": "integer", "minimum": 0},
                    "mults": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                    "chains": {"type": "array", "items": CHAIN},
                },
                "additionalProperties": False,
            },
        },
        "lines": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        },
        "h0_targets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "expr"],
                "properties": {
                    "name": {"type": "string"},
                    "expr": {"type": "object", "additionalProperties": {"type": "integer"}},
                },
                "additionalProperties": False,
            },
        },
        "bidouble": {
            "type": "object",
            "properties": {"D": NAME_LIST, "L": NAME_LIST},
            "additionalProperties": False,
        },
        "fibration": {
            "type": "object",
            "required": ["class"],
            "properties": {"description": {"type": "string"}, "class": CLASS, "base_genus": {"type": "integer"}},
            "additionalProperties": False,
        },
        "minus_one_curves": {"type": "integer", "minimum": 0},
        "image": {
            "type": "object",
            "required": ["map_system", "w_system", "branch_curves", "divide_by"],
            "properties": {
                "map_system": {"type": "string"},
                "w_system": {"type": "string"},
                "branch_curves": NAME_LIST,
                "divide_by": NAME_LIST,
                "alternate_chart": {"type": "array", "items": SCALAR, "minItems": 2, "maxItems": 2},
            },
            "additionalProperties": False,
        },
        "checks": {
            "type": "object",
            "properties": {
                "intersections": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["curves", "point", "value"],
                        "properties": {
                            "curves": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                            "point": {"type": "string"},
                            "value": {"type": "integer"},
                        },
                        "additionalProperties": False,
                    },
                }
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise ConfigError([(_pointer(e.absolute_path), e.message) for e in errors])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveSpec:
    name: str
    degree: int
    chains: tuple


@dataclass
class ExampleConfig:
    field: NumberField
    geometry: BlowupGeometry
    classes: dict
    targets: list
    curves: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    base_chi: int = 1
    base_pg: int = 0
    bidouble_D: tuple = ("D1", "D2", "D3")
    bidouble_L: tuple = ("L1", "L2", "L3")
    fibration: Mapping | None = None
    minus_one_curves: int | None = None
    image: Mapping | None = None
    checks: Mapping = field(default_factory=dict)
    source: Mapping = field(default_factory=dict, repr=False)

    @property
    def lattice(self) -> BlowupLattice:
        return self.geometry.lattice

    @property
    def point_index(self) -> dict:
        return {n: i for i, n in enumerate(self.geometry.point_names)}

    def target(self, name: str) -> DivClass:
        for t_name, D in self.targets:
            if t_name == name:
                return D
        if name in self.classes:
            return self.classes[name]
        raise KeyError(f"no h0 target or class named {name!r}")

    def class_of(self, expr: Mapping[str, int]) -> DivClass:
        return evaluate_expression(expr, self.classes, self.lattice)

    def line_equation(self, name: str) -> MPoly:
        a, b = (self.geometry.points[self.point_index[p]] for p in self.lines[name])
        x, y = MPoly.gens(self.field, VARS)
        eq = x * (b[1] - a[1]) - y * (b[0] - a[0]) + (a[1] * (b[0] - a[0]) - a[0] * (b[1] - a[1]))
        if not eq:
            raise ConfigError([(f"/lines/{name}", "the two points coincide")])
        return eq.monic()

    def with_geometry(self, geometry: BlowupGeometry) -> "ExampleConfig":
        out = ExampleConfig(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        out.geometry = geometry
        return out


def parse_element(F: NumberField, value, where: str) -> NFElem:
    coeffs = value if isinstance(value, list) else [value]
    if len(coeffs) > F.degree:
        raise FieldMembershipError(
            [(where, f"{len(coeffs)} coefficients given but elements of the field of degree {F.degree} have at most {F.degree}")]
        )
    try:
        return F.from_coeffs([to_mpq(c) for c in coeffs])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError([(where, str(exc))]) from exc


def parse_pair(F, value, where):
    return (parse_element(F, value[0], where + "/0"), parse_element(F, value[1], where + "/1"))


def build_field(spec: Mapping) -> NumberField:
    coeffs = [to_mpq(c) for c in spec["min_poly"]]
    if coeffs[-1] == 0:
        raise ConfigError([("/field/min_poly", "leading coefficient is zero")])
    lead = coeffs[-1]
    coeffs = [c / lead for c in coeffs]
    if len(coeffs) == 2:
        return QQ
    try:
        return NumberField(coeffs, name=spec.get("generator", "r"))
    except ValueError as exc:
        raise ConfigError([("/field/min_poly", str(exc))]) from exc


def config_from_dict(doc: Mapping) -> ExampleConfig:
    validate_document(doc)
    F = build_field(doc["field"])

    names, points, directions, groups, labels = [], [], [], [], []
    for k, p in enumerate(doc["points"]):
        where = f"/points/{k}"
        names.append(p["name"])
        points.append(parse_pair(F, p["coords"], where + "/coords"))
        dirs = tuple(parse_pair(F, d, f"{where}/directions/{j}") for j, d in enumerate(p.get("directions", [])))
        for j, (u, v) in enumerate(dirs):
            if not u and not v:
                raise ConfigError([(f"{where}/directions/{j}", "direction (0, 0)")])
        if len(dirs) != len(p["exceptional"]) - 1:
            raise ConfigError([(where + "/directions", f"{len(p['exceptional'])} exceptional classes need {len(p['exceptional']) - 1} directions")])
        directions.append(dirs)
        groups.append(tuple(range(len(labels), len(labels) + len(p["exceptional"]))))
        labels.extend(p["exceptional"])
    if len(set(names)) != len(names):
        raise ConfigError([("/points", "point names must be unique")])
    if len(set(labels)) != len(labels):
        raise ConfigError([("/points", "exceptional labels must be unique")])
    lattice = BlowupLattice(tuple(labels))
    geometry = BlowupGeometry(F, lattice, tuple(names), tuple(points), tuple(directions), tuple(groups))

    classes = {name: _parse_class(c, lattice, f"/classes/{name}") for name, c in doc["classes"].items()}

    targets = []
    for k, t in enumerate(doc["h0_targets"]):
        try:
            targets.append((t["name"], evaluate_expression(t["expr"], classes, lattice)))
        except KeyError as exc:
            raise ConfigError([(f"/h0_targets/{k}/expr", str(exc))]) from exc

    bid = doc.get("bidouble", {})
    D_names = tuple(bid.get("D", ("D1", "D2", "D3")))
    L_names = tuple(bid.get("L", ("L1", "L2", "L3")))
    if all(n in classes for n in D_names + L_names) and len(D_names) == 3 and len(L_names) == 3:
        bad = parity_failures([classes[n] for n in L_names], [classes[n] for n in D_names])
        if bad:
            errs = []
            for g in bad:
                _, j, k = PERMUTATIONS[g]
                errs.append((f"/classes/{L_names[g]}", f"parity 2{L_names[g]} = {D_names[j]} + {D_names[k]} fails"))
            raise ConfigError(errs)

    index = {n: i for i, n in enumerate(names)}
    curves = {}
    for name, c in doc.get("curves", {}).items():
        curves[name] = CurveSpec(name, c["degree"], _curve_chains(F, geometry, index, c, f"/curves/{name}"))

    lines = {}
    for name, pts in doc.get("lines", {}).items():
        for p in pts:
            if p not in index:
                raise ConfigError([(f"/lines/{name}", f"unknown point {p!r}")])
        lines[name] = tuple(pts)

    fib = doc.get("fibration")
    if fib is not None:
        fib = dict(fib)
        fib["class"] = _parse_class(fib["class"], lattice, "/fibration/class")

    image = doc.get("image")
    if image is not None:
        image = dict(image)
        known = {t for t, _ in targets} | set(classes)
        for key in ("map_system", "w_system"):
            if image[key] not in known:
                raise ConfigError([(f"/image/{key}", f"unknown target {image[key]!r}")])
        for key in ("branch_curves", "divide_by"):
            for j, n in enumerate(image[key]):
                if n not in curves and n not in lines:
                    raise ConfigError([(f"/image/{key}/{j}", f"unknown curve {n!r}")])
        if "alternate_chart" in image:
            image["alternate_chart"] = tuple(to_mpq(v) for v in image["alternate_chart"])

    base = doc.get("base", {})
    return ExampleConfig(
        field=F,
        geometry=geometry,
        classes=classes,
        targets=targets,
        curves=curves,
        lines=lines,
        base_chi=base.get("chi", 1),
        base_pg=base.get("p_g", 0),
        bidouble_D=D_names,
        bidouble_L=L_names,
        fibration=fib,
        minus_one_curves=doc.get("minus_one_curves"),
        image=image,
        checks=doc.get("checks", {}),
        source=doc,
    )


def _parse_class(c: Mapping, lattice: BlowupLattice, where: str) -> DivClass:
    mults = list(c["mults"])
    if len(mults) == lattice.n + 1 and mults[0] == c["deg"]:
        mults = mults[1:]
    if len(mults) != lattice.n:
        raise ConfigError([(where + "/mults", f"expected {lattice.n} multiplicities, got {len(mults)}")])
    return DivClass(c["deg"], tuple(mults))


def _curve_chains(F, geometry, index, c, where) -> tuple:
    if "mults" in c and "chains" in c:
        raise ConfigError([(where, "give either 'mults' or 'chains', not both")])
    out = []
    if "mults" in c:
        if len(c["mults"]) != len(geometry.points):
            raise ConfigError([(where + "/mults", f"one multiplicity list per point ({len(geometry.points)}) expected")])
        for k, ms in enumerate(c["mults"]):
            if len(ms) > len(geometry.directions[k]) + 1:
                raise ConfigError([(f"{where}/mults/{k}", "chain longer than the point's direction data")])
            out.append(geometry.chain(k, ms))
    for j, ch in enumerate(c.get("chains", [])):
        w = f"{where}/chains/{j}"
        p = ch.get("point")
        if isinstance(p, str):
            if p not in index:
                raise ConfigError([(w + "/point", f"unknown point {p!r}")])
            k = index[p]
            base = geometry.points[k]
            dirs = geometry.directions[k]
        elif p is None:
            raise ConfigError([(w, "chain needs a point")])
        else:
            base = parse_pair(F, p, w + "/point")
            dirs = ()
        if "dirs" in ch:
            dirs = tuple(parse_pair(F, d, f"{w}/dirs/{i}") for i, d in enumerate(ch["dirs"]))
        n = len(ch["mults"])
        if len(dirs) < n - 1:
            raise ConfigError([(w, f"{n} levels need {n - 1} directions")])
        try:
            out.append(SingularityChain(base, tuple(ch["mults"]), dirs[: max(n - 1, 0)]))
        except ValueError as exc:
            raise ConfigError([(w, str(exc))]) from exc
    return tuple(out)


def load_config(path: str | Path | None = None) -> ExampleConfig:
    """Read and validate a configuration file; ``None`` loads the shipped example."""
    try:
        if path is None:
            text = resources.files("surfinv").joinpath("data/example.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([("", f"cannot read configuration: {exc}")]) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("", f"JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")]) from exc
    return config_from_dict(doc)


def shipped_example_text() -> str:
    return resources.files("surfinv").joinpath("data/example.json").read_text(encoding="utf-8")
