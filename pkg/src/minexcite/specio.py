"""Document formats: property specs, excitation plans, datasets, scenarios.

Documents are YAML.  Matrices appear as literal strings in the format
"rows ; separated, entries , separated" with exact rational entries
("p/q", integers, or decimal strings such as "0.5").  Bare YAML integers
are exact; bare YAML floats are re-read from their shortest decimal
representation, so write non-integer values as strings when in doubt.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple, Union

import yaml

from .errors import SpecValidationError
from .properties import (
    BoundedSet,
    Controllability,
    Dims,
    Identifiability,
    LinearConstraint,
    LinearStructure,
    Mode,
    PropertySpec,
    Sparsity,
    Stabilizability,
    SystemPair,
    chain_expr,
    format_expr,
    parse_expr,
    validate_property,
)
from .ratmat import format_matrix, format_rational, parse_matrix
from .richness import Dataset, InputSection
from .harness import Scenario


def parse_scalar(value) -> Fraction:
    """Exact rational from a YAML scalar (int, float, or string)."""
    if isinstance(value, bool):
        raise SpecValidationError(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise SpecValidationError(f"cannot read {value!r} as a rational number")


def _parse_vector(value) -> tuple:
    if isinstance(value, str):
        return tuple(Fraction(v.strip()) for v in value.split(","))
    if isinstance(value, (list, tuple)):
        return tuple(parse_scalar(v) for v in value)
    raise SpecValidationError(f"cannot read {value!r} as a vector")


def _parse_set(value) -> BoundedSet:
    if not isinstance(value, (list, tuple)) or not value:
        raise SpecValidationError("a value set is a non-empty list of [lo, hi] pairs")
    pairs = []
    for piece in value:
        if isinstance(piece, (list, tuple)) and len(piece) == 2:
            pairs.append((parse_scalar(piece[0]), parse_scalar(piece[1])))
        else:
            # a bare scalar denotes a single point
            v = parse_scalar(piece)
            pairs.append((v, v))
    return BoundedSet.from_pairs(pairs)


def _load_doc(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text()
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{source}: expected a mapping at the top level")
    return doc


def _index_pairs(value, what: str) -> frozenset:
    pairs = set()
    for item in value or []:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise SpecValidationError(f"{what} entries are [row, col] pairs, got {item!r}")
        pairs.add((int(item[0]), int(item[1])))
    return frozenset(pairs)


def load_property(source: Union[str, Path, dict]) -> Tuple[PropertySpec, Dims]:
    """Read a property document; returns the spec and its dimensions."""
    doc = _load_doc(source)
    try:
        kind = str(doc["type"]).lower()
        dims = Dims(int(doc["n"]), int(doc.get("m", 0)))
    except KeyError as exc:
        raise SpecValidationError(f"property document is missing field {exc}") from exc
    if kind == "identifiability":
        prop: PropertySpec = Identifiability()
    elif kind == "stabilizability":
        prop = Stabilizability()
    elif kind == "controllability":
        prop = Controllability()
    elif kind == "sparsity":
        prop = Sparsity(
            _index_pairs(doc.get("zeros_A"), "zeros_A"),
            _index_pairs(doc.get("zeros_B"), "zeros_B"),
        )
    elif kind in ("linear_structure", "structure"):
        raw = doc.get("constraints")
        if not raw:
            raise SpecValidationError("a linear structure needs a constraints list")
        constraints = tuple(
            LinearConstraint(_parse_vector(c["h"]), _parse_set(c["set"])) for c in raw
        )
        expr_text = doc.get("expr")
        mode_text = doc.get("mode")
        if expr_text is None:
            expr = chain_expr(len(constraints), ["&"] * (len(constraints) - 1))
            mode = Mode.INTERSECTION if mode_text is None else Mode(mode_text)
        else:
            expr = parse_expr(str(expr_text))
            mode = Mode.EXPRESSION if mode_text is None else Mode(mode_text)
        prop = LinearStructure(constraints, expr, mode)
    else:
        raise SpecValidationError(f"unknown property type {kind!r}")
    validate_property(prop, dims)
    return prop, dims


def dump_property(prop: PropertySpec, dims: Dims) -> str:
    doc: dict = {"n": dims.n, "m": dims.m}
    if isinstance(prop, Identifiability):
        doc["type"] = "identifiability"
    elif isinstance(prop, Stabilizability):
        doc["type"] = "stabilizability"
    elif isinstance(prop, Controllability):
        doc["type"] = "controllability"
    elif isinstance(prop, Sparsity):
        doc["type"] = "sparsity"
        doc["zeros_A"] = [list(p) for p in sorted(prop.zeros_a)]
        doc["zeros_B"] = [list(p) for p in sorted(prop.zeros_b)]
    else:
        doc["type"] = "linear_structure"
        doc["constraints"] = [
            {
                "h": ", ".join(format_rational(v) for v in c.h),
                "set": [[format_rational(lo), format_rational(hi)] for lo, hi in c.values.pieces],
            }
            for c in prop.constraints
        ]
        doc["expr"] = format_expr(prop.expr)
        doc["mode"] = prop.mode.value
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_input_section(source: Union[str, Path, dict]) -> InputSection:
    doc = _load_doc(source)
    n, m, k = int(doc["n"]), int(doc.get("m", 0)), int(doc["k"])
    x = parse_matrix(str(doc.get("X", "")), rows=n, cols=k)
    u = parse_matrix(str(doc.get("U", "")), rows=m, cols=k)
    return InputSection(x, u)


def dump_input_section(section: InputSection) -> str:
    doc = {
        "n": section.n,
        "m": section.m,
        "k": section.k,
        "X": format_matrix(section.x_minus),
        "U": format_matrix(section.u_minus),
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_dataset(source: Union[str, Path, dict]) -> Dataset:
    doc = _load_doc(source)
    section = load_input_section(doc)
    if "Xp" not in doc:
        raise SpecValidationError("a dataset document needs the feedback block Xp")
    x_plus = parse_matrix(str(doc["Xp"]), rows=section.n, cols=section.k)
    return Dataset(section, x_plus)


def dump_dataset(d: Dataset) -> str:
    doc = {
        "n": d.section.n,
        "m": d.section.m,
        "k": d.section.k,
        "X": format_matrix(d.section.x_minus),
        "U": format_matrix(d.section.u_minus),
        "Xp": format_matrix(d.x_plus),
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_scenario(source: Union[str, Path], base_dir: Optional[Path] = None) -> Scenario:
    doc = _load_doc(source)
    if base_dir is None and not isinstance(source, dict):
        base_dir = Path(source).parent
    dims = Dims(int(doc["n"]), int(doc.get("m", 0)))
    hidden_doc = doc.get("hidden")
    if not isinstance(hidden_doc, dict):
        raise SpecValidationError("scenario needs hidden: {A: ..., B: ...}")
    a = parse_matrix(str(hidden_doc["A"]), rows=dims.n, cols=dims.n)
    b = parse_matrix(str(hidden_doc.get("B", "")), rows=dims.n, cols=dims.m)
    hidden = SystemPair(a, b)
    prop_doc = doc.get("property")
    if isinstance(prop_doc, str):
        path = Path(prop_doc)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        prop, prop_dims = load_property(path)
    elif isinstance(prop_doc, dict):
        merged = dict(prop_doc)
        merged.setdefault("n", dims.n)
        merged.setdefault("m", dims.m)
        prop, prop_dims = load_property(merged)
    else:
        raise SpecValidationError("scenario needs a property mapping or path")
    if prop_dims != dims:
        raise SpecValidationError("property dimensions disagree with the scenario")
    plan_doc = doc.get("plan", "designed")
    if isinstance(plan_doc, str) and plan_doc.lower() == "designed":
        plan = None
    elif isinstance(plan_doc, dict):
        x_text = str(plan_doc.get("X", ""))
        u_text = str(plan_doc.get("U", ""))
        x = parse_matrix(x_text, rows=dims.n)
        u = parse_matrix(u_text, rows=dims.m, cols=x.cols)
        plan = InputSection(x, u)
    else:
        raise SpecValidationError("plan must be 'designed' or {X: ..., U: ...}")
    seed = int(doc.get("seed", 0))
    return Scenario(dims, hidden, prop, plan, seed)


def dump_scenario(sc: Scenario) -> str:
    doc: dict = {
        "n": sc.dims.n,
        "m": sc.dims.m,
        "hidden": {"A": format_matrix(sc.hidden.a), "B": format_matrix(sc.hidden.b)},
        "property": yaml.safe_load(dump_property(sc.prop, sc.dims)),
        "plan": "designed"
        if sc.plan is None
        else {"X": format_matrix(sc.plan.x_minus), "U": format_matrix(sc.plan.u_minus)},
        "seed": sc.seed,
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
