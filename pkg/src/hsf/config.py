"""Experiment plans: JSON documents naming a scale, some sequences and a list of studies.

A minimal plan::

    {
      "schema": 1,
      "scale": {"formula": "linear", "n": 8},
      "sequences": [{"name": "e", "kind": "canonical_basis", "m": 0}],
      "studies": [{"kind": "frame_bounds", "sequence": "e", "p": 0}]
    }

Structural problems are caught by a JSON schema; index constraints and
cross references are then checked by hand. Every error carries the JSON
pointer of the offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from .scale import FORMULAS, MAX_INDEX

__all__ = ["ConfigError", "ExperimentPlan", "STUDY_KINDS", "SEQUENCE_KINDS", "parse_config"]

SCHEMA_VERSION = 1

SEQUENCE_KINDS = ("canonical_basis", "weighted_basis", "riesz_from_operator", "random_bessel")

# kind -> one-line description, used by --list-studies and --help
STUDY_KINDS = {
    "frame_bounds": "optimal frame bounds at one or more indices, with optional expected values",
    "completeness": "numerical rank of the family and its analysis operators across indices",
    "classify": "frame / upper / lower semi-frame verdict from bound trends over truncations",
    "transfer": "operator identities and bound equality for the transported family I_{p,r} psi",
    "propagation": "one-sided Bessel / lower bound / completeness propagation for r <= p <= m",
    "duality": "reconstruction f = iota^{-1} sum <f, psi_k>_t phi_k with a dual built at H_m",
    "collapse": "lower bound at H_q and norm of iota_{q,p}^{-1} as N grows (no frame for two spaces)",
    "unitarity": "isometry and invertibility of I_{p,r} over a range of index pairs",
    "pivot_adjoint": "pairing identity, involution and product rule of the pivot adjoint",
}

_INDEX = {"type": "integer", "minimum": -MAX_INDEX, "maximum": MAX_INDEX}
_TRUNCATIONS = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 3}
_POS = {"type": "integer", "minimum": 1}
_TOL = {"type": "number", "exclusiveMinimum": 0}

_SCALE = {
    "type": "object",
    "properties": {
        "formula": {"enum": list(FORMULAS)},
        "n": _POS,
        "weights": {"type": "array", "items": {"type": "number"}, "minItems": 1},
    },
    "required": ["formula"],
    "additionalProperties": False,
    "if": {"properties": {"formula": {"const": "explicit"}}},
    "then": {"required": ["weights"]},
    "else": {"required": ["n"], "not": {"required": ["weights"]}},
}

_OPERATOR = {
    "oneOf": [
        {"enum": ["diag_linear", "identity"]},
        {
            "type": "object",
            "properties": {"scalar": {"type": "number"}},
            "required": ["scalar"],
            "additionalProperties": False,
        },
        {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    ]
}

_SEQUENCE = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "kind": {"enum": list(SEQUENCE_KINDS)},
        "m": _INDEX,
        "s": {"type": "number"},
        "operator": _OPERATOR,
        "count": _POS,
        "redundancy": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["name", "kind", "m"],
    "additionalProperties": False,
}

_STUDY = {
    "type": "object",
    "properties": {
        "kind": {"type": "string"},
        "name": {"type": "string"},
        "sequence": {"type": "string"},
        "scale": _SCALE,
        "p": _INDEX,
        "q": _INDEX,
        "r": _INDEX,
        "m": _INDEX,
        "indices": {"type": "array", "items": _INDEX, "minItems": 1},
        "index_range": {"type": "array", "items": _INDEX, "minItems": 2, "maxItems": 2},
        "truncations": _TRUNCATIONS,
        "n_random": _POS,
        "n_ops": _POS,
        "tolerance": _TOL,
        "expect": {"type": "object"},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

PLAN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "scale": _SCALE,
        "sequences": {"type": "array", "items": _SEQUENCE},
        "studies": {"type": "array", "items": _STUDY},
        "output": {
            "type": "object",
            "properties": {"format": {"enum": ["csv", "json"]}, "path": {"type": "string"}},
            "additionalProperties": False,
        },
    },
    "required": ["schema", "scale", "studies"],
    "additionalProperties": False,
}

# parameters each study kind needs, beyond "kind"
_NEEDS = {
    "frame_bounds": ("sequence",),
    "completeness": ("sequence",),
    "classify": ("sequence", "p", "truncations"),
    "transfer": ("sequence", "p", "r"),
    "propagation": ("sequence", "r", "p", "m"),
    "duality": ("sequence", "r", "p", "m"),
    "collapse": ("sequence", "p", "q", "truncations"),
    "unitarity": (),
    "pivot_adjoint": (),
}


class ConfigError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


@dataclass
class ExperimentPlan:
    scale: dict
    sequences: dict
    studies: list
    seed: int = 0
    name: str = ""
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return self.raw


def _check_scale(desc: dict, ptr: str) -> None:
    for i, w in enumerate(desc.get("weights", [])):
        if w < 1:
            raise ConfigError(f"{ptr}/weights/{i}", f"weight below 1 ({w}); the generator must satisfy a_j >= 1")


def _scale_n(desc: dict) -> int:
    return len(desc["weights"]) if desc["formula"] == "explicit" else int(desc["n"])


def parse_config(text: str) -> ExperimentPlan:
    """Parse and fully validate a plan document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("/", f"not valid JSON: {exc}") from None
    validator = jsonschema.Draft202012Validator(PLAN_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(_pointer(err.absolute_path), err.message)

    _check_scale(doc["scale"], "/scale")
    sequences = {}
    for i, seq in enumerate(doc.get("sequences", [])):
        ptr = f"/sequences/{i}"
        if seq["name"] in sequences:
            raise ConfigError(f"{ptr}/name", f"duplicate sequence name {seq['name']!r}")
        if seq["kind"] == "riesz_from_operator" and "operator" not in seq:
            raise ConfigError(ptr, "riesz_from_operator needs an 'operator'")
        if isinstance(seq.get("operator"), list):
            n = _scale_n(doc["scale"])
            op = seq["operator"]
            if len(op) != n or any(len(row) != n for row in op):
                raise ConfigError(f"{ptr}/operator", f"operator matrix must be {n} x {n}")
        if seq["kind"] == "random_bessel" and "count" in seq and "redundancy" in seq:
            raise ConfigError(ptr, "give either 'count' or 'redundancy', not both")
        sequences[seq["name"]] = seq

    for i, study in enumerate(doc["studies"]):
        ptr = f"/studies/{i}"
        kind = study["kind"]
        if kind not in STUDY_KINDS:
            raise ConfigError(f"{ptr}/kind", f"unknown study kind {kind!r}; known kinds: {', '.join(STUDY_KINDS)}")
        for key in _NEEDS[kind]:
            if key not in study:
                raise ConfigError(ptr, f"study {kind!r} needs {key!r}")
        scale_desc = study.get("scale", doc["scale"])
        if "scale" in study:
            _check_scale(study["scale"], f"{ptr}/scale")
        if "sequence" in study:
            if study["sequence"] not in sequences:
                raise ConfigError(f"{ptr}/sequence", f"undefined sequence {study['sequence']!r}")
            seq = sequences[study["sequence"]]
            if isinstance(seq.get("operator"), list) and "scale" in study and _scale_n(scale_desc) != len(seq["operator"]):
                raise ConfigError(f"{ptr}/scale", "explicit operator size does not match this scale")
        if kind in ("propagation", "duality"):
            r, p, m = study["r"], study["p"], study["m"]
            if not (r <= p <= m):
                raise ConfigError(ptr, f"indices must satisfy r <= p <= m, got r={r}, p={p}, m={m}")
            if kind == "propagation" and sequences[study["sequence"]]["m"] < m:
                raise ConfigError(f"{ptr}/m", "sequence is declared in a larger space than H_m")
        if kind == "collapse" and study["q"] >= study["p"]:
            raise ConfigError(f"{ptr}/q", f"collapse study needs q < p, got q={study['q']}, p={study['p']}")
        if kind in ("classify", "collapse"):
            ns = study["truncations"]
            if any(b <= a for a, b in zip(ns, ns[1:])):
                raise ConfigError(f"{ptr}/truncations", "truncations must be strictly increasing")
            if scale_desc["formula"] == "explicit":
                raise ConfigError(f"{ptr}/scale" if "scale" in study else "/scale/formula",
                                  "sweeps over truncations need a weight formula, not explicit weights")
            if isinstance(sequences[study["sequence"]].get("operator"), list):
                raise ConfigError(f"{ptr}/sequence", "sweeps cannot use an explicit operator matrix")
        if kind == "unitarity" and "index_range" in study:
            lo, hi = study["index_range"]
            if lo > hi:
                raise ConfigError(f"{ptr}/index_range", "index range must be ordered")

    return ExperimentPlan(
        scale=doc["scale"],
        sequences=sequences,
        studies=list(doc["studies"]),
        seed=int(doc.get("seed", 0)),
        name=doc.get("name", ""),
        output=dict(doc.get("output", {})),
        raw=doc,
    )
