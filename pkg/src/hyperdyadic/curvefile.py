"""Curve files: a versioned JSON list of equations y^2 = c f(x), validated on load."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .certify import CurveInput
from .errors import CurveFormatError
from .polys import ZZ, Poly

__all__ = ["SCHEMA_VERSION", "CURVE_FILE_SCHEMA", "CurveRecord", "CurveFile", "load_curve_file",
           "parse_curve_file", "fixture_path"]

SCHEMA_VERSION = 1

_INT_LIST = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

CURVE_FILE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "CurveFile",
    "type": "object",
    "required": ["schema_version", "curves"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "curves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "c", "f"],
                "additionalProperties": False,
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "c": {"type": "integer"},
                    "f": _INT_LIST,
                    "base_residue_degree": {"type": "integer", "minimum": 1, "default": 1},
                    "odd_primes": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["p", "factors"],
                            "additionalProperties": False,
                            "properties": {
                                "p": {"type": "integer", "minimum": 3},
                                "factors": {"type": "array", "items": {**_INT_LIST, "maxItems": 3},
                                            "minItems": 1},
                            },
                        },
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class CurveRecord:
    curve: CurveInput
    odd_primes: dict = field(default_factory=dict)  # p -> list of integer factor coefficient lists

    @property
    def label(self) -> str:
        return self.curve.label

    def factors_at(self, p: int) -> list:
        if p not in self.odd_primes:
            raise KeyError(f"curve {self.label!r} has no factored form for p = {p}")
        return self.odd_primes[p]


@dataclass(frozen=True)
class CurveFile:
    records: tuple

    def labels(self) -> list:
        return [r.label for r in self.records]

    def get(self, label: str | None = None) -> CurveRecord:
        if label is None:
            if len(self.records) != 1:
                raise KeyError(f"file holds {len(self.records)} curves; pass a label")
            return self.records[0]
        for r in self.records:
            if r.label == label:
                return r
        raise KeyError(f"no curve labelled {label!r}; have {self.labels()}")


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def parse_curve_file(data: dict) -> CurveFile:
    try:
        jsonschema.validate(data, CURVE_FILE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CurveFormatError(f"schema error at {list(exc.absolute_path)}: {exc.message}") from None
    records, seen = [], set()
    for entry in data["curves"]:
        label = entry["label"]
        if label in seen:
            raise CurveFormatError(f"duplicate label {label!r}")
        seen.add(label)
        curve = CurveInput(entry["c"], tuple(entry["f"]), entry.get("base_residue_degree", 1), label)
        odd = {}
        for block in entry.get("odd_primes", []):
            p = block["p"]
            if not _is_prime(p) or p == 2:
                raise CurveFormatError(f"{label}: {p} is not an odd prime")
            prod = Poly(ZZ, [1])
            for cs in block["factors"]:
                prod = prod * Poly(ZZ, cs)
            if prod != curve.poly():
                raise CurveFormatError(f"{label}: factors for p = {p} do not multiply to f")
            odd[p] = [list(cs) for cs in block["factors"]]
        records.append(CurveRecord(curve, odd))
    return CurveFile(tuple(records))


def load_curve_file(path) -> CurveFile:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CurveFormatError(f"{path}: not valid JSON ({exc})") from None
    return parse_curve_file(data)


def fixture_path(name: str = "curves.json") -> Path:
    return Path(__file__).parent / "data" / name
