"""JSON reports for certificates, stable models, nodes, graphs, pictures and J[2].

Integers that may exceed 2^53 in absolute value are written as decimal
strings and valuations as {num, den}, so no value is ever a float.
"""

from __future__ import annotations

import jsonschema

from .certify import StarCertificate, Verdict
from .clusters import ClusterPicture, picture_from_certificate, shifted_picture
from .fibre import DualGraph, minimal_regular_graph, nodes, stable_graph, stable_model
from .polys import Poly
from .two_torsion import kernel_report

__all__ = ["jint", "certificate_json", "model_json", "nodes_json", "picture_json", "analyze_json",
           "REPORT_SCHEMA", "validate_report", "GOOD_ORDINARY"]

GOOD_ORDINARY = "good ordinary reduction"

_SAFE = 2 ** 53


def jint(n: int):
    n = int(n)
    return n if -_SAFE < n < _SAFE else str(n)


def _unram(x) -> list:
    return [jint(v) for v in x.to_ints()]


def _fq(x) -> list:
    """Coefficients of a residue field element on the power basis of its generator w."""
    return list(x.coeffs)


def _fq_poly(f: Poly) -> list:
    return [_fq(c) for c in f.coeffs]


def certificate_json(cert: StarCertificate) -> dict:
    out = {
        "label": cert.curve.label,
        "c": jint(cert.curve.c),
        "f": [jint(a) for a in cert.curve.f],
        "base_residue_degree": cert.d,
        "genus": cert.genus,
        "verdict": cert.verdict.value,
        "reason": cert.reason.value if cert.reason else None,
        "fail_pair": cert.fail_pair,
        "a": None if cert.a is None else jint(cert.a),
        "precision": cert.N,
        "seed": cert.seed,
        "notes": list(cert.notes),
    }
    if cert.certified:
        out["residue_field"] = {"degree": cert.M, "modulus": list(cert.residue_field.modulus)}
        out["frobenius_perm"] = list(cert.frobenius_perm)
        out["depths"] = [p.depth.to_json() for p in cert.pairs]
        out["pairs"] = [{
            "index": p.index,
            "r": _fq(p.r),
            "residue_degree": p.residue_degree,
            "gamma": _unram(p.gamma),
            "eta": _unram(p.eta),
            "eta_valuation": p.eta_valuation,
            "depth": p.depth.to_json(),
            "quadratic": [_unram(c) for c in p.quadratic.coeffs],
        } for p in cert.pairs]
    return out


def model_json(cert: StarCertificate) -> dict:
    model = stable_model(cert)
    return {"Qbar": _fq_poly(model.Qbar), "Pbar": _fq_poly(model.Pbar),
            "Qbar_text": repr(model.Qbar), "Pbar_text": repr(model.Pbar)}


def nodes_json(cert: StarCertificate) -> list:
    return [{"pair": nd.pair_index, "r": _fq(nd.r), "residue_degree": nd.residue_degree,
             "thickness": nd.thickness, "split": nd.split, "orbit": nd.orbit_id} for nd in nodes(cert)]


def picture_json(pic: ClusterPicture) -> dict:
    return pic.to_json()


def graph_json(graph: DualGraph) -> dict:
    out = graph.to_json()
    out["orbits"] = {"vertex": graph.vertex_orbits(), "edge": graph.edge_orbits()}
    return out


def analyze_json(cert: StarCertificate) -> dict:
    """Full report; sections past the certificate are present only for certified equations."""
    out = {"certificate": certificate_json(cert)}
    if not cert.certified:
        return out
    node_list = nodes_json(cert)
    pic = picture_from_certificate(cert)
    out.update({
        "banner": GOOD_ORDINARY if not node_list else f"{len(node_list)} node(s)",
        "stable_model": model_json(cert),
        "nodes": node_list,
        "graphs": {"stable": graph_json(stable_graph(cert)), "minimal": graph_json(minimal_regular_graph(cert))},
        "cluster_picture": {"original": picture_json(pic), "shifted": picture_json(shifted_picture(pic))},
        "two_torsion": kernel_report(cert) if cert.verdict == Verdict.STAR else None,
    })
    return out


# ---------------------------------------------------------------------------
# schema

_INTLIKE = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}
_VAL = {"anyOf": [
    {"type": "object", "required": ["num", "den"], "additionalProperties": False,
     "properties": {"num": {"type": "integer"}, "den": {"enum": [1, 2]}}},
    {"type": "object", "required": ["inf"], "properties": {"inf": {"const": True}}},
]}
_FQ = {"type": "array", "items": {"type": "integer", "minimum": 0, "maximum": 1}}
_CLUSTER = {"type": "object", "required": ["depth", "leaves", "children"],
            "properties": {"depth": _VAL, "children": {"type": "array", "items": {"$ref": "#/$defs/cluster"}}}}
_PICTURE = {"type": "object", "required": ["prime", "top", "canonical", "ascii"],
            "properties": {"prime": {"type": "integer"}, "top": {"$ref": "#/$defs/cluster"},
                           "canonical": {"$ref": "#/$defs/cluster"}, "ascii": {"type": "string"}}}
_GRAPH = {
    "type": "object",
    "required": ["model", "vertices", "edges", "frobenius", "cycle_rank"],
    "properties": {
        "vertices": {"type": "array", "items": {"type": "object", "required": ["id", "genus", "kind"]}},
        "edges": {"type": "array", "items": {"type": "object", "required": ["u", "v", "thickness"],
                                             "properties": {"thickness": {"type": "integer", "minimum": 1}}}},
        "frobenius": {"type": "object", "required": ["vertex_perm", "edge_perm", "edge_flip"]},
        "cycle_rank": {"type": "integer", "minimum": 0},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Report",
    "type": "object",
    "anyOf": [{"required": [k]} for k in ("certificate", "picture", "graph", "error")],
    "$defs": {"cluster": _CLUSTER, "picture": _PICTURE, "graph": _GRAPH, "val": _VAL},
    "properties": {
        "certificate": {
            "type": "object",
            "required": ["label", "verdict", "reason", "genus", "c", "f"],
            "properties": {
                "verdict": {"enum": [v.value for v in Verdict]},
                "c": _INTLIKE,
                "a": {"anyOf": [_INTLIKE, {"type": "null"}]},
                "f": {"type": "array", "items": _INTLIKE},
                "depths": {"type": "array", "items": {"$ref": "#/$defs/val"}},
                "pairs": {"type": "array", "items": {
                    "type": "object",
                    "required": ["index", "r", "gamma", "eta", "eta_valuation", "depth"],
                    "properties": {"r": _FQ, "gamma": {"type": "array", "items": _INTLIKE},
                                   "eta": {"type": "array", "items": _INTLIKE}, "depth": {"$ref": "#/$defs/val"}},
                }},
            },
        },
        "stable_model": {"type": "object", "required": ["Qbar", "Pbar"]},
        "nodes": {"type": "array", "items": {"type": "object",
                                             "required": ["pair", "thickness", "split", "orbit"]}},
        "graphs": {"type": "object", "properties": {"stable": {"$ref": "#/$defs/graph"},
                                                    "minimal": {"$ref": "#/$defs/graph"}}},
        "graph": {"$ref": "#/$defs/graph"},
        "cluster_picture": {"type": "object", "properties": {"original": {"$ref": "#/$defs/picture"},
                                                             "shifted": {"$ref": "#/$defs/picture"}}},
        "picture": {"$ref": "#/$defs/picture"},
        "two_torsion": {"anyOf": [{"type": "null"}, {
            "type": "object", "required": ["dims", "basis"],
            "properties": {"basis": {"type": "array", "items": {"type": "object", "required": ["mask", "roots"]}}},
        }]},
        "error": {"type": "object", "required": ["code", "message"]},
    },
}


def validate_report(report: dict) -> None:
    """Raise jsonschema.ValidationError if the report does not match REPORT_SCHEMA."""
    jsonschema.validate(report, REPORT_SCHEMA)

