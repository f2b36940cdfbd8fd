"""Command-line front end.

Exit codes: 0 when the equation is certified (Star or StarStar), 2 when it
fails (**), 1 on input, I/O or precision errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .certify import FailReason, StarCertificate, certify
from .clusters import odd_p_picture, picture_from_certificate, shifted_picture
from .curvefile import CurveRecord, load_curve_file
from .errors import (ConsistencyError, CurveFormatError, NotCertified, PrecisionExhausted,
                     UnsupportedExtension)
from .fibre import minimal_regular_graph, stable_graph
from .polys import DEFAULT_SEED
from .report import GOOD_ORDINARY, analyze_json, certificate_json, graph_json

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_ERROR", "EXIT_FAIL"]


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


_ERROR_CODES = [
    (CurveFormatError, "CurveFormatError"),
    (PrecisionExhausted, "PrecisionExhausted"),
    (UnsupportedExtension, "UnsupportedExtension"),
    (NotCertified, "NotCertified"),
    (ConsistencyError, "ConsistencyError"),
    (KeyError, "UnknownLabel"),
    (OSError, "IOError"),
]


def _exit_for(cert: StarCertificate) -> int:
    if cert.certified:
        return EXIT_OK
    if cert.reason == FailReason.PRECISION_EXHAUSTED:
        return EXIT_ERROR
    return EXIT_FAIL


def _fail_line(cert: StarCertificate) -> str:
    where = "" if cert.fail_pair is None else f" (pair {cert.fail_pair + 1})"
    return f"{cert.curve.label}: Fail [{cert.reason.value}]{where}"


def _verdict_line(cert: StarCertificate) -> str:
    if not cert.certified:
        return _fail_line(cert)
    depths = ", ".join(str(d) for d in cert.depths())
    return f"{cert.curve.label}: {cert.verdict.value}, genus {cert.genus}, a = {cert.a}, depths [{depths}]"


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _record(args) -> CurveRecord:
    return load_curve_file(args.file).get(args.label)


def _certify(args, rec: CurveRecord) -> StarCertificate:
    return certify(rec.curve, precision=args.precision, seed=args.seed)


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args) -> int:
    cert = _certify(args, _record(args))
    _emit(args, {"certificate": certificate_json(cert)}, _verdict_line(cert))
    return _exit_for(cert)


def _analyze_text(report: dict, cert: StarCertificate) -> str:
    lines = [_verdict_line(cert)]
    if not cert.certified:
        return "\n".join(lines)
    lines.append(report["banner"])
    model = report["stable_model"]
    lines.append(f"stable model: y^2 + Qbar y = Pbar with Qbar = {model['Qbar_text']}, Pbar = {model['Pbar_text']}")
    for nd in report["nodes"]:
        lines.append(f"  node at pair {nd['pair'] + 1}: thickness {nd['thickness']}, "
                     f"{'split' if nd['split'] else 'non-split'}, orbit {nd['orbit']}")
    for name in ("stable", "minimal"):
        g = report["graphs"][name]
        lines.append(f"{name} graph: {len(g['vertices'])} vertices, {len(g['edges'])} edges, "
                     f"cycle rank {g['cycle_rank']}, vertex orbits {g['orbits']['vertex']}")
    pics = report["cluster_picture"]
    lines.append(f"cluster picture: {pics['original']['ascii']}  shifted: {pics['shifted']['ascii']}")
    tt = report["two_torsion"]
    if tt is not None:
        dims = tt["dims"]
        lines.append(f"J[2]: dim {dims['total']}, kernel {dims['kernel']}, image {dims['image']}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    cert = _certify(args, _record(args))
    report = analyze_json(cert)
    _emit(args, report, _analyze_text(report, cert))
    return _exit_for(cert)


def cmd_cluster(args) -> int:
    rec = _record(args)
    if args.p == 2:
        cert = _certify(args, rec)
        if not cert.certified:
            _emit(args, {"certificate": certificate_json(cert)}, _fail_line(cert))
            return _exit_for(cert)
        pic = picture_from_certificate(cert)
        if args.shifted:
            pic = shifted_picture(pic)
    else:
        if args.shifted:
            raise CliError("UsageError", "--shifted applies only to p = 2")
        pic = odd_p_picture(rec.factors_at(args.p), args.p, args.precision or 64)
    _emit(args, {"picture": pic.to_json()}, pic.ascii())
    return EXIT_OK


def cmd_graph(args) -> int:
    rec = _record(args)
    cert = _certify(args, rec)
    if not cert.certified:
        _emit(args, {"certificate": certificate_json(cert)}, _fail_line(cert))
        return _exit_for(cert)
    graph = stable_graph(cert) if args.model == "stable" else minimal_regular_graph(cert)
    if args.format == "dot":
        print(graph.to_dot(rec.label), end="")
    else:
        print(json.dumps({"graph": graph_json(graph)}, indent=2))
    return EXIT_OK


def _batch_one(job):
    rec, precision, seed = job
    try:
        cert = certify(rec.curve, precision=precision, seed=seed)
        report = analyze_json(cert)
        return _exit_for(cert), report, _verdict_line(cert) + (
            f" ({GOOD_ORDINARY})" if report.get("banner") == GOOD_ORDINARY else "")
    except Exception as exc:  # isolated per curve; reported in place
        code, msg = _classify(exc)
        return EXIT_ERROR, {"label": rec.label, "error": {"code": code, "message": msg}}, \
            f"{rec.label}: error [{code}] {msg}"


def cmd_batch(args) -> int:
    records = load_curve_file(args.file).records
    jobs = [(rec, args.precision, args.seed) for rec in records]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, jobs))
    else:
        results = [_batch_one(j) for j in jobs]
    codes = [r[0] for r in results]
    _emit(args, {"results": [{"exit_code": c, "report": rep} for c, rep, _ in results]},
          "\n".join(line for _, _, line in results))
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return EXIT_FAIL if EXIT_FAIL in codes else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="2-adic working precision N")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized factoring")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="hyperdyadic",
                                     description="2-adic (*)/(**) equations of hyperelliptic curves")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_curve(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("file")
        sp.add_argument("label", nargs="?", default=None)
        return sp

    with_curve("check", "certify an equation").set_defaults(func=cmd_check)
    with_curve("analyze", "full report").set_defaults(func=cmd_analyze)
    sp = with_curve("cluster", "cluster picture at a prime")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--shifted", action="store_true", help="subtract v(4) from twin depths (p = 2)")
    sp.set_defaults(func=cmd_cluster)
    sp = with_curve("graph", "dual graph of the special fibre")
    sp.add_argument("--model", choices=["stable", "minimal"], default="stable")
    sp.add_argument("--format", choices=["dot", "json"], default="dot")
    sp.set_defaults(func=cmd_graph)
    sp = sub.add_parser("batch", parents=[common], help="check every curve in a file")
    sp.add_argument("file")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_batch)
    return parser


def _classify(exc: Exception) -> tuple:
    if isinstance(exc, CliError):
        return exc.code, str(exc)
    for cls, code in _ERROR_CODES:
        if isinstance(exc, cls):
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
            return code, str(msg)
    raise exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        code, msg = _classify(exc)
        if getattr(args, "json", False):
            print(json.dumps({"error": {"code": code, "message": msg}}, indent=2))
        else:
            print(f"error [{code}]: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
