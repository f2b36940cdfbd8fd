"""Print certificates, special fibres, graphs and cluster pictures for the bundled fixtures."""

import argparse

from hyperdyadic.certify import certify, format_pairing
from hyperdyadic.clusters import odd_p_picture, picture_from_certificate, shifted_picture
from hyperdyadic.curvefile import fixture_path, load_curve_file
from hyperdyadic.fibre import minimal_regular_graph, nodes, stable_graph, stable_model
from hyperdyadic.two_torsion import dims


def show(rec):
    cert = certify(rec.curve)
    print(f"== {rec.label}: y^2 = {rec.curve.c} * f, verdict {cert.verdict.value}")
    if not cert.certified:
        print(f"   reason {cert.reason.value}")
        return
    print(format_pairing(cert))
    model = stable_model(cert)
    print(f"Qbar = {model.Qbar!r}    Pbar = {model.Pbar!r}")
    for nd in nodes(cert):
        print(f"node at r = {nd.r!r}: thickness {nd.thickness}, {'split' if nd.split else 'non-split'}")
    sg, mr = stable_graph(cert), minimal_regular_graph(cert)
    print(f"stable graph: {len(sg.vertices)} vertices, {len(sg.edges)} edges, vertex orbits {sg.vertex_orbits()}")
    print(f"minimal regular: {len(mr.vertices)} vertices, cycle rank {mr.cycle_rank()}, "
          f"vertex orbits {mr.vertex_orbits()}")
    pic = picture_from_certificate(cert)
    print(f"p = 2: {pic.ascii()}   shifted: {shifted_picture(pic).ascii()}")
    for p, factors in sorted(rec.odd_primes.items()):
        print(f"p = {p}: {odd_p_picture(factors, p).ascii()}")
    if cert.verdict.value == "Star":
        print(f"J[2] reduction dims (total, kernel, image) = {dims(cert)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("labels", nargs="*", help="fixture labels (default: all)")
    args = ap.parse_args()
    cf = load_curve_file(fixture_path())
    for rec in cf.records:
        if not args.labels or rec.label in args.labels:
            show(rec)
            print()


if __name__ == "__main__":
    main()
