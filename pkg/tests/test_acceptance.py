"""Acceptance criteria 1-9; each test records one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import json
import random
from collections import Counter
from functools import reduce

from hyperdyadic.certify import Verdict, certify
from hyperdyadic.clusters import odd_p_picture, picture_from_certificate, shifted_picture, valuation_oracle
from hyperdyadic.curvefile import fixture_path, load_curve_file
from hyperdyadic.fibre import (minimal_regular_graph, nodes, reduced_P_closed_form, split_by_enumeration,
                               split_by_trace, stable_graph, stable_model, stable_model_from_pairs)
from hyperdyadic.polys import Poly
from hyperdyadic.rings import Val, fq_field
from hyperdyadic.synthetic import SyntheticConfig, random_curve, random_node_configuration, random_pair_data
from hyperdyadic.two_torsion import TwoTorsionElt, dims, membership, reduction_kernel, span, twin_mask

ODD_PRIMES = (7, 11, 17, 29, 53)
TRANSLATION_FIXTURES = ("global", "ex111", "ordinary-g2", "ordinary-g3", "ordinary-g4")


def _load():
    cf = load_curve_file(fixture_path())
    with open(fixture_path("expected.json")) as fh:
        expected = json.load(fh)
    return cf, expected


def _sorted_vals(vals):
    return sorted(vals, key=Val.as_fraction)


def test_criterion_1_global_p2(criterion):
    cf, expected = _load()
    rec = cf.get("global")
    cert = certify(rec.curve)
    pic = picture_from_certificate(cert)
    shifted = shifted_picture(pic)
    p11 = odd_p_picture(rec.factors_at(11), 11)
    sg = stable_graph(cert)
    mr = minimal_regular_graph(cert)
    checks = {
        "StarStar": cert.verdict == Verdict.STAR_STAR,
        "depths {2,3,3}": _sorted_vals(cert.depths()) == [Val(2), Val(3), Val(3)],
        "shifted == p=11": shifted.canonical_json() == p11.canonical_json()
        and shifted.canonical() == expected["global"]["p11_canonical"],
        "stable 1 vertex + 2 loops of thickness 2": len(sg.vertices) == 1
        and [(e.u, e.v, e.thickness) for e in sg.edges] == [(0, 0, 2), (0, 0, 2)],
        "minimal cycle rank 2, loops subdivided once": mr.cycle_rank() == 2
        and len(mr.vertices) == 3 and len(mr.edges) == 4
        and sum(v.kind == "chain-link" for v in mr.vertices) == 2,
    }
    bad = [k for k, ok in checks.items() if not ok]
    criterion(1, "global example at p = 2", not bad, ", ".join(bad))


def test_criterion_2_global_odd_primes(criterion):
    cf, _ = _load()
    factors = cf.get("global").factors_at
    want = {7: [Val(1)], 17: [Val(1)], 29: [Val(1)], 11: [Val(1), Val(1)], 53: [Val(1, 2), Val(1, 2)]}
    got = {p: odd_p_picture(factors(p), p).twin_depths() for p in ODD_PRIMES}
    bad = [f"p={p}: {got[p]}" for p in ODD_PRIMES if got[p] != want[p]]
    criterion(2, "global example cluster pictures at p = 7, 11, 17, 29, 53", not bad, "; ".join(bad))


def test_criterion_3_ex111(criterion):
    cf, _ = _load()
    cert = certify(cf.get("ex111").curve)
    F4 = fq_field(2, 2)
    zeta = F4.gen
    by_r = {p.r: p for p in cert.pairs}
    model = stable_model(cert)
    ns = {n.r: n for n in nodes(cert)}
    sg = stable_graph(cert)
    mr = minimal_regular_graph(cert)
    i1, i2 = by_r[zeta].index, by_r[zeta * zeta].index
    checks = {
        "a = 1": cert.verdict == Verdict.STAR_STAR and cert.a == 1,
        "gammabar": set(by_r) == {F4.zero, zeta, zeta * zeta},
        "v(eta)": [by_r[r].eta_valuation for r in (F4.zero, zeta, zeta * zeta)] == [1, 2, 2],
        "depths": [by_r[r].depth for r in (F4.zero, zeta, zeta * zeta)] == [Val(5, 2), Val(3), Val(3)],
        "Qbar": [c.n for c in model.Qbar.coeffs] == [0, 1, 1, 1],
        "Pbar = Qbar^2": model.Pbar == model.Qbar * model.Qbar,
        "node at 0 non-split": not ns[F4.zero].split,
        "Frobenius swaps the other nodes": cert.frobenius_perm[i1] == i2 and cert.frobenius_perm[i2] == i1,
        "stable graph": len(sg.vertices) == 2 and len(sg.edges) == 3 and sg.vertex_perm == (1, 0),
        "minimal regular graph": len(mr.vertices) == 4 and mr.vertex_orbits() == [2, 2],
    }
    bad = [k for k, ok in checks.items() if not ok]
    criterion(3, "ex111 certificate, special fibre and graphs", not bad, ", ".join(bad))


def test_criterion_4_identity_suite(criterion):
    rng = random.Random(404)
    failures, count = 0, 0
    for _ in range(500):
        g = rng.choice([2, 3, 4])
        M = rng.randint(3 if g == 4 else 2, 4)
        R, gammas, etas = random_pair_data(g, M, 24, rng)
        c = 1 + 4 * rng.randint(-50, 50)
        model = stable_model_from_pairs(c, gammas, etas)
        x = Poly.x(R)
        f = reduce(lambda acc, ge: acc * ((x - ge[0]) ** 2 - ge[1].mul_p_power(2)), zip(gammas, etas), Poly(R, [1]))
        four_P = Poly(R, [a.mul_p_power(2) for a in model.P.coeffs])
        closed = reduced_P_closed_form(model.Qbar.ring(((c - 1) // 4) % 2), [gm.residue() for gm in gammas],
                                       [e.residue() for e in etas])
        count += 1
        failures += (four_P != f * c - model.Q * model.Q) + (closed != model.Pbar)
    criterion(4, "4P = cf - Q^2 and closed form of Pbar", failures == 0, f"{count} instances, {failures} failures")


def test_criterion_5_split_oracle(criterion):
    rng = random.Random(505)
    agree, total = 0, 0
    for _ in range(300):
        abar, rs, etabars, i = random_node_configuration(rng.randint(1, 8), rng.randint(2, 5), rng)
        total += 1
        agree += split_by_trace(abar, rs, etabars, i) == split_by_enumeration(abar, rs, etabars, i)
    criterion(5, "split criterion: trace vs exhaustive Artin-Schreier search", agree == total,
              f"{agree}/{total} agree")


def test_criterion_6_hensel(criterion):
    cf, _ = _load()
    bad = []
    for rec in cf.records:
        lo = certify(rec.curve)
        if not lo.certified:
            continue
        R = lo.pairs[0].quadratic.ring
        prod = reduce(lambda a, b: a * b, [p.quadratic for p in lo.pairs])
        if prod != Poly(R, list(rec.curve.f)):
            bad.append(f"{rec.label}: product")
        hi = certify(rec.curve, precision=2 * lo.N)
        for a, b in zip(lo.pairs, hi.pairs):
            if b.quadratic.truncate(lo.N) != a.quadratic or b.gamma.truncate(a.gamma.ring.N) != a.gamma \
                    or b.eta.truncate(a.eta.ring.N) != a.eta:
                bad.append(f"{rec.label}: doubling")
                break
    criterion(6, "Hensel product identity and precision doubling", not bad, ", ".join(bad))


def test_criterion_7_valuation_oracle(criterion):
    cf, _ = _load()
    rec = cf.get("global")
    bad, n = [], 0
    for p in ODD_PRIMES:
        for chk in valuation_oracle(rec.factors_at(p), p):
            n += 1
            if not chk.ok:
                bad.append(f"p={p} {chk.name}")
    criterion(7, "resultant / discriminant valuation identities", not bad, f"{n} identities" + "".join(", " + b for b in bad))


def test_criterion_8_two_torsion(criterion):
    cf, _ = _load()
    rng = random.Random(808)
    certs = [certify(cf.get(f"ordinary-g{g}").curve) for g in (2, 3, 4)]
    certs += [certify(random_curve(SyntheticConfig(genus=g, star=True), rng)) for g in (2, 3, 4)]
    bad = []
    for cert in certs:
        g = cert.genus
        n = 2 * g + 2
        if dims(cert) != (2 * g, g, g):
            bad.append(f"dims g={g}")
        brute = span([twin_mask(i, g) for i in range(g + 1)], n)
        if len(brute) != 2 ** g:
            bad.append(f"span size g={g}")
        kernel = reduction_kernel(cert)
        for m in range(2 ** n):
            if bin(m).count("1") % 2 == 0:
                S = TwoTorsionElt(m, n)
                if membership(S, kernel) != (S.mask in brute):
                    bad.append(f"membership g={g} mask={m}")
                    break
    criterion(8, "two-torsion dims and kernel membership", not bad, ", ".join(bad))


def _invariants(cert):
    ns = nodes(cert)
    return (cert.verdict, tuple(_sorted_vals(cert.depths())), tuple(sorted(n.thickness for n in ns)),
            tuple(sorted(n.split for n in ns)), tuple(sorted(len(o) for o in cert.orbits())),
            tuple(sorted(p.eta_valuation for p in cert.pairs)), shifted_picture(picture_from_certificate(cert)).canonical_json())


def test_criterion_9_translation_invariance(criterion):
    cf, _ = _load()
    rng = random.Random(909)
    bad, n = [], 0
    for label in TRANSLATION_FIXTURES:
        curve = cf.get(label).curve
        base = _invariants(certify(curve))
        for _ in range(20):
            u = rng.randint(-10 ** 6, 10 ** 6)
            n += 1
            if _invariants(certify(curve.translate(u))) != base:
                bad.append(f"{label} u={u}")
    criterion(9, "translation invariance", not bad, f"{n} translations" + "".join(", " + b for b in bad))


if __name__ == "__main__":
    import sys

    results = Counter()

    def record(number, title, ok, detail=""):
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        results[ok] += 1

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(record)
            except Exception as exc:  # report and continue with the next criterion
                print(f"[FAIL] {name}: {type(exc).__name__}: {exc}")
                results[False] += 1
    sys.exit(1 if results[False] else 0)
