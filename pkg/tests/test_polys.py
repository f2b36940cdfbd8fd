import random
from functools import reduce

import hypothesis.strategies as st
import pytest
from hypothesis import given

from hyperdyadic.errors import NotASquare, ProductMismatch, SeedsNotCoprime
from hyperdyadic.polys import (QQ, ZZ, Poly, char2_poly_sqrt, fq_embedding, fq_factor, hensel_lift_factors,
                               poly_discriminant, poly_gcd, poly_resultant, roots_in_field,
                               split_over_extension)
from hyperdyadic.rings import UnramRing, fq_field


def _is_irreducible_bruteforce(g):
    """No monic factor of degree <= deg/2 divides g (enumerates all candidates)."""
    F = g.ring
    els = list(F.elements())
    for d in range(1, g.degree // 2 + 1):
        for k in range(F.order ** d):
            cs, n = [], k
            for _ in range(d):
                n, r = divmod(n, F.order)
                cs.append(els[r])
            h = Poly(F, cs + [F.one])
            if (g % h).is_zero():
                return False
    return True


@pytest.mark.parametrize("m", [1, 2, 3])
def test_fq_factor_multiplies_back(m):
    F = fq_field(2, m)
    rng = random.Random(100 + m)
    for _ in range(1000 if m == 1 else 400):
        deg = rng.randint(1, 9)
        f = Poly(F, [F.from_int(rng.randrange(F.order)) for _ in range(deg)] + [F.one])
        factors = fq_factor(f)
        prod = reduce(lambda a, gm: a * gm[0] ** gm[1], factors, Poly(F, [1]))
        assert prod == f
        assert all(g.is_monic() for g, _ in factors)


def test_fq_factor_factors_are_irreducible():
    rng = random.Random(7)
    for m in (1, 2, 3):
        F = fq_field(2, m)
        for _ in range(30):
            deg = rng.randint(2, 6)
            f = Poly(F, [F.from_int(rng.randrange(F.order)) for _ in range(deg)] + [F.one])
            for g, _ in fq_factor(f):
                if g.degree <= 4:
                    assert _is_irreducible_bruteforce(g)


def test_fq_factor_odd_characteristic():
    F = fq_field(3, 2)
    rng = random.Random(3)
    for _ in range(50):
        f = Poly(F, [F.from_int(rng.randrange(9)) for _ in range(5)] + [F.one])
        prod = reduce(lambda a, gm: a * gm[0] ** gm[1], fq_factor(f), Poly(F, [1]))
        assert prod == f


@given(st.lists(st.integers(0, 7), min_size=1, max_size=8))
def test_char2_sqrt_round_trip(cs):
    F = fq_field(2, 3)
    q = Poly(F, [F.from_int(c) for c in cs] + [F.one])
    assert char2_poly_sqrt(q * q) == q


def test_char2_sqrt_rejects_non_squares():
    F = fq_field(2, 1)
    with pytest.raises(NotASquare):
        char2_poly_sqrt(Poly(F, [0, 1, 0, 1]))


def test_roots_and_splitting_field():
    F2 = fq_field(2, 1)
    f = Poly(F2, [0, 1, 1, 1])  # x (x^2 + x + 1)
    big, emb, roots = split_over_extension(f)
    assert big.m == 2 and len(roots) == 3 and all(m == 1 for _, m in roots)
    fb = f.map(emb, big)
    assert all(fb(r).is_zero() for r, _ in roots)
    assert len(roots_in_field(Poly(fq_field(2, 4), [1, 1, 0, 0, 1]))) == 4


def test_embedding_is_a_homomorphism():
    small, big = fq_field(2, 2), fq_field(2, 6)
    emb = fq_embedding(small, big)
    for a in small.elements():
        for b in small.elements():
            assert emb(a * b) == emb(a) * emb(b)
            assert emb(a + b) == emb(a) + emb(b)


def test_poly_divmod_and_xgcd_over_q():
    a = Poly(QQ, [1, 0, 2, 3])
    b = Poly(QQ, [-1, 1])
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree < 1
    assert poly_gcd(a * b, b * b).monic() == b


def test_discriminant_and_resultant_examples():
    assert poly_discriminant(Poly(ZZ, [-4, 0, 1])) == 16
    assert poly_discriminant(Poly(ZZ, [-1, 7, 1])) == 53
    assert poly_resultant(Poly(ZZ, [-2, 1]), Poly(ZZ, [2, 1])) == 4


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=5), st.lists(st.integers(-20, 20), min_size=1, max_size=4))
def test_resultant_and_discriminant_product_formulas(roots_f, roots_g):
    f = Poly.from_roots(ZZ, roots_f)
    g = Poly.from_roots(ZZ, roots_g)
    res = 1
    for a in roots_f:
        for b in roots_g:
            res *= a - b
    assert poly_resultant(f, g) == res
    disc = 1
    for i, a in enumerate(roots_f):
        for b in roots_f[i + 1:]:
            disc *= (a - b) ** 2
    assert poly_discriminant(f) == disc


def test_unram_discriminant_matches_exact(curve_file):
    f = curve_file.get("global").curve.poly()
    exact = poly_discriminant(f)
    for N in (40, 80):
        R = UnramRing(2, 2, N)
        d = poly_discriminant(f.map(R, R))
        assert (d.to_ints()[0] - exact) % 2 ** d.ring.N == 0


# ---------------------------------------------------------------------------
# Hensel lifting

def _seeds(f_int, M):
    F = fq_field(2, M)
    fb = Poly(F, list(f_int))
    sq = char2_poly_sqrt(fb)
    x = Poly.x(F)
    return [(x - r) ** 2 for r in roots_in_field(sq)]


@pytest.mark.parametrize("label", ["global", "ex111", "ordinary-g2", "ordinary-g3"])
@pytest.mark.parametrize("N", [16, 40])
def test_hensel_product_identity(curve_file, label, N):
    curve = curve_file.get(label).curve
    M = 2 if label in ("global", "ex111") else {"ordinary-g2": 3, "ordinary-g3": 4}[label]
    R = UnramRing(2, M, N)
    f = Poly(R, list(curve.f))
    lifts = hensel_lift_factors(f, _seeds(curve.f, M))
    prod = reduce(lambda a, b: a * b, lifts)
    assert prod == f
    assert all(g.is_monic() and g.degree == 2 for g in lifts)


def test_hensel_precision_doubling_is_idempotent(curve_file):
    curve = curve_file.get("ex111").curve
    seeds = _seeds(curve.f, 2)
    low = hensel_lift_factors(Poly(UnramRing(2, 2, 20), list(curve.f)), seeds)
    high = hensel_lift_factors(Poly(UnramRing(2, 2, 40), list(curve.f)), seeds)
    for a, b in zip(low, high):
        assert b.truncate(20) == a


def test_hensel_rejects_bad_seeds():
    R = UnramRing(2, 1, 10)
    F = R.residue_field
    x = Poly.x(F)
    f = Poly(R, [1, 0, 1, 0, 1])  # x^4 + x^2 + 1 = (x^2 + x + 1)^2 mod 2
    with pytest.raises(SeedsNotCoprime):
        hensel_lift_factors(f, [x * x + x + 1, x * x + x + 1])
    with pytest.raises(ProductMismatch):
        hensel_lift_factors(f, [x * x + 1, x * x + x + 1])
