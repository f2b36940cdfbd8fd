from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from hyperdyadic.errors import NotAUnit, PrecisionMismatch
from hyperdyadic.rings import (SATURATED, UnramRing, Val, fq_field, fq_frobenius_orbit, fq_trace,
                               int_valuation, smallest_irreducible)

FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 1)]


def test_val_arithmetic_and_json():
    assert Val(1, 2) + Val(1, 2) == Val(1)
    assert Val(5, 2) - Val(2) == Val(1, 2)
    assert Val(1, 2) < Val(1) < Val.infinity()
    assert str(Val(5, 2)) == "5/2"
    for v in (Val(3), Val(-1, 2), Val.infinity()):
        assert Val.from_json(v.to_json()) == v


def test_int_valuation():
    assert int_valuation(48, 2) == 4
    assert int_valuation(-53, 53) == 1
    assert int_valuation(7, 3) == 0


def test_smallest_irreducible_known_values():
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(2, 3) == (1, 0, 1, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms_exhaustive_small(p, m):
    F = fq_field(p, m)
    els = list(F.elements())
    assert len(els) == p ** m
    nonzero = [a for a in els if not a.is_zero()]
    for a in nonzero:
        assert a * a.inverse() == F.one
        assert a ** (F.order - 1) == F.one
    # the multiplicative group is cyclic: some element has full order
    orders = set()
    for a in nonzero:
        k, b = 1, a
        while b != F.one:
            b, k = b * a, k + 1
        orders.add(k)
    assert F.order - 1 in orders


@given(st.sampled_from([(2, 3), (2, 5), (3, 3)]), st.data())
def test_field_distributive_and_frobenius(pm, data):
    p, m = pm
    F = fq_field(p, m)
    a, b, c = (F.from_int(data.draw(st.integers(0, F.order - 1))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a + b) ** p == a ** p + b ** p
    assert a.frobenius(m) == a
    assert a.pth_root() ** p == a


def test_trace_is_additive_and_onto():
    F = fq_field(2, 4)
    traces = {fq_trace(a).n for a in F.elements()}
    assert traces == {0, 1}
    a, b = F.from_int(5), F.from_int(11)
    assert fq_trace(a + b) == fq_trace(a) + fq_trace(b)


def test_frobenius_orbit_sizes():
    F = fq_field(2, 6)
    for a in F.elements():
        orbit = fq_frobenius_orbit(a, 2)
        deg = len(orbit)
        assert 6 % deg == 0 and a.in_subfield(deg)


unram = st.sampled_from([(1, 20), (2, 16), (3, 12)])


@given(unram, st.data())
def test_unram_ring_axioms(MN, data):
    M, N = MN
    R = UnramRing(2, M, N)
    draw = lambda: R.element([data.draw(st.integers(0, 2 ** N - 1)) for _ in range(M)])
    a, b, c = draw(), draw(), draw()
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == R.zero
    if a.is_unit():
        assert a * a.invert() == R.one


@given(st.sampled_from([1, 2, 3, 4]), st.data())
def test_unram_frobenius_is_ring_automorphism_of_order_M(M, data):
    R = UnramRing(2, M, 16)
    a = R.element([data.draw(st.integers(0, 2 ** 16 - 1)) for _ in range(M)])
    b = R.element([data.draw(st.integers(0, 2 ** 16 - 1)) for _ in range(M)])
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    assert a.frobenius(M) == a
    assert a.frobenius().residue() == a.residue() ** 2


def test_unram_valuation_and_saturation():
    R = UnramRing(2, 2, 10)
    assert R(12).valuation() == Val(2)
    assert R(0).valuation() is SATURATED
    assert R(2 ** 10).is_zero()
    with pytest.raises(NotAUnit):
        R(6).invert()


def test_unram_fraction_coercion():
    R = UnramRing(2, 1, 12)
    assert R(Fraction(1, 3)) * R(3) == R.one


def test_precision_mismatch_raises():
    with pytest.raises(PrecisionMismatch):
        UnramRing(2, 2, 10).one + UnramRing(2, 2, 12).one


def test_div_and_mul_power_track_precision():
    R = UnramRing(2, 2, 20)
    a = R.element([12, 8])
    b = a.div_p_power(2)
    assert b.ring.N == 18 and b.mul_p_power(2) == a
