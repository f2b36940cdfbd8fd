import json
import hypothesis.strategies as st
import pytest
from hypothesis import assume, given, settings

from hyperdyadic.clusters import (ClusterPicture, odd_p_picture, odd_p_roots, picture_from_certificate,
                                  picture_from_valuations, shifted_picture, valuation_oracle)
from hyperdyadic.errors import ConsistencyError, UnsupportedExtension
from hyperdyadic.rings import Val

GLOBAL_FACTORS = [[-2, 1], [2, 1], [-1, 7, 1], [7, -9, 1]]


@pytest.mark.parametrize("p", [7, 17, 29])
def test_single_depth_one_twin(p):
    pic = odd_p_picture(GLOBAL_FACTORS, p)
    assert pic.twin_depths() == [Val(1)]
    assert len(pic.top.leaves) == 4 and pic.top.depth == Val(0)


def test_p11_two_twins(expected):
    pic = odd_p_picture(GLOBAL_FACTORS, 11)
    assert pic.twin_depths() == [Val(1), Val(1)]
    assert pic.canonical() == expected["global"]["p11_canonical"]


def test_p53_half_depth_twins():
    pic = odd_p_picture(GLOBAL_FACTORS, 53)
    assert pic.twin_depths() == [Val(1, 2), Val(1, 2)]
    assert pic.ascii() == "(* * (* *)_1/2 (* *)_1/2)_0"


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 29, 53])
def test_valuation_oracle(p):
    checks = valuation_oracle(GLOBAL_FACTORS, p)
    assert checks and all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_p2_picture_and_shift(global_cert, expected):
    pic = picture_from_certificate(global_cert)
    assert sorted(str(d) for d in pic.twin_depths()) == ["2", "3", "3"]
    shifted = shifted_picture(pic)
    assert shifted.canonical() == expected["global"]["p11_canonical"]
    assert shifted.same_shape(odd_p_picture(GLOBAL_FACTORS, 11))


def test_ex111_picture(ex111_cert):
    pic = picture_from_certificate(ex111_cert)
    assert pic.ascii() == "((* *)_5/2 (* *)_3 (* *)_3)_0"
    assert shifted_picture(pic).twin_depths() == [Val(1, 2), Val(1), Val(1)]


def test_frobenius_on_leaves(global_cert):
    frob = picture_from_certificate(global_cert).frobenius
    assert sorted(frob) == sorted(frob.values())
    assert {k[0] for k in frob} == {"a", "b"}


def test_json_round_trip(global_cert):
    for pic in (odd_p_picture(GLOBAL_FACTORS, 53), picture_from_certificate(global_cert)):
        again = ClusterPicture.from_json(json.loads(json.dumps(pic.to_json())))
        assert again == pic and again.canonical_json() == pic.canonical_json()


def test_valuation_matrix_rebuilds_picture():
    pic = odd_p_picture(GLOBAL_FACTORS, 11)
    rebuilt = picture_from_valuations(pic.leaves(), pic.valuation_matrix(), 11)
    assert rebuilt == pic


def test_non_ultrametric_rejected():
    val = {("a", "b"): Val(2), ("b", "c"): Val(1), ("a", "c"): Val(0)}
    val.update({(y, x): v for (x, y), v in list(val.items())})
    with pytest.raises(ConsistencyError):
        picture_from_valuations(["a", "b", "c"], val, 3)


def test_cubic_factor_unsupported():
    with pytest.raises(UnsupportedExtension):
        odd_p_roots([[1, 0, 0, 1]], 5)


@settings(max_examples=40)
@given(st.lists(st.integers(-60, 60), min_size=3, max_size=6, unique=True), st.sampled_from([3, 5, 7]))
def test_rational_roots_match_integer_valuations(roots, p):
    """For linear factors the picture is determined by v_p(r - s) of integers."""
    factors = [[-r, 1] for r in roots]
    pic = odd_p_picture(factors, p)
    vm = pic.valuation_matrix()
    labels = [f"r{k + 1}" for k in range(len(roots))]
    for i, a in enumerate(roots):
        for j, b in enumerate(roots):
            if i < j:
                n, v = a - b, 0
                while n % p == 0:
                    n, v = n // p, v + 1
                assert vm[(labels[i], labels[j])] == Val(v)


@settings(max_examples=30)
@given(st.integers(-40, 40), st.integers(-40, 40), st.sampled_from([3, 5, 7, 11]))
def test_quadratic_oracle_random(b, c, p):
    assume(b * b - 4 * c != 0)
    assume(1 + b + c != 0 and p * p - b * p + c != 0)  # keep the linear roots 1 and -p simple
    factors = [[c, b, 1], [-1, 1], [p, 1]]
    assert all(chk.ok for chk in valuation_oracle(factors, p))
