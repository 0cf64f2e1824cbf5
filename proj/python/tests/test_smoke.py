import json

import pytest

import stratpy


def test_binom_lucas():
    assert stratpy.binom_mod_p(4, 2, 2) == 0
    assert stratpy.binom_mod_p(5, 2, 2) == 0
    assert stratpy.binom_mod_p(5, 4, 2) == 1
    assert stratpy.binom_mod_p(-1, 3, 5) == 4


def test_p_adic_digits_half():
    assert stratpy.p_adic_digits(1, 2, 3, 3) == [2, 1, 1, 1]


def test_family_profile_f9():
    profile = stratpy.family_profile(3, [], ["0", "1", "2"])
    assert profile == [(0, 0), (1, 1), (2, 3)]


def test_family_verifies_and_round_trips():
    doc = stratpy.make_family(2, [1, 1, 1], ["0", "1", "T"])
    ok, violations = stratpy.verify_relations(doc, 8)
    assert ok and violations == []
    again = stratpy.dual(stratpy.dual(doc))
    assert again == doc


def test_fiber_trivializes():
    doc = stratpy.make_family(2, [], ["0", "1"])
    fiber = stratpy.restrict_fiber(doc, {"y": "1"})
    cert = stratpy.trivialize(fiber, 4)
    assert cert is not None
    assert json.loads(cert)["minimal_degree"] == 1


def test_exponents_rank1():
    log = json.dumps(
        {
            "field": {"p": 3, "m": 1, "modulus": [0, 1]},
            "rank": 1,
            "H": 2,
            "B": [[[[2]]], [[[1]]], [[[1]]]],
        }
    )
    rec = stratpy.exponent_digits(log)
    assert rec == [([2, 1, 1], 1, "periodic(1)")]


def test_bad_document_raises():
    with pytest.raises(stratpy.StratError):
        stratpy.verify_relations("{not json", 4)
