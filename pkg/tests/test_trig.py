import random
from fractions import Fraction

import pytest

from ncgeom import (
    HbarSeries,
    MoyalProduct,
    Scalar,
    ThetaMatrix,
    TrigAnchor,
    angle_jet,
    closed_form_oracle,
    random_unit_pair,
    star_mul_scalars,
    trig_product_identities,
    verify_trig_identities,
)
from ncgeom.errors import UnsupportedForm, ValidationError


def test_anchor_must_lie_on_unit_circle():
    TrigAnchor("3/5", "4/5")
    with pytest.raises(ValidationError):
        TrigAnchor("1/2", "1/2")


def test_random_unit_pairs_are_exact():
    rng = random.Random(8)
    for _ in range(20):
        a = random_unit_pair(rng)
        assert a.s * a.s + a.c * a.c == 1


def test_angle_jet_tower_matches_trig_derivatives():
    a = TrigAnchor("3/5", "4/5")
    j = angle_jet("sin", 0, a, ("1/7", "1/9"), 4)
    assert j.value() == Fraction(3, 5)
    assert j.partial(0).value() == Fraction(4, 5)  # cos
    assert j.partial(0).partial(0).value() == Fraction(-3, 5)  # -sin
    assert j.partial(1).is_zero()


def test_oracle_rejects_unknown_hyperbolic_kind():
    with pytest.raises(UnsupportedForm):
        closed_form_oracle([(Scalar(1), "tanh")], "1", 3)


def test_sin_sin_product_closed_form_by_hand():
    # sin(t1) * sin(t2) at hbar^1 is lam cos(t1) cos(t2); at hbar^0 the
    # plain product
    lam = Fraction(1, 3)
    star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, lam))
    a1, a2 = TrigAnchor("3/5", "4/5"), TrigAnchor("5/13", "12/13")
    base = ("1/7", "1/11")
    u = Scalar(angle_jet("sin", 0, a1, base, 6))
    v = Scalar(angle_jet("sin", 1, a2, base, 6))
    prod = star_mul_scalars(u, v, star, 2)
    assert prod.coefficient(0).value() == Fraction(3, 5) * Fraction(5, 13)
    assert prod.coefficient(1).value() == lam * Fraction(4, 5) * Fraction(12, 13)


def test_identity_table_covers_all_sixteen_operand_pairs():
    table = trig_product_identities()
    assert len(table) == 16
    assert {(u, v) for u, v, _ in table} == {
        (a + b, c + d) for a in "sc" for b in "sc" for c in "sc" for d in "sc"
    } - set()  # all combinations of sin/cos per angle on both sides
    # operands are pairs over the two angles
    assert all(len(u) == 2 and len(v) == 2 for u, v, _ in table)


def test_all_identities_hold_at_a_fixed_anchor():
    anchors = [TrigAnchor("3/5", "4/5"), TrigAnchor("5/13", "12/13")]
    results = verify_trig_identities(anchors, Fraction(2, 5), 5, 9)
    assert len(results) == 16
    assert all(r.passed for r in results)


def test_identities_detect_a_wrong_closed_form():
    # same machinery, deliberately wrong hyperbolic factor
    anchors = [TrigAnchor("3/5", "4/5"), TrigAnchor("5/13", "12/13")]
    lam = Fraction(1, 2)
    star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, lam))
    base = ("1/7", "1/11")
    u = Scalar(angle_jet("sin", 0, anchors[0], base, 8))
    v = Scalar(angle_jet("sin", 1, anchors[1], base, 8))
    lhs = star_mul_scalars(u * v, u * v, star, 4)
    wrong = closed_form_oracle([(u * v * u * v, "cosh2")], lam, 4)
    assert not (lhs - wrong).is_zero()
