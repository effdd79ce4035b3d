import random
from fractions import Fraction

import pytest

from ncgeom import (
    HbarSeries,
    MoyalProduct,
    NCMetric,
    Scalar,
    ThetaMatrix,
    check_inverse_parity,
    check_invertible,
    check_metric_parity,
    star_inverse,
    star_mul,
)
from ncgeom.errors import NotInvertible

from oracles import random_parity_metric, random_symmetric_metric

BASE = ("1/3", "1/5")
STAR = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))


def test_singular_order_zero_is_rejected():
    z = HbarSeries.zero(2)
    g = NCMetric([[z, HbarSeries.one(2)], [HbarSeries.one(2), z]], STAR)
    assert check_invertible(g)
    sing = NCMetric([[z, z], [z, HbarSeries.one(2)]], STAR)
    assert not check_invertible(sing)
    with pytest.raises(NotInvertible):
        star_inverse(sing)


def test_constant_geometric_series_inverse():
    n = 6
    ones = HbarSeries([1] * (n + 1))
    z = HbarSeries.zero(n)
    g = NCMetric([[ones, z], [z, ones]], STAR)
    ginv = star_inverse(g)
    expect = HbarSeries([1, -1] + [0] * (n - 1))
    assert ginv.entries[0][0] == expect
    assert ginv.entries[1][1] == expect
    assert ginv.entries[0][1].is_zero()


def test_star_inverse_of_random_jet_metric_reproduces_delta():
    rng = random.Random(17)
    entries = random_symmetric_metric(rng, BASE, 3, 8)
    g = NCMetric(entries, STAR)
    ginv = star_inverse(g)  # internal delta checks would raise on failure
    n = g.dim
    for i in range(n):
        for j in range(n):
            prod = HbarSeries.zero(3)
            for k in range(n):
                prod = prod + star_mul(g.entries[i][k], ginv.entries[k][j], STAR)
            want = HbarSeries.one(3) if i == j else HbarSeries.zero(3)
            assert prod == want


def test_parity_metric_has_parity_inverse():
    rng = random.Random(29)
    for seed in range(3):
        rng.seed(seed)
        entries = random_parity_metric(rng, BASE, 4, 9)
        g = NCMetric(entries, STAR)
        assert check_metric_parity(g)
        ginv = star_inverse(g)
        assert check_inverse_parity(ginv)


def test_parity_detector_flags_odd_symmetric_entry():
    n = 3
    z = HbarSeries.zero(n)
    diag = HbarSeries([1, 1, 0, 0])  # odd-order symmetric diagonal term
    g = NCMetric([[diag, z], [z, HbarSeries.one(n)]], STAR)
    assert not check_metric_parity(g)
