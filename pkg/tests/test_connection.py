import random

import pytest

from ncgeom import (
    ChiralCoefficients,
    HbarSeries,
    MoyalProduct,
    NCMetric,
    ThetaMatrix,
    canonical_connection,
    check_chirality_and_torsion,
    check_compatibility,
    check_connection_parity,
    check_metric_parallel,
    star_inverse,
)
from ncgeom.errors import AsymmetricChiral

from oracles import random_compatible_pair

BASE = ("1/3", "1/5")
STAR = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))


def build_geometry(seed, truncation=3, order=8):
    rng = random.Random(seed)
    entries, cube = random_compatible_pair(rng, BASE, truncation, order)
    g = NCMetric(entries, STAR)
    ginv = star_inverse(g)
    ups = ChiralCoefficients(cube)
    conn = canonical_connection(g, ginv, ups)
    return g, ginv, ups, conn


def test_chiral_coefficients_must_be_symmetric_in_first_two_indices():
    z = HbarSeries.zero(2)
    nz = HbarSeries([0, 1, 0])
    cube = [[[z, z], [nz, z]], [[z, z], [z, z]]]
    with pytest.raises(AsymmetricChiral):
        ChiralCoefficients(cube)


def test_connection_satisfies_structural_identities():
    g, ginv, ups, conn = build_geometry(41)
    assert check_compatibility(g, conn).passed
    assert check_chirality_and_torsion(conn, ups).passed
    assert check_metric_parallel(g, ginv, conn).passed


def test_zero_chiral_makes_left_equal_right_classically():
    rng = random.Random(43)
    entries, _ = random_compatible_pair(rng, BASE, 0, 6)
    star0 = MoyalProduct(ThetaMatrix.zero(2))
    g = NCMetric(
        [[HbarSeries([entries[i][j].coeffs[0]]) for j in range(2)] for i in range(2)],
        star0,
    )
    ginv = star_inverse(g)
    conn = canonical_connection(g, ginv, ChiralCoefficients.zero(2, 0))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert (conn.low[i][j][k] - conn.low_t[i][j][k]).is_zero()
                assert (conn.up[i][j][k] - conn.up_t[i][j][k]).is_zero()


def test_parity_relation_holds_for_compatible_parity_pairs():
    for seed in (1, 2, 3):
        g, ginv, ups, conn = build_geometry(seed)
        res = check_connection_parity(conn, g, ups)
        assert res.passed
        assert "hypotheses hold" in res.details


def test_parity_relation_detects_even_chiral_term():
    g, ginv, ups, conn = build_geometry(47)
    bump = HbarSeries([0, 0, "1/3", 0])
    cube = [
        [[ups[i, j, k] for k in range(2)] for j in range(2)] for i in range(2)
    ]
    cube[1][1][1] = cube[1][1][1] + bump
    broken = ChiralCoefficients(cube)
    conn2 = canonical_connection(g, ginv, broken)
    res = check_connection_parity(conn2, g, broken)
    assert not res.passed
    assert "hypotheses unmet" in res.details
