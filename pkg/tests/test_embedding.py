import pytest

from ncgeom import (
    HbarSeries,
    IsometricEmbedding,
    MoyalProduct,
    SphericalEmbeddingSpec,
    ThetaMatrix,
    TrigAnchor,
    embedding_geometry,
    fluctuation_metric,
    spherical_embedding,
    spherical_fluctuation,
    spherical_theta,
)
from ncgeom.errors import SpecViolation

STAR = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))


def test_identity_embedding_gives_flat_delta_metric():
    emb = IsometricEmbedding.identity(("1/3", "1/5"), 10)
    geo = embedding_geometry(emb, STAR, 3)
    n = 2
    for i in range(n):
        for j in range(n):
            want = HbarSeries.one(3) if i == j else HbarSeries.zero(3)
            assert geo.metric.entries[i][j] == want
            for k in range(n):
                assert geo.connection.low[i][j][k].is_zero()


def test_signature_flips_the_metric_sign():
    emb = IsometricEmbedding.identity(("0", "0"), 8)
    flipped = IsometricEmbedding(emb.components, [-1, 1], 2)
    g = fluctuation_metric(flipped, STAR, 2)
    assert g.entries[0][0] == -HbarSeries.one(2)
    assert g.entries[1][1] == HbarSeries.one(2)


def _spherical_spec(**overrides):
    kwargs = dict(
        n=3,
        m=4,
        p=0,
        l=3,
        lam="1",
        radial_tables=[["1/2", "1"]] * 4,
        anchors=[TrigAnchor("3/5", "4/5"), TrigAnchor("5/13", "12/13")],
        base_point=("1/2", "1/3", "1/7"),
    )
    kwargs.update(overrides)
    return SphericalEmbeddingSpec(**kwargs)


def test_spherical_spec_validation():
    with pytest.raises(SpecViolation):
        _spherical_spec(l=2)  # noncommuting coordinate must be at least 3
    with pytest.raises(SpecViolation):
        _spherical_spec(lam="0")
    with pytest.raises(SpecViolation):
        _spherical_spec(p=2)  # noncommuting components need positive signature
    with pytest.raises(SpecViolation):
        _spherical_spec(radial_tables=[["1/2", "1"]] * 3)
    with pytest.raises(SpecViolation):
        _spherical_spec(
            radial_tables=[["1/2", "1"], ["1/2", "1"], ["1", "1"], ["1/2", "1"]]
        )


def test_spherical_theta_couples_first_angle_with_chosen_coordinate():
    theta = spherical_theta(_spherical_spec())
    assert theta.entries[1][2] == 1
    assert theta.entries[2][1] == -1
    assert theta.entries[0][1] == 0


def test_spherical_embedding_component_values():
    spec = _spherical_spec()
    emb = spherical_embedding(spec, 6)
    # at the base point: f = 1/2, sin/cos values from the anchors
    s1, c1 = emb.components[1].value(), emb.components[2].value()
    from fractions import Fraction

    f = Fraction(1, 2)
    assert emb.components[0].value() == f  # purely radial component
    assert s1 == f * Fraction(3, 5) * Fraction(5, 13)  # f sin(a1) sin(a2)
    assert c1 == f * Fraction(4, 5) * Fraction(5, 13)  # f cos(a1) sin(a2)
    assert emb.components[3].value() == f * Fraction(12, 13)  # f cos(a2)


def test_spherical_fluctuation_structural_checks_pass():
    spec = _spherical_spec()
    g, emb, results = spherical_fluctuation(spec, 3, 6)
    assert all(r.passed for r in results)
    # the only antisymmetric pairs involve the first angle's coordinate
    assert (g.entries[1][2] + g.entries[2][1]).is_zero()
    assert (g.entries[0][2] - g.entries[2][0]).is_zero()
