"""Acceptance gate: end-to-end reproduction of all published values and laws.

Every comparison is an exact rational equality; there are no tolerances
anywhere in this file.
"""

import random
from fractions import Fraction

import pytest

from ncgeom import (
    ChiralCoefficients,
    HbarSeries,
    IsometricEmbedding,
    MoyalProduct,
    NCMetric,
    Scalar,
    ThetaMatrix,
    TrigAnchor,
    canonical_connection,
    check_associativity,
    check_connection_parity,
    check_leibniz,
    contracted_bianchi_check,
    coordinate_jet,
    curvature_covariant_derivative,
    embedding_geometry,
    ensure_associative,
    first_bianchi_check,
    ricci_bundle,
    ricci_equivalence_check,
    riemann,
    second_bianchi_check,
    star_commutator,
    star_inverse,
    verify_appendix,
)
from ncgeom.cli import builtin_scenario
from ncgeom.errors import ValidationError
from ncgeom.scenario import Pipeline, run_scenario
from ncgeom.trig import series_match_to_budget

from oracles import (
    classical_sphere_oracle,
    random_compatible_pair,
    random_jet,
    random_symmetric_metric,
)


def series(coeffs, truncation):
    vals = [Fraction(str(c)) for c in coeffs]
    vals += [Fraction(0)] * (truncation + 1 - len(vals))
    return HbarSeries(vals[: truncation + 1])


# -- criterion 1: first worked example, N = 6 -----------------------------


def example_pipeline(which):
    return Pipeline(builtin_scenario(f"example-{which}"))


def test_acceptance_1_first_example_reproduction():
    p = example_pipeline(1)
    N = 6
    inv = series([1, -1], N)
    assert p.ginv.entries[0][0] == inv
    assert p.ginv.entries[1][1] == inv
    assert p.ginv.entries[0][1].is_zero()
    assert p.ginv.entries[1][0].is_zero()

    half = Fraction(1, 2)
    gamma = {
        (0, 0, 0): half,
        (0, 1, 0): -half,
        (1, 0, 0): -half,
        (1, 1, 0): -half,
        (0, 0, 1): -half,
        (0, 1, 1): -half,
        (1, 0, 1): -half,
        (1, 1, 1): half,
    }
    for (i, j, k), v in gamma.items():
        assert p.conn.low[i][j][k] == series([0, v], N)
        assert p.conn.low_t[i][j][k] == series([0, -v], N)

    r1212 = series([0, 0, -1, 1], N)  # -hbar^2 (1 - hbar)
    assert p.riem.entries[0][1][0][1] == r1212
    assert p.riem.entries[0][1][1][0] == -r1212
    assert p.riem.entries[1][0][0][1] == -r1212
    assert p.riem.entries[1][0][1][0] == r1212

    ricci = series([0, 0, -1, 2, -1], N)  # -hbar^2 (1 - hbar)^2
    raised = series([0, 0, -1, 3, -3, 1], N)  # -hbar^2 (1 - hbar)^3
    for i in range(2):
        assert p.ricci.ricci_low[i][i] == ricci
        assert p.ricci.theta_low[i][i] == ricci
        assert p.ricci.ricci_up[i][i] == raised
        assert p.ricci.theta_up[i][i] == raised
    assert p.ricci.ricci_low[0][1].is_zero()
    assert p.ricci.ricci_low[1][0].is_zero()


# -- criterion 2: second worked example, N = 6 ----------------------------


def test_acceptance_2_second_example_reproduction():
    p = example_pipeline(2)
    N = 6
    inv = series([1, 0, 1], N)
    assert p.ginv.entries[0][0] == inv
    assert p.ginv.entries[1][1] == inv

    factor = ["0", "0", "-3/4", "-1/4", "-3/4", "-1/4"]
    r1212 = series(factor, N)
    assert p.riem.entries[0][1][0][1] == r1212
    assert p.riem.entries[0][1][1][0] == -r1212
    assert p.riem.entries[1][0][0][1] == -r1212
    assert p.riem.entries[1][0][1][0] == r1212

    raised = series(["0", "0", "-3/4", "-1/4", "-9/4", "-3/4", "-9/4"], N)
    for i in range(2):
        assert p.ricci.ricci_up[i][i] == raised
        assert p.ricci.theta_up[i][i] == raised


# -- criterion 3: equivalence fails on the examples, holds for embeddings --


def equivalence_report(p):
    return ricci_equivalence_check(p.g, p.ups, p.riem, p.ricci)


def test_acceptance_3_counterexamples_and_embedding_equivalence():
    for which in (1, 2):
        rep = equivalence_report(example_pipeline(which))
        assert not rep.hypotheses.passed
        assert not rep.ricci_equivalence.passed

    N = 5
    star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))
    base = ("1/3", "1/5")

    def sphere():
        from ncgeom import angle_jet

        a1, a2 = TrigAnchor("3/5", "4/5"), TrigAnchor("5/13", "12/13")
        s1 = Scalar(angle_jet("sin", 0, a1, base, 10))
        c1 = Scalar(angle_jet("cos", 0, a1, base, 10))
        s2 = Scalar(angle_jet("sin", 1, a2, base, 10))
        c2 = Scalar(angle_jet("cos", 1, a2, base, 10))
        return IsometricEmbedding([s2 * c1, s2 * s1, c2], [1, 1, 1], 2)

    def paraboloid():
        from ncgeom import jet_of_elementary

        x = Scalar(coordinate_jet(0, base, 10))
        y = Scalar(coordinate_jet(1, base, 10))
        bowl = Scalar(
            jet_of_elementary("polynomial", [1, 0], 0, base, 10, poly_coeffs=[0, 0, 1])
        ) + Scalar(
            jet_of_elementary("polynomial", [0, 1], 0, base, 10, poly_coeffs=[0, 0, 1])
        )
        return IsometricEmbedding([x, y, bowl], [1, 1, 1], 2)

    embeddings = [
        IsometricEmbedding.identity(base, 10),
        sphere(),
        paraboloid(),
    ]
    for emb in embeddings:
        geo = embedding_geometry(emb, star, N)
        riem = riemann(geo.metric, geo.inverse, geo.connection)
        bundle = ricci_bundle(geo.metric, geo.inverse, riem)
        rep = ricci_equivalence_check(geo.metric, geo.chiral, riem, bundle)
        assert rep.all_pass


# -- criterion 4: the sixteen closed-form product identities ---------------


def test_acceptance_4_trig_identities_at_random_anchors():
    report = verify_appendix(order=8, points=5, seed=42)
    assert report["all_ok"]
    assert len(report["checks"]) == 80
    assert all(e["status"] == "pass" for e in report["checks"])


# -- criterion 5: deformation product axioms -------------------------------


def test_acceptance_5_star_product_axioms():
    N = 5
    rng = random.Random(2024)
    for dim in (2, 3):
        base = tuple(["1/3", "1/5", "1/7"][:dim])
        lam = Fraction(2, 3)
        theta = ThetaMatrix.single_pair(dim, 0, dim - 1, lam)
        star = MoyalProduct(theta)

        for i in range(dim):
            for j in range(dim):
                xi = HbarSeries.from_scalar(Scalar(coordinate_jet(i, base, 9)), N)
                xj = HbarSeries.from_scalar(Scalar(coordinate_jet(j, base, 9)), N)
                comm = star_commutator(xi, xj, star)
                assert comm == HbarSeries.monomial(
                    Scalar(2 * theta.entries[i][j]), 1, N
                )

        pairs = [
            (random_jet(rng, base, 9), random_jet(rng, base, 9)) for _ in range(20)
        ]
        triples = [
            (random_jet(rng, base, 9), random_jet(rng, base, 9), random_jet(rng, base, 9))
            for _ in range(20)
        ]
        assert check_leibniz(star, pairs, N).passed
        assert check_associativity(star, triples, N).passed


# -- criterion 6: Bianchi identities across metric families ----------------


def bianchi_suite(g, ginv, conn):
    riem = riemann(g, ginv, conn)
    deriv = curvature_covariant_derivative(g, ginv, conn, riem)
    assert first_bianchi_check(conn, g.star).passed
    assert second_bianchi_check(deriv).passed
    assert contracted_bianchi_check(deriv).passed


def test_acceptance_6_bianchi_for_examples_random_and_spherical():
    for which in (1, 2):
        p = example_pipeline(which)
        bianchi_suite(p.g, p.ginv, p.conn)

    star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))
    base = ("1/3", "1/5")
    for seed in range(10):
        rng = random.Random(100 + seed)
        g = NCMetric(random_symmetric_metric(rng, base, 3, 8), star)
        ginv = star_inverse(g)
        conn = canonical_connection(g, ginv, ChiralCoefficients.zero(2, 3))
        bianchi_suite(g, ginv, conn)

    doc = builtin_scenario("spherical-theorem")
    doc = dict(doc, truncation=3, jet_order=9)
    p = Pipeline(doc)
    bianchi_suite(p.g, p.ginv, p.conn)


# -- criterion 7: classical limit against a symbolic oracle ----------------


def test_acceptance_7_classical_limit_on_round_sphere():
    a1 = TrigAnchor("3/5", "4/5")
    a2 = TrigAnchor("5/13", "12/13")
    gamma_cls, riem_cls = classical_sphere_oracle(a1, a2)

    p = Pipeline(builtin_scenario("sphere-classical-limit"))
    n = 2
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert p.conn.up[i][j][k].coeffs[0].value() == gamma_cls[i][j][k]
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    assert (
                        p.riem.entries[l][k][i][j].coeffs[0].value()
                        == riem_cls[l][k][i][j]
                    )


# -- criterion 8: the spherically symmetric closed-form scenario -----------


def test_acceptance_8_spherical_theorem_scenario():
    report = run_scenario(builtin_scenario("spherical-theorem"))
    assert report["all_ok"]
    by_name = {e["name"]: e["status"] for e in report["checks"]}
    assert by_name["spherical-closed-form"] == "pass"
    assert by_name["spherical-angle-independence"] == "pass"
    assert by_name["spherical-transpose-structure"] == "pass"


# -- criterion 9: quasi pipeline against the canonical one -----------------


def test_acceptance_9_quasi_crosscheck_and_associativity_gate():
    report = run_scenario(builtin_scenario("quasi-moyal-crosscheck"))
    assert report["all_ok"]
    by_name = {e["name"]: e["status"] for e in report["checks"]}
    assert by_name["quasi-crosscheck"] == "pass"
    assert by_name["first-bianchi-star"] == "pass"

    from ncgeom import BidifferentialOperator, GeneralStarProduct

    base = ("1/3", "1/5")
    from ncgeom import jet_of_elementary

    x = Scalar(coordinate_jet(0, base, 8))
    y = Scalar(coordinate_jet(1, base, 8))
    bowl = Scalar(
        jet_of_elementary("polynomial", [1, 0], 0, base, 8, poly_coeffs=[0, 0, 1])
    ) + Scalar(
        jet_of_elementary("polynomial", [0, 1], 0, base, 8, poly_coeffs=[0, 0, 1])
    )
    emb = IsometricEmbedding([x, y, bowl], [1, 1, 1], 2)
    op = BidifferentialOperator(2, [(1, (1, 0), (1, 0))])
    bad = GeneralStarProduct(2, {1: op})
    with pytest.raises(ValidationError):
        ensure_associative(bad, emb, 3)


# -- criterion 10: parity cascade with a perturbation detector -------------


def cascade(g, ginv, ups, conn):
    riem = riemann(g, ginv, conn)
    bundle = ricci_bundle(g, ginv, riem)
    rep = ricci_equivalence_check(g, ups, riem, bundle)
    parity = check_connection_parity(conn, g, ups)
    return parity, rep


def test_acceptance_10_parity_cascade_and_detector():
    star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))
    base = ("1/3", "1/5")
    N = 5
    for seed in range(10):
        rng = random.Random(500 + seed)
        entries, cube = random_compatible_pair(rng, base, N, 8)
        g = NCMetric(entries, star)
        ginv = star_inverse(g)
        ups = ChiralCoefficients(cube)
        conn = canonical_connection(g, ginv, ups)
        parity, rep = cascade(g, ginv, ups, conn)
        assert parity.passed
        assert rep.all_pass

    # detector: one odd-order symmetric diagonal term breaks the cascade
    rng = random.Random(500)
    entries, cube = random_compatible_pair(rng, base, N, 8)
    bump = HbarSeries(
        [Scalar(0), random_jet(rng, base, 8, terms=2)] + [Scalar(0)] * (N - 1)
    )
    rows = [list(r) for r in entries]
    rows[0][0] = rows[0][0] + bump
    g = NCMetric(rows, star)
    ginv = star_inverse(g)
    ups = ChiralCoefficients(cube)
    conn = canonical_connection(g, ginv, ups)
    parity, rep = cascade(g, ginv, ups, conn)
    assert not rep.hypotheses.passed
    assert (
        not parity.passed
        or not rep.riemann_parity.passed
        or not rep.ricci_equivalence.passed
    )
