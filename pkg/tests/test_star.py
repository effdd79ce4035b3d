import random
from fractions import Fraction

import pytest

from ncgeom import (
    BidifferentialOperator,
    GeneralStarProduct,
    HbarSeries,
    MoyalProduct,
    Scalar,
    ThetaMatrix,
    check_associativity,
    check_leibniz,
    coordinate_jet,
    mu_q,
    poisson_bracket,
    star_commutator,
    star_mul,
    star_mul_scalars,
)
from ncgeom.errors import BudgetExhausted, ValidationError

from oracles import random_jet

BASE2 = ("1/3", "1/5")


def single_pair_star(lam="1"):
    return MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, lam))


def test_theta_must_be_skew():
    with pytest.raises(ValidationError):
        ThetaMatrix([[0, 1], [1, 0]])
    t = ThetaMatrix.single_pair(3, 0, 2, "1/2")
    assert t.entries[2][0] == Fraction(-1, 2)


def test_mu_zero_is_plain_product():
    u = Scalar(coordinate_jet(0, BASE2, 3))
    v = Scalar(coordinate_jet(1, BASE2, 3))
    star = single_pair_star()
    assert mu_q(u, v, 0, star.theta) == u * v


def test_mu_annihilates_constants_at_positive_order():
    star = single_pair_star()
    u = Scalar(7)
    v = Scalar(coordinate_jet(0, BASE2, 3))
    assert mu_q(u, v, 2, star.theta).is_zero()
    assert mu_q(v, u, 1, star.theta).is_zero()


def test_mu_budget_is_enforced():
    star = single_pair_star()
    u = Scalar(coordinate_jet(0, BASE2, 1))
    with pytest.raises(BudgetExhausted):
        mu_q(u, u, 2, star.theta)


def test_mu_parity_under_argument_swap():
    rng = random.Random(11)
    theta = ThetaMatrix.single_pair(2, 0, 1, "2/3")
    for _ in range(5):
        u = random_jet(rng, BASE2, 6)
        v = random_jet(rng, BASE2, 6)
        for q in range(1, 5):
            fwd = mu_q(u, v, q, theta)
            rev = mu_q(v, u, q, theta)
            if q % 2 == 0:
                assert (fwd - rev).is_zero()
            else:
                assert (fwd + rev).is_zero()


def test_coordinate_commutator_is_2_hbar_theta():
    lam = Fraction(3, 7)
    star = single_pair_star(lam)
    n = 5
    x = HbarSeries.from_scalar(Scalar(coordinate_jet(0, BASE2, 8)), n)
    y = HbarSeries.from_scalar(Scalar(coordinate_jet(1, BASE2, 8)), n)
    comm = star_commutator(x, y, star)
    assert comm == HbarSeries.monomial(Scalar(2 * lam), 1, n)


def test_poisson_bracket_is_antisymmetric_order_one_part():
    star = single_pair_star("1/2")
    u = Scalar(coordinate_jet(0, BASE2, 4))
    v = Scalar(coordinate_jet(1, BASE2, 4))
    assert poisson_bracket(star, u, v) == Scalar(Fraction(1, 2))
    assert poisson_bracket(star, v, u) == Scalar(Fraction(-1, 2))


def test_leibniz_and_associativity_on_random_jets():
    rng = random.Random(23)
    for dim in (2, 3):
        base = tuple(["1/3", "1/5", "1/7"][:dim])
        theta = ThetaMatrix.single_pair(dim, 0, dim - 1, "1/2")
        star = MoyalProduct(theta)
        pairs = [(random_jet(rng, base, 9), random_jet(rng, base, 9)) for _ in range(5)]
        triples = [
            (random_jet(rng, base, 9), random_jet(rng, base, 9), random_jet(rng, base, 9))
            for _ in range(5)
        ]
        assert check_leibniz(star, pairs, 4).passed
        assert check_associativity(star, triples, 4).passed


def test_general_star_matching_moyal_order_one():
    lam = Fraction(1, 2)
    op = BidifferentialOperator(
        2, [(lam, (1, 0), (0, 1)), (-lam, (0, 1), (1, 0))]
    )
    general = GeneralStarProduct(2, {1: op})
    moyal = single_pair_star(lam)
    rng = random.Random(3)
    u = random_jet(rng, BASE2, 5)
    v = random_jet(rng, BASE2, 5)
    assert (general.bq(u, v, 1) - moyal.bq(u, v, 1)).is_zero()
    # absent higher orders contribute nothing
    assert general.bq(u, v, 2).is_zero()


def test_non_unital_operator_table_is_rejected():
    bad = BidifferentialOperator(2, [(1, (1, 0), (0, 0))])
    with pytest.raises(ValidationError):
        GeneralStarProduct(2, {1: bad})


def test_star_mul_distributes_series_orders():
    star = single_pair_star("1")
    u = Scalar(coordinate_jet(0, BASE2, 6))
    a = HbarSeries.from_scalar(u, 3).shift(1)  # u * hbar
    b = HbarSeries.from_scalar(u, 3)
    prod = star_mul(a, b, star)
    direct = star_mul_scalars(u, u, star, 3).shift(1)
    assert prod == direct
