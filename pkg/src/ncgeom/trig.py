"""Moyal products of trigonometric functions and their closed forms.

Products of sin/cos of two angles under the single-pair Moyal product have
closed forms: trigonometric polynomials in the angles times constant
hyperbolic series in lambda*hbar.  The sixteen product identities are kept
as a data table; the closed-form side is expanded by an oracle that never
touches the Moyal machinery, so the two sides are independent.

Angles live at rational anchors: the base value of (sin, cos) is a rational
point (s, c) on the unit circle supplied explicitly, which keeps every
derivative tower rational.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedForm, ValidationError
from .report import CheckResult
from .scalars import Jet, RationalLike, Scalar, cos_table, jet_of_elementary, rat, sin_table
from .series import HbarSeries
from .star import MoyalProduct, ThetaMatrix, star_mul_scalars

__all__ = [
    "TrigAnchor",
    "angle_jet",
    "closed_form_oracle",
    "trig_product_identities",
    "verify_trig_identities",
    "random_unit_pair",
]

_HYPERBOLIC_KINDS = ("one", "cosh", "sinh", "cosh2", "sinh2", "coshsinh", "one_plus_2sinh2")


class TrigAnchor:
    """Rational (sin, cos) pair for one angle coordinate."""

    __slots__ = ("s", "c")

    def __init__(self, s: RationalLike, c: RationalLike):
        s, c = rat(s), rat(c)
        if s * s + c * c != 1:
            raise ValidationError(f"anchor ({s}, {c}) is not on the unit circle")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("TrigAnchor is immutable")


def random_unit_pair(rng) -> TrigAnchor:
    """Rational point on the unit circle from the tangent half-angle map."""
    t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    d = 1 + t * t
    return TrigAnchor(2 * t / d, (1 - t * t) / d)


def angle_jet(
    kind: str,
    coord: int,
    anchor: TrigAnchor,
    base_point: Sequence[RationalLike],
    order: int,
) -> Jet:
    """Jet of sin or cos of the coordinate `coord` at an anchored angle."""
    if kind == "sin":
        table = sin_table(anchor.s, anchor.c, order)
    elif kind == "cos":
        table = cos_table(anchor.s, anchor.c, order)
    else:
        raise ValueError(f"angle_jet handles sin/cos, not {kind!r}")
    n = len(tuple(base_point))
    weights = [0] * n
    weights[coord] = 1
    return jet_of_elementary(
        "derivative_table", weights, 0, base_point, order, table=table
    )


def closed_form_oracle(
    terms: Sequence[tuple[Scalar, str]], lam: RationalLike, truncation: int
) -> HbarSeries:
    """Expand sum of (scalar factor) x (hyperbolic function of lambda*hbar).

    The hyperbolic factors are constant-coefficient series from exact
    factorial formulas; the scalar factors multiply them coefficientwise.
    """
    acc = HbarSeries.zero(truncation)
    for factor, kind in terms:
        if kind not in _HYPERBOLIC_KINDS:
            raise UnsupportedForm(f"unknown hyperbolic factor {kind!r}")
        if not isinstance(factor, Scalar):
            factor = Scalar(factor)
        acc = acc + HbarSeries.hyperbolic(kind, lam, truncation).scale(factor)
    return acc


def trig_product_identities():
    """The sixteen (u, v, closed form) triples for u, v in the sin/cos basis.

    Operands are named by two letters, "s"/"c" for each angle ("sc" means
    sin(theta1)cos(theta2)).  The closed form is a list of (polynomial, kind)
    where the polynomial is a string over s1, c1, s2, c2 evaluated later at
    the anchors, and kind names the hyperbolic factor.
    """
    return [
        ("ss", "ss", [("s1*s1*s2*s2", "cosh2"), ("-c1*c1*c2*c2", "sinh2")]),
        ("ss", "sc", [("s2*c2*s1*s1", "one"), ("s2*c2", "sinh2"), ("-s1*c1", "coshsinh")]),
        ("ss", "cs", [("s1*c1*s2*s2", "one"), ("s1*c1", "sinh2"), ("s2*c2", "coshsinh")]),
        ("ss", "cc", [("s1*c1*s2*c2", "one"), ("s1*s1-s2*s2", "coshsinh")]),
        ("sc", "ss", [("s2*c2*s1*s1", "one"), ("s2*c2", "sinh2"), ("s1*c1", "coshsinh")]),
        ("sc", "sc", [("s1*s1*c2*c2", "cosh2"), ("-c1*c1*s2*s2", "sinh2")]),
        ("sc", "cs", [("s1*c1*s2*c2", "one"), ("c1*c1-s2*s2", "coshsinh")]),
        ("sc", "cc", [("s1*c1*c2*c2", "one"), ("s1*c1", "sinh2"), ("-s2*c2", "coshsinh")]),
        ("cs", "ss", [("s1*c1*s2*s2", "one"), ("s1*c1", "sinh2"), ("-s2*c2", "coshsinh")]),
        ("cs", "sc", [("s1*c1*s2*c2", "one"), ("s1*s1-c2*c2", "coshsinh")]),
        ("cs", "cs", [("c1*c1*s2*s2", "cosh2"), ("-s1*s1*c2*c2", "sinh2")]),
        ("cs", "cc", [("s2*c2*c1*c1", "one"), ("s2*c2", "sinh2"), ("s1*c1", "coshsinh")]),
        ("cc", "ss", [("s1*c1*s2*c2", "one"), ("c1*c1-c2*c2", "coshsinh")]),
        ("cc", "sc", [("s1*c1*c2*c2", "one"), ("s1*c1", "sinh2"), ("s2*c2", "coshsinh")]),
        ("cc", "cs", [("s2*c2*c1*c1", "one"), ("s2*c2", "sinh2"), ("-s1*c1", "coshsinh")]),
        ("cc", "cc", [("c1*c1*c2*c2", "cosh2"), ("-s1*s1*s2*s2", "sinh2")]),
    ]


def _operand_jet(tag, anchors, base_point, order):
    kinds = {"s": "sin", "c": "cos"}
    j1 = angle_jet(kinds[tag[0]], 0, anchors[0], base_point, order)
    j2 = angle_jet(kinds[tag[1]], 1, anchors[1], base_point, order)
    return j1 * j2


def _poly_jet(expr, anchors, base_point, order):
    """Evaluate a polynomial string over s1, c1, s2, c2 as a jet product."""
    env = {
        "s1": Scalar(angle_jet("sin", 0, anchors[0], base_point, order)),
        "c1": Scalar(angle_jet("cos", 0, anchors[0], base_point, order)),
        "s2": Scalar(angle_jet("sin", 1, anchors[1], base_point, order)),
        "c2": Scalar(angle_jet("cos", 1, anchors[1], base_point, order)),
    }
    acc = Scalar(0)
    for part in expr.replace("-", "+-").split("+"):
        part = part.strip()
        if not part:
            continue
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:]
        term = Scalar(1)
        for name in part.split("*"):
            term = term * env[name]
        acc = acc + term.scale(sign)
    return acc


def compare_to_budget(a: Scalar, b: Scalar) -> bool:
    """Exact equality after truncating to the smaller derivative budget."""
    if a.is_constant and b.is_constant:
        return a.const == b.const
    if a.is_constant or b.is_constant:
        jet = b.jet if a.is_constant else a.jet
        c = a.const if a.is_constant else b.const
        return jet == Jet.constant(c, jet.base_point, jet.order)
    order = min(a.jet.order, b.jet.order)
    return a.jet.truncate(order) == b.jet.truncate(order)


def series_match_to_budget(a: HbarSeries, b: HbarSeries) -> bool:
    return all(compare_to_budget(x, y) for x, y in zip(a.coeffs, b.coeffs))


def verify_trig_identities(
    anchors: Sequence[TrigAnchor],
    lam: RationalLike,
    truncation: int,
    jet_order: int,
    base_point: Sequence[RationalLike] = ("1/7", "1/11"),
) -> list[CheckResult]:
    """Check all sixteen product identities at one pair of anchors."""
    lam = rat(lam)
    theta = ThetaMatrix.single_pair(2, 0, 1, lam)
    star = MoyalProduct(theta)
    results = []
    for idx, (ut, vt, rhs_terms) in enumerate(trig_product_identities(), start=1):
        u = Scalar(_operand_jet(ut, anchors, base_point, jet_order))
        v = Scalar(_operand_jet(vt, anchors, base_point, jet_order))
        lhs = star_mul_scalars(u, v, star, truncation)
        rhs = closed_form_oracle(
            [(_poly_jet(e, anchors, base_point, jet_order), k) for e, k in rhs_terms],
            lam,
            truncation,
        )
        name = f"trig-identity-{idx:02d}"
        bad = None
        for q in range(truncation + 1):
            if not compare_to_budget(lhs.coeffs[q], rhs.coeffs[q]):
                bad = q
                break
        if bad is None:
            results.append(CheckResult.ok(name, f"{ut}*{vt} matches through order {truncation}"))
        else:
            results.append(
                CheckResult.fail(name, f"{ut}*{vt} differs first at hbar^{bad}", bad)
            )
    return results
