"""Star products on truncated hbar-series.

The Moyal product is generated by a constant skew-symmetric matrix theta:
its order-q bidifferential operator is the explicit q-fold sum

    mu_q(u, v) = (1/q!) sum theta^{i1 j1} ... theta^{iq jq}
                         (d_{i1...iq} u) (d_{j1...jq} v),

implemented by grouping equal index pairs (multinomial collapse), which is
exact and allocation-bounded.  General star products are supplied as
explicit per-order tables of bidifferential operators; the engine validates
unitality structurally and tests associativity empirically rather than
deriving the operators from a Poisson structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import BudgetExhausted, ValidationError
from .report import CheckResult
from .scalars import Jet, RationalLike, Scalar, rat
from .series import HbarSeries

__all__ = [
    "ThetaMatrix",
    "BidifferentialOperator",
    "MoyalProduct",
    "GeneralStarProduct",
    "StarProduct",
    "mu_q",
    "star_mul",
    "star_mul_scalars",
    "star_commutator",
    "poisson_bracket",
    "check_leibniz",
    "check_associativity",
]


class ThetaMatrix:
    """Constant skew-symmetric rational matrix driving a Moyal product."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence[RationalLike]]):
        rows = tuple(tuple(rat(x) for x in row) for row in entries)
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValidationError("theta matrix must be square")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise ValidationError(
                        f"theta is not skew-symmetric at ({i}, {j})"
                    )
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", n)

    def __setattr__(self, name, value):
        raise AttributeError("ThetaMatrix is immutable")

    @staticmethod
    def zero(dim: int) -> "ThetaMatrix":
        return ThetaMatrix([[0] * dim for _ in range(dim)])

    @staticmethod
    def single_pair(dim: int, i: int, j: int, lam: RationalLike) -> "ThetaMatrix":
        """theta with theta[i][j] = lam = -theta[j][i], zero elsewhere (0-based)."""
        m = [[Fraction(0)] * dim for _ in range(dim)]
        m[i][j] = rat(lam)
        m[j][i] = -rat(lam)
        return ThetaMatrix(m)

    def nonzero_pairs(self) -> list[tuple[int, int, Fraction]]:
        return [
            (i, j, self.entries[i][j])
            for i in range(self.dim)
            for j in range(self.dim)
            if self.entries[i][j] != 0
        ]

    def __eq__(self, other):
        return isinstance(other, ThetaMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)


def _compositions(total: int, slots: int):
    """All ways to write total as an ordered sum of `slots` non-negatives."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, slots - 1):
            yield (head,) + tail


def mu_q(u: Scalar, v: Scalar, q: int, theta: ThetaMatrix) -> Scalar:
    """Order-q Moyal bidifferential operator applied to two scalars."""
    if q == 0:
        return u * v
    if u.is_constant or v.is_constant:
        # a constant is annihilated by every derivative
        return Scalar(0)
    if u.is_zero() or v.is_zero():
        return Scalar(0)
    for s in (u, v):
        if s.order is not None and s.order < q:
            raise BudgetExhausted(
                f"mu_{q} needs derivative budget {q}, operand has {s.order}"
            )
    n = theta.dim
    pairs = theta.nonzero_pairs()
    acc = Scalar(0)
    for counts in _compositions(q, len(pairs)):
        coeff = Fraction(1)
        alpha = [0] * n
        beta = [0] * n
        for (i, j, val), c in zip(pairs, counts):
            if c == 0:
                continue
            coeff *= val**c / math.factorial(c)
            alpha[i] += c
            beta[j] += c
        term = u.derivative(alpha) * v.derivative(beta)
        acc = acc + term.scale(coeff)
    return acc


@dataclass(frozen=True)
class _BiTerm:
    coeff: Scalar
    left: tuple[int, ...]
    right: tuple[int, ...]


class BidifferentialOperator:
    """Finite sum of terms c * (d^alpha u) (d^beta v)."""

    __slots__ = ("terms", "dim")

    def __init__(
        self,
        dim: int,
        terms: Iterable[tuple[Union[Scalar, Jet, RationalLike], Sequence[int], Sequence[int]]],
    ):
        clean = []
        for coeff, left, right in terms:
            if not isinstance(coeff, Scalar):
                coeff = Scalar(coeff)
            left = tuple(left)
            right = tuple(right)
            if len(left) != dim or len(right) != dim:
                raise ValidationError(
                    "bidifferential multi-indices must match the chart dimension"
                )
            clean.append(_BiTerm(coeff, left, right))
        object.__setattr__(self, "terms", tuple(clean))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("BidifferentialOperator is immutable")

    def is_unital(self) -> bool:
        """True when every term differentiates both slots at least once."""
        return all(
            sum(t.left) >= 1 and sum(t.right) >= 1 for t in self.terms
        )

    def apply(self, u: Scalar, v: Scalar) -> Scalar:
        acc = Scalar(0)
        for t in self.terms:
            acc = acc + t.coeff * u.derivative(t.left) * v.derivative(t.right)
        return acc


class MoyalProduct:
    """Star product with B_q = mu_q for a constant skew matrix theta."""

    __slots__ = ("theta",)

    def __init__(self, theta: ThetaMatrix):
        object.__setattr__(self, "theta", theta)

    def __setattr__(self, name, value):
        raise AttributeError("MoyalProduct is immutable")

    @property
    def dim(self) -> int:
        return self.theta.dim

    def bq(self, u: Scalar, v: Scalar, q: int) -> Scalar:
        return mu_q(u, v, q, self.theta)


class GeneralStarProduct:
    """Star product from user-supplied per-order bidifferential tables."""

    __slots__ = ("operators", "dim")

    def __init__(self, dim: int, operators: dict[int, BidifferentialOperator]):
        for q, op in operators.items():
            if q < 1:
                raise ValidationError("B_q tables start at order 1")
            if op.dim != dim:
                raise ValidationError("operator dimension mismatch")
            if not op.is_unital():
                raise ValidationError(
                    f"B_{q} has a term with an underived slot; 1 * u = u * 1 = u fails"
                )
        object.__setattr__(self, "operators", dict(operators))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralStarProduct is immutable")

    def bq(self, u: Scalar, v: Scalar, q: int) -> Scalar:
        if q == 0:
            return u * v
        op = self.operators.get(q)
        if op is None:
            return Scalar(0)
        return op.apply(u, v)


StarProduct = Union[MoyalProduct, GeneralStarProduct]


def star_mul(a: HbarSeries, b: HbarSeries, star: StarProduct) -> HbarSeries:
    """(a star b)[q] = sum_{r+s+t=q} B_t(a[r], b[s]), truncated."""
    n = a.truncation
    if b.truncation != n:
        from .errors import OrderMismatch

        raise OrderMismatch("star operands must share the truncation order")
    out = []
    for q in range(n + 1):
        acc = Scalar(0)
        for t in range(q + 1):
            for r in range(q - t + 1):
                s = q - t - r
                if a.coeffs[r].is_zero() or b.coeffs[s].is_zero():
                    continue
                acc = acc + star.bq(a.coeffs[r], b.coeffs[s], t)
        out.append(acc)
    return HbarSeries(out)


def star_mul_scalars(u: Scalar, v: Scalar, star: StarProduct, truncation: int) -> HbarSeries:
    """Star product of two plain scalars as an hbar-series."""
    return HbarSeries([star.bq(u, v, q) for q in range(truncation + 1)])


def star_commutator(a: HbarSeries, b: HbarSeries, star: StarProduct) -> HbarSeries:
    return star_mul(a, b, star) - star_mul(b, a, star)


def poisson_bracket(star: StarProduct, u: Scalar, v: Scalar) -> Scalar:
    """Antisymmetrized order-1 part: (B_1(u,v) - B_1(v,u)) / 2."""
    diff = star.bq(u, v, 1) - star.bq(v, u, 1)
    return diff.scale(Fraction(1, 2))


def check_leibniz(
    star: StarProduct,
    samples: Sequence[tuple[Scalar, Scalar]],
    truncation: int,
) -> CheckResult:
    """d_i(u * v) = (d_i u) * v + u * (d_i v) on every sample, every i."""
    name = "leibniz"
    for idx, (u, v) in enumerate(samples):
        prod = star_mul_scalars(u, v, star, truncation)
        for i in range(star.dim):
            lhs = prod.partial(i)
            rhs = star_mul_scalars(u.partial(i), v, star, truncation) + star_mul_scalars(
                u, v.partial(i), star, truncation
            )
            if not (lhs - rhs).is_zero():
                return CheckResult.fail(
                    name,
                    f"sample {idx}, coordinate {i}: derivative is not a star-derivation",
                    {"sample": idx, "coordinate": i},
                )
    return CheckResult.ok(name, f"{len(samples)} sample pairs, all coordinates")


def check_associativity(
    star: StarProduct,
    samples: Sequence[tuple[Scalar, Scalar, Scalar]],
    truncation: int,
) -> CheckResult:
    """(a*b)*c = a*(b*c) through the truncation order on every triple."""
    name = "associativity"
    for idx, (u, v, w) in enumerate(samples):
        su = HbarSeries.from_scalar(u, truncation)
        sv = HbarSeries.from_scalar(v, truncation)
        sw = HbarSeries.from_scalar(w, truncation)
        lhs = star_mul(star_mul(su, sv, star), sw, star)
        rhs = star_mul(su, star_mul(sv, sw, star), star)
        diff = lhs - rhs
        for q in range(truncation + 1):
            if not diff.coeffs[q].is_zero():
                return CheckResult.fail(
                    name,
                    f"triple {idx} fails first at hbar^{q}",
                    {"triple": idx, "order": q},
                )
    return CheckResult.ok(name, f"{len(samples)} triples through order {truncation}")
