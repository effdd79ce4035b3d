"""Truncated formal power series in hbar over the exact scalar ring.

All series in one computation share a truncation order N and carry
coefficients for hbar^0 ... hbar^N.  The hbar^q coefficient of a product
depends only on coefficients of order <= q, so truncation commutes with the
ring operations: an identity verified at order N is an exact statement about
the infinite series through that order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import OrderMismatch, OrderOutOfRange
from .scalars import Jet, Rational, RationalLike, Scalar, rat, rat_str

__all__ = ["HbarSeries"]


class HbarSeries:
    """Series a[0] + a[1] hbar + ... + a[N] hbar^N with Scalar coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Union[Scalar, Jet, RationalLike]]):
        if not coeffs:
            raise ValueError("a series needs at least the hbar^0 coefficient")
        clean = []
        for c in coeffs:
            if not isinstance(c, Scalar):
                c = Scalar(c)
            clean.append(c)
        object.__setattr__(self, "coeffs", tuple(clean))

    def __setattr__(self, name, value):
        raise AttributeError("HbarSeries is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(truncation: int) -> "HbarSeries":
        return HbarSeries([Scalar(0)] * (truncation + 1))

    @staticmethod
    def one(truncation: int) -> "HbarSeries":
        return HbarSeries([Scalar(1)] + [Scalar(0)] * truncation)

    @staticmethod
    def from_scalar(s: Union[Scalar, Jet, RationalLike], truncation: int) -> "HbarSeries":
        if not isinstance(s, Scalar):
            s = Scalar(s)
        return HbarSeries([s] + [Scalar(0)] * truncation)

    @staticmethod
    def monomial(s: Union[Scalar, RationalLike], power: int, truncation: int) -> "HbarSeries":
        """s * hbar^power, truncated."""
        coeffs = [Scalar(0)] * (truncation + 1)
        if power <= truncation:
            coeffs[power] = s if isinstance(s, Scalar) else Scalar(s)
        return HbarSeries(coeffs)

    @staticmethod
    def hyperbolic(kind: str, lam: RationalLike, truncation: int) -> "HbarSeries":
        """Constant-coefficient series cosh/sinh of (lam * hbar) and friends.

        Kinds: "one", "cosh", "sinh", "cosh2", "sinh2", "coshsinh",
        "one_plus_2sinh2".  All coefficients are exact rationals from the
        factorial expansions.
        """
        lam = rat(lam)
        n = truncation
        if kind == "one":
            return HbarSeries.one(n)

        def fact(k):
            out = 1
            for t in range(2, k + 1):
                out *= t
            return out

        cosh = [
            lam**q / fact(q) if q % 2 == 0 else Fraction(0) for q in range(n + 1)
        ]
        sinh = [
            lam**q / fact(q) if q % 2 == 1 else Fraction(0) for q in range(n + 1)
        ]

        def prod(a, b):
            return [
                sum((a[r] * b[q - r] for r in range(q + 1)), Fraction(0))
                for q in range(n + 1)
            ]

        if kind == "cosh":
            vals = cosh
        elif kind == "sinh":
            vals = sinh
        elif kind == "cosh2":
            vals = prod(cosh, cosh)
        elif kind == "sinh2":
            vals = prod(sinh, sinh)
        elif kind == "coshsinh":
            vals = prod(cosh, sinh)
        elif kind == "one_plus_2sinh2":
            s2 = prod(sinh, sinh)
            vals = [Fraction(1) + 2 * s2[0]] + [2 * v for v in s2[1:]]
        else:
            raise ValueError(f"unknown hyperbolic kind {kind!r}")
        return HbarSeries([Scalar(v) for v in vals])

    # -- structure --------------------------------------------------------

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, q: int) -> Scalar:
        if not 0 <= q <= self.truncation:
            raise OrderOutOfRange(
                f"coefficient {q} requested from a series truncated at {self.truncation}"
            )
        return self.coeffs[q]

    def _require_order(self, other: "HbarSeries") -> None:
        if self.truncation != other.truncation:
            raise OrderMismatch(
                f"truncation orders differ: {self.truncation} vs {other.truncation}"
            )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        if self.truncation != other.truncation:
            return False
        return all(
            (a - b).is_zero() for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    # -- module operations ------------------------------------------------

    def __add__(self, other: "HbarSeries") -> "HbarSeries":
        self._require_order(other)
        return HbarSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "HbarSeries":
        return HbarSeries([-a for a in self.coeffs])

    def __sub__(self, other: "HbarSeries") -> "HbarSeries":
        self._require_order(other)
        return HbarSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: Union[Scalar, RationalLike]) -> "HbarSeries":
        if not isinstance(c, Scalar):
            c = Scalar(c)
        return HbarSeries([c * a for a in self.coeffs])

    def shift(self, power: int) -> "HbarSeries":
        """Multiply by hbar^power, truncating."""
        if power == 0:
            return self
        n = self.truncation
        coeffs = [Scalar(0)] * (n + 1)
        for q in range(n + 1 - power):
            coeffs[q + power] = self.coeffs[q]
        return HbarSeries(coeffs)

    def pointwise_mul(self, other: "HbarSeries") -> "HbarSeries":
        """Cauchy product with the commutative scalar product per order."""
        self._require_order(other)
        n = self.truncation
        out = []
        for q in range(n + 1):
            acc = Scalar(0)
            for r in range(q + 1):
                acc = acc + self.coeffs[r] * other.coeffs[q - r]
            out.append(acc)
        return HbarSeries(out)

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "HbarSeries":
        return HbarSeries([fn(c) for c in self.coeffs])

    def partial(self, i: int) -> "HbarSeries":
        """Coordinate partial applied to every hbar-coefficient."""
        return self.map_coeffs(lambda c: c.partial(i))

    # -- parity -----------------------------------------------------------

    def parity_split(self) -> tuple["HbarSeries", "HbarSeries"]:
        """(even, odd) with even + odd == self."""
        even = [c if q % 2 == 0 else Scalar(0) for q, c in enumerate(self.coeffs)]
        odd = [c if q % 2 == 1 else Scalar(0) for q, c in enumerate(self.coeffs)]
        return HbarSeries(even), HbarSeries(odd)

    # -- rendering --------------------------------------------------------

    def render(self) -> str:
        """Human-readable "c0 + c1·ħ + ..." with exact rationals."""
        parts = []
        for q, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if c.is_constant:
                txt = str(c.const)
            else:
                txt = f"jet({rat_str(c.jet.value())}@base)"
            if q == 0:
                parts.append(txt)
            elif q == 1:
                parts.append(f"{txt}·ħ")
            else:
                parts.append(f"{txt}·ħ^{q}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"HbarSeries[{self.render()}]"
