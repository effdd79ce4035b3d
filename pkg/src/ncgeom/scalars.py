"""Exact coefficient ring: rationals and multivariate truncated Taylor jets.

A smooth function is represented here only through its truncated Taylor
expansion at a fixed base point, with exact rational coefficients.  Every
partial derivative consumes one order of validity ("budget"); running out is
a hard error rather than a silent truncation.  Constants carry an unbounded
budget and promote to whatever jet shape they meet.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import BudgetExhausted, IrrationalBase, ShapeMismatch

Rational = Fraction
RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "rat",
    "rat_str",
    "Jet",
    "Scalar",
    "jet_of_elementary",
    "coordinate_jet",
    "sin_table",
    "cos_table",
]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions or "p/q" strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "p/q" (denominator kept even when 1)."""
    return f"{value.numerator}/{value.denominator}"


def _zero_index(n: int) -> tuple[int, ...]:
    return (0,) * n


class Jet:
    """Truncated Taylor expansion at a base point with a derivative budget.

    ``coeffs`` maps a multi-index ``alpha`` (tuple of length ``num_vars``)
    to the Taylor coefficient ``d^alpha f(base) / alpha!``.  Only indices
    with total degree at most ``order`` are stored; zero coefficients are
    dropped.  Instances are immutable.
    """

    __slots__ = ("base_point", "num_vars", "order", "coeffs")

    def __init__(
        self,
        base_point: Sequence[RationalLike],
        order: int,
        coeffs: Mapping[tuple[int, ...], RationalLike],
    ):
        if order < 0:
            raise ValueError("jet order must be non-negative")
        base = tuple(rat(b) for b in base_point)
        n = len(base)
        clean: dict[tuple[int, ...], Fraction] = {}
        for alpha, c in coeffs.items():
            alpha = tuple(alpha)
            if len(alpha) != n:
                raise ShapeMismatch(
                    f"multi-index {alpha} does not match {n} variables"
                )
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative entry in multi-index {alpha}")
            if sum(alpha) > order:
                raise ValueError(
                    f"multi-index {alpha} exceeds jet order {order}"
                )
            c = rat(c)
            if c != 0:
                clean[alpha] = c
        object.__setattr__(self, "base_point", base)
        object.__setattr__(self, "num_vars", n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def constant(value: RationalLike, base_point: Sequence[RationalLike], order: int) -> "Jet":
        n = len(tuple(base_point))
        return Jet(base_point, order, {_zero_index(n): rat(value)})

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def same_shape(self, other: "Jet") -> bool:
        return self.base_point == other.base_point and self.num_vars == other.num_vars

    def _require_shape(self, other: "Jet") -> None:
        if not self.same_shape(other):
            raise ShapeMismatch(
                f"jets at {self.base_point} and {other.base_point} cannot combine"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.base_point == other.base_point
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.base_point, self.order, frozenset(self.coeffs.items())))

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "Jet") -> "Jet":
        self._require_shape(other)
        order = min(self.order, other.order)
        out = {a: c for a, c in self.coeffs.items() if sum(a) <= order}
        for a, c in other.coeffs.items():
            if sum(a) <= order:
                out[a] = out.get(a, Fraction(0)) + c
        return Jet(self.base_point, order, out)

    def __neg__(self) -> "Jet":
        return Jet(self.base_point, self.order, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def __mul__(self, other: "Jet") -> "Jet":
        self._require_shape(other)
        order = min(self.order, other.order)
        # sort one operand by total degree so the inner loop can stop at
        # the truncation boundary instead of filtering every pair
        rhs = sorted(
            ((sum(b), b, cb) for b, cb in other.coeffs.items()), key=lambda t: t[0]
        )
        out: dict[tuple[int, ...], Fraction] = {}
        for a, ca in self.coeffs.items():
            da = sum(a)
            if da > order:
                continue
            room = order - da
            for db, b, cb in rhs:
                if db > room:
                    break
                g = tuple(x + y for x, y in zip(a, b))
                if g in out:
                    out[g] += ca * cb
                else:
                    out[g] = ca * cb
        return Jet(self.base_point, order, out)

    def scale(self, c: RationalLike) -> "Jet":
        c = rat(c)
        return Jet(self.base_point, self.order, {a: c * v for a, v in self.coeffs.items()})

    # -- differentiation --------------------------------------------------

    def partial(self, i: int) -> "Jet":
        """Partial derivative in coordinate ``i`` (0-based); costs one order."""
        if not 0 <= i < self.num_vars:
            raise ValueError(f"coordinate index {i} out of range")
        if self.order == 0:
            raise BudgetExhausted(
                "cannot differentiate a jet with exhausted budget (order 0)"
            )
        out: dict[tuple[int, ...], Fraction] = {}
        for a, c in self.coeffs.items():
            if a[i] == 0:
                continue
            b = list(a)
            b[i] -= 1
            if sum(b) <= self.order - 1:
                out[tuple(b)] = c * a[i]
        return Jet(self.base_point, self.order - 1, out)

    def derivative(self, alpha: Sequence[int]) -> "Jet":
        """Iterated partial derivative ``d^alpha``, done in one pass."""
        alpha = tuple(alpha)
        k = sum(alpha)
        if k == 0:
            return self
        if k > self.order:
            raise BudgetExhausted(
                f"derivative of total order {k} exceeds budget {self.order}"
            )
        order = self.order - k
        out: dict[tuple[int, ...], Fraction] = {}
        for a, c in self.coeffs.items():
            if any(ai < xi for ai, xi in zip(a, alpha)):
                continue
            b = tuple(ai - xi for ai, xi in zip(a, alpha))
            if sum(b) > order:
                continue
            factor = 1
            for ai, bi in zip(a, b):
                # falling factorial ai * (ai-1) * ... * (bi+1)
                for t in range(bi + 1, ai + 1):
                    factor *= t
            out[b] = out.get(b, Fraction(0)) + c * factor
        return Jet(self.base_point, order, out)

    # -- queries ----------------------------------------------------------

    def value(self) -> Fraction:
        """The function value at the base point."""
        return self.coeffs.get(_zero_index(self.num_vars), Fraction(0))

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(
            self.base_point,
            order,
            {a: c for a, c in self.coeffs.items() if sum(a) <= order},
        )

    def __repr__(self):
        terms = ", ".join(
            f"{a}: {rat_str(c)}" for a, c in sorted(self.coeffs.items())
        )
        return f"Jet(base={self.base_point}, order={self.order}, {{{terms}}})"


class Scalar:
    """Element of the coefficient ring: a constant or a jet.

    Constants behave as jets whose positive-order coefficients vanish and
    whose derivative budget is unbounded; mixed arithmetic promotes the
    constant to the jet's shape.
    """

    __slots__ = ("const", "jet")

    def __init__(self, value: Union[RationalLike, Jet]):
        if isinstance(value, Jet):
            object.__setattr__(self, "const", None)
            object.__setattr__(self, "jet", value)
        else:
            object.__setattr__(self, "const", rat(value))
            object.__setattr__(self, "jet", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- basic queries ----------------------------------------------------

    @property
    def is_constant(self) -> bool:
        return self.const is not None

    @property
    def order(self) -> Union[int, None]:
        """Remaining derivative budget; None means unbounded."""
        return None if self.jet is None else self.jet.order

    def is_zero(self) -> bool:
        if self.const is not None:
            return self.const == 0
        return self.jet.is_zero()

    def value(self) -> Fraction:
        return self.const if self.const is not None else self.jet.value()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.is_constant and other.is_constant:
            return self.const == other.const
        if self.is_constant != other.is_constant:
            # a constant equals a jet only if the jet is that constant
            jet = self.jet if self.jet is not None else other.jet
            c = self.const if self.const is not None else other.const
            return jet == Jet.constant(c, jet.base_point, jet.order)
        return self.jet == other.jet

    def __hash__(self):
        return hash((self.const, self.jet))

    # -- promotion --------------------------------------------------------

    def _pair(self, other: "Scalar") -> tuple:
        """Return (a, b) as two Jets or two Fractions on a common shape."""
        if self.is_constant and other.is_constant:
            return self.const, other.const
        if self.is_constant:
            j = other.jet
            return Jet.constant(self.const, j.base_point, j.order), j
        if other.is_constant:
            j = self.jet
            return j, Jet.constant(other.const, j.base_point, j.order)
        return self.jet, other.jet

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        a, b = self._pair(other)
        return Scalar(a + b)

    def __neg__(self) -> "Scalar":
        if self.is_constant:
            return Scalar(-self.const)
        return Scalar(-self.jet)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        a, b = self._pair(other)
        return Scalar(a * b)

    def scale(self, c: RationalLike) -> "Scalar":
        if self.is_constant:
            return Scalar(self.const * rat(c))
        return Scalar(self.jet.scale(c))

    def partial(self, i: int) -> "Scalar":
        """Coordinate partial; Constant -> Constant(0), budget untouched."""
        if self.is_constant:
            return Scalar(0)
        return Scalar(self.jet.partial(i))

    def derivative(self, alpha: Sequence[int]) -> "Scalar":
        if self.is_constant:
            if sum(alpha) == 0:
                return self
            return Scalar(0)
        return Scalar(self.jet.derivative(alpha))

    def reciprocal(self) -> "Scalar":
        """Multiplicative inverse; requires a nonzero value at the base point."""
        if self.is_constant:
            if self.const == 0:
                raise ZeroDivisionError("reciprocal of zero")
            return Scalar(Fraction(1) / self.const)
        j = self.jet
        c = j.value()
        if c == 0:
            raise ZeroDivisionError("jet vanishes at the base point")
        # 1/f = (1/c) * sum_k (-h)^k with h = f/c - 1 (h has no constant term,
        # so powers beyond the order drop out of the truncation).
        h = j.scale(Fraction(1) / c) - Jet.constant(1, j.base_point, j.order)
        acc = Jet.constant(1, j.base_point, j.order)
        power = Jet.constant(1, j.base_point, j.order)
        for _ in range(j.order):
            power = power * (-h)
            if power.is_zero():
                break
            acc = acc + power
        return Scalar(acc.scale(Fraction(1) / c))

    def __repr__(self):
        if self.is_constant:
            return f"Scalar({rat_str(self.const)})"
        return f"Scalar({self.jet!r})"


ZERO = Scalar(0)
ONE = Scalar(1)


def coordinate_jet(i: int, base_point: Sequence[RationalLike], order: int) -> Jet:
    """The coordinate function x^i (0-based) as a jet."""
    base = tuple(rat(b) for b in base_point)
    n = len(base)
    if not 0 <= i < n:
        raise ValueError(f"coordinate index {i} out of range for {n} variables")
    coeffs: dict[tuple[int, ...], Fraction] = {_zero_index(n): base[i]}
    if order >= 1:
        e = [0] * n
        e[i] = 1
        coeffs[tuple(e)] = Fraction(1)
    return Jet(base, order, coeffs)


def sin_table(s: RationalLike, c: RationalLike, order: int) -> list[Fraction]:
    """Derivative tower of sin at a point where (sin, cos) = (s, c)."""
    s, c = rat(s), rat(c)
    cycle = [s, c, -s, -c]
    return [cycle[k % 4] for k in range(order + 1)]


def cos_table(s: RationalLike, c: RationalLike, order: int) -> list[Fraction]:
    """Derivative tower of cos at a point where (sin, cos) = (s, c)."""
    s, c = rat(s), rat(c)
    cycle = [c, -s, -c, s]
    return [cycle[k % 4] for k in range(order + 1)]


def _elementary_tower(kind: str, t0: Fraction, order: int) -> list[Fraction]:
    if kind in ("sin", "cos", "sinh", "cosh", "exp") and t0 != 0:
        raise IrrationalBase(
            f"{kind} has no rational derivative tower at base {t0}; "
            "supply a derivative_table"
        )
    if kind == "sin":
        return sin_table(0, 1, order)
    if kind == "cos":
        return cos_table(0, 1, order)
    if kind == "sinh":
        return [Fraction(k % 2) for k in range(order + 1)]
    if kind == "cosh":
        return [Fraction(1 - k % 2) for k in range(order + 1)]
    if kind == "exp":
        return [Fraction(1)] * (order + 1)
    raise ValueError(f"unknown elementary kind {kind!r}")


def jet_of_elementary(
    kind: str,
    weights: Sequence[RationalLike],
    shift: RationalLike,
    base_point: Sequence[RationalLike],
    order: int,
    table: Iterable[RationalLike] = None,
    poly_coeffs: Sequence[RationalLike] = None,
) -> Jet:
    """Jet of f(w . x + shift) for an elementary or table-described f.

    ``kind`` is one of sin, cos, sinh, cosh, exp, polynomial or
    derivative_table.  For the named functions the rational derivative tower
    must exist at the argument's base value (in practice: base value 0);
    otherwise pass ``derivative_table`` with ``table`` holding
    d^k f / dt^k at the base value for k <= order.
    """
    base = tuple(rat(b) for b in base_point)
    n = len(base)
    w = tuple(rat(x) for x in weights)
    if len(w) != n:
        raise ShapeMismatch("weight vector length must match base point")
    t0 = rat(shift) + sum(wi * bi for wi, bi in zip(w, base))

    if kind == "derivative_table":
        if table is None:
            raise ValueError("derivative_table requires a table")
        tower = [rat(x) for x in table]
        if len(tower) < order + 1:
            raise ValueError(
                f"table has {len(tower)} entries, need {order + 1}"
            )
    elif kind == "polynomial":
        if poly_coeffs is None:
            raise ValueError("polynomial requires poly_coeffs")
        p = [rat(x) for x in poly_coeffs]
        tower = []
        for k in range(order + 1):
            # d^k/dt^k sum_j p_j t^j at t0
            v = Fraction(0)
            for j in range(k, len(p)):
                fall = 1
                for t in range(j - k + 1, j + 1):
                    fall *= t
                v += p[j] * fall * t0 ** (j - k)
            tower.append(v)
    else:
        tower = _elementary_tower(kind, t0, order)

    # f(t0 + u) with u = w . (x - base): Taylor coefficient at alpha is
    # tower[|alpha|] * prod w_i^alpha_i / prod alpha_i!.
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for alpha in _indices_up_to(n, order):
        k = sum(alpha)
        c = tower[k]
        if c == 0:
            continue
        for wi, ai in zip(w, alpha):
            if ai:
                c *= wi**ai
        if c == 0:
            continue
        denom = 1
        for ai in alpha:
            denom *= math.factorial(ai)
        coeffs[alpha] = c / denom
    return Jet(base, order, coeffs)


def _indices_up_to(n: int, order: int):
    """All multi-indices of length n with total degree <= order."""
    if n == 0:
        yield ()
        return
    for head in range(order + 1):
        for tail in _indices_up_to(n - 1, order - head):
            yield (head,) + tail
