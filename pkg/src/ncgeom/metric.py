"""Noncommutative metrics and their two-sided star-inverses.

A metric is an n x n matrix of hbar-series that is invertible exactly when
its order-0 part is an invertible matrix of functions at the base point.
The inverse is built order by order from the right-inverse recursion and
independently re-derived from the left-inverse recursion; the two must
agree, and both defining products must reproduce the identity matrix
exactly through the truncation order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InternalDisagreement, NotInvertible
from .report import CheckResult
from .scalars import Scalar
from .series import HbarSeries
from .star import StarProduct, star_mul

__all__ = [
    "NCMetric",
    "InverseMetric",
    "check_invertible",
    "star_inverse",
    "check_metric_parity",
    "check_inverse_parity",
]

Matrix = Sequence[Sequence[HbarSeries]]


class NCMetric:
    """Metric component matrix g_ij together with its star product."""

    __slots__ = ("entries", "dim", "star")

    def __init__(self, entries: Matrix, star: StarProduct):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("metric matrix must be square")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "star", star)

    def __setattr__(self, name, value):
        raise AttributeError("NCMetric is immutable")

    @property
    def truncation(self) -> int:
        return self.entries[0][0].truncation

    def __getitem__(self, ij: tuple[int, int]) -> HbarSeries:
        i, j = ij
        return self.entries[i][j]


class InverseMetric:
    """Simultaneous left and right star-inverse of a metric."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Matrix):
        rows = tuple(tuple(row) for row in entries)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", len(rows))

    def __setattr__(self, name, value):
        raise AttributeError("InverseMetric is immutable")

    def __getitem__(self, ij: tuple[int, int]) -> HbarSeries:
        i, j = ij
        return self.entries[i][j]


def _order0_matrix(g: NCMetric) -> list[list[Scalar]]:
    return [[g.entries[i][j].coeffs[0] for j in range(g.dim)] for i in range(g.dim)]


def _det_at_base(m: list[list[Scalar]]) -> Fraction:
    """Exact determinant of the matrix of base-point values."""
    vals = [[s.value() for s in row] for row in m]
    n = len(vals)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if vals[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            vals[col], vals[pivot] = vals[pivot], vals[col]
            det = -det
        det *= vals[col][col]
        inv = Fraction(1) / vals[col][col]
        for r in range(col + 1, n):
            factor = vals[r][col] * inv
            for c in range(col, n):
                vals[r][c] -= factor * vals[col][c]
    return det


def check_invertible(g: NCMetric) -> bool:
    """True iff det(g[0]) at the base point is a nonzero rational."""
    return _det_at_base(_order0_matrix(g)) != 0


def _pointwise_inverse(m: list[list[Scalar]]) -> list[list[Scalar]]:
    """Gauss-Jordan inverse over the commutative scalar ring."""
    n = len(m)
    a = [list(row) for row in m]
    inv = [
        [Scalar(1) if i == j else Scalar(0) for j in range(n)] for i in range(n)
    ]
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if a[r][col].value() != 0), None
        )
        if pivot is None:
            raise NotInvertible("order-0 metric is singular at the base point")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        scale = a[col][col].reciprocal()
        a[col] = [scale * x for x in a[col]]
        inv[col] = [scale * x for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def star_inverse(g: NCMetric) -> InverseMetric:
    """Two-sided star-inverse, built right and checked left.

    The hbar^q coefficient comes from splitting the defining identity
    g * ginv = delta into the order-0 term and everything else; the same is
    done for ginv * g = delta, and the two constructions must agree.
    """
    if not check_invertible(g):
        raise NotInvertible("order-0 metric is singular at the base point")
    n = g.dim
    N = g.truncation
    star = g.star
    G = [
        [[g.entries[i][j].coeffs[q] for j in range(n)] for i in range(n)]
        for q in range(N + 1)
    ]
    inv0 = _pointwise_inverse(G[0])

    def zeros():
        return [[Scalar(0)] * n for _ in range(n)]

    # right recursion: delta = sum_{t+r+s=q} B_t(g[r], ginv[s])
    right = [inv0]
    for q in range(1, N + 1):
        acc = zeros()
        for i in range(n):
            for j in range(n):
                s_ij = Scalar(0)
                for t in range(q + 1):
                    for r in range(q - t + 1):
                        s = q - t - r
                        if t == 0 and r == 0:
                            continue  # the unknown ginv[q] term
                        for k in range(n):
                            s_ij = s_ij + star.bq(G[r][i][k], right[s][k][j], t)
                acc[i][j] = s_ij
        layer = zeros()
        for i in range(n):
            for j in range(n):
                v = Scalar(0)
                for k in range(n):
                    v = v + inv0[i][k] * acc[k][j]
                layer[i][j] = -v
        right.append(layer)

    # left recursion: delta = sum_{t+r+s=q} B_t(ginv[r], g[s])
    left = [inv0]
    for q in range(1, N + 1):
        acc = zeros()
        for i in range(n):
            for j in range(n):
                s_ij = Scalar(0)
                for t in range(q + 1):
                    for r in range(q - t + 1):
                        s = q - t - r
                        if t == 0 and s == 0:
                            continue  # the unknown ginv[q] term
                        for k in range(n):
                            s_ij = s_ij + star.bq(left[r][i][k], G[s][k][j], t)
                acc[i][j] = s_ij
        layer = zeros()
        for i in range(n):
            for j in range(n):
                v = Scalar(0)
                for k in range(n):
                    v = v + acc[i][k] * inv0[k][j]
                layer[i][j] = -v
        left.append(layer)

    for q in range(N + 1):
        for i in range(n):
            for j in range(n):
                if not (right[q][i][j] - left[q][i][j]).is_zero():
                    raise InternalDisagreement(
                        f"left/right inverse recursions disagree at "
                        f"order {q}, entry ({i}, {j})"
                    )

    entries = [
        [HbarSeries([right[q][i][j] for q in range(N + 1)]) for j in range(n)]
        for i in range(n)
    ]
    ginv = InverseMetric(entries)

    # both defining products must reproduce the identity exactly
    for i in range(n):
        for j in range(n):
            rprod = HbarSeries.zero(N)
            lprod = HbarSeries.zero(N)
            for k in range(n):
                rprod = rprod + star_mul(g.entries[i][k], ginv.entries[k][j], star)
                lprod = lprod + star_mul(ginv.entries[i][k], g.entries[k][j], star)
            delta = HbarSeries.one(N) if i == j else HbarSeries.zero(N)
            if not (rprod - delta).is_zero() or not (lprod - delta).is_zero():
                raise InternalDisagreement(
                    f"star-inverse does not reproduce delta at ({i}, {j})"
                )
    return ginv


def _parity_holds(entries: Matrix) -> bool:
    n = len(entries)
    N = entries[0][0].truncation
    for q in range(N + 1):
        sign = 1 if q % 2 == 0 else -1
        for i in range(n):
            for j in range(n):
                a = entries[i][j].coeffs[q]
                b = entries[j][i].coeffs[q]
                if not (a - b.scale(sign)).is_zero():
                    return False
    return True


def check_metric_parity(g: NCMetric) -> bool:
    """Even orders transpose-symmetric, odd orders transpose-antisymmetric."""
    return _parity_holds(g.entries)


def check_inverse_parity(ginv: InverseMetric) -> bool:
    """The inverse of a parity-respecting metric inherits the same pattern."""
    return _parity_holds(ginv.entries)


def metric_parity_report(g: NCMetric) -> CheckResult:
    if check_metric_parity(g):
        return CheckResult.ok("metric-parity")
    return CheckResult.fail("metric-parity", "transpose-parity violated")
