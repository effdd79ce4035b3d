"""The canonical connection of a metric and prescribed chiral coefficients.

Both the lowered left/right coefficient families and their raised forms are
materialized.  Compatibility, torsion-freeness and chirality are
constructive postconditions of the defining formula, but they are also
re-checked independently because the detector tests rely on them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import AsymmetricChiral, InternalDisagreement
from .metric import InverseMetric, NCMetric
from .report import CheckResult
from .series import HbarSeries
from .star import star_mul

__all__ = [
    "ChiralCoefficients",
    "ConnectionCoefficients",
    "canonical_connection",
    "check_compatibility",
    "check_chirality_and_torsion",
    "check_metric_parallel",
    "check_connection_parity",
]


class ChiralCoefficients:
    """Prescribed difference between left and right lowered coefficients."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence[Sequence[HbarSeries]]]):
        cube = tuple(tuple(tuple(row) for row in plane) for plane in entries)
        n = len(cube)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not (cube[i][j][k] - cube[j][i][k]).is_zero():
                        raise AsymmetricChiral(
                            f"chiral coefficients must be symmetric in the "
                            f"first two indices; ({i},{j},{k}) breaks it"
                        )
        object.__setattr__(self, "entries", cube)
        object.__setattr__(self, "dim", n)

    def __setattr__(self, name, value):
        raise AttributeError("ChiralCoefficients is immutable")

    @staticmethod
    def zero(dim: int, truncation: int) -> "ChiralCoefficients":
        z = HbarSeries.zero(truncation)
        return ChiralCoefficients(
            [[[z for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
        )

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.entries[i][j][k]


class ConnectionCoefficients:
    """Lowered and raised left/right connection coefficient arrays.

    ``low[i][j][k]`` is the left lowered coefficient, ``low_t`` the right
    one; ``up[i][j][k]`` holds the raised left coefficient with upper index
    k, ``up_t`` its right counterpart.
    """

    __slots__ = ("low", "low_t", "up", "up_t", "dim")

    def __init__(self, low, low_t, up, up_t):
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "low_t", low_t)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "up_t", up_t)
        object.__setattr__(self, "dim", len(low))

    def __setattr__(self, name, value):
        raise AttributeError("ConnectionCoefficients is immutable")


def canonical_connection(
    g: NCMetric, ginv: InverseMetric, ups: ChiralCoefficients
) -> ConnectionCoefficients:
    """Build the connection from the half-sum-of-derivatives formula.

    Lowered coefficients use half of (d_i g_jk + d_j g_ki - d_k g_ji) plus
    or minus half the chiral coefficient; raising multiplies the inverse on
    the right for the left family and on the left for the right family, and
    the round trip back to the lowered arrays is asserted.
    """
    n = g.dim
    star = g.star
    half = Fraction(1, 2)

    dg = [
        [[g.entries[j][k].partial(i) for k in range(n)] for j in range(n)]
        for i in range(n)
    ]

    low = [[[None] * n for _ in range(n)] for _ in range(n)]
    low_t = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                base = dg[i][j][k] + dg[j][k][i] - dg[k][j][i]
                low[i][j][k] = (base + ups[i, j, k]).scale(half)
                low_t[i][j][k] = (base - ups[i, j, k]).scale(half)

    up = [[[None] * n for _ in range(n)] for _ in range(n)]
    up_t = [[[None] * n for _ in range(n)] for _ in range(n)]
    N = g.truncation
    for i in range(n):
        for j in range(n):
            for l in range(n):
                acc = HbarSeries.zero(N)
                acc_t = HbarSeries.zero(N)
                for m in range(n):
                    acc = acc + star_mul(low[i][j][m], ginv.entries[m][l], star)
                    acc_t = acc_t + star_mul(ginv.entries[l][m], low_t[i][j][m], star)
                up[i][j][l] = acc
                up_t[i][j][l] = acc_t

    conn = ConnectionCoefficients(low, low_t, up, up_t)

    # lowering the raised arrays must recover the lowered arrays exactly
    for i in range(n):
        for j in range(n):
            for k in range(n):
                back = HbarSeries.zero(N)
                back_t = HbarSeries.zero(N)
                for l in range(n):
                    back = back + star_mul(up[i][j][l], g.entries[l][k], star)
                    back_t = back_t + star_mul(g.entries[k][l], up_t[i][j][l], star)
                if not (back - low[i][j][k]).is_zero():
                    raise InternalDisagreement(
                        f"raised/lowered round trip failed at ({i},{j},{k})"
                    )
                if not (back_t - low_t[i][j][k]).is_zero():
                    raise InternalDisagreement(
                        f"right raised/lowered round trip failed at ({i},{j},{k})"
                    )
    return conn


def check_compatibility(g: NCMetric, conn: ConnectionCoefficients) -> CheckResult:
    """d_k g_ij = Gamma_kij + tilde-Gamma_kji for every index triple."""
    name = "compatibility"
    n = g.dim
    for k in range(n):
        for i in range(n):
            for j in range(n):
                lhs = g.entries[i][j].partial(k)
                rhs = conn.low[k][i][j] + conn.low_t[k][j][i]
                if not (lhs - rhs).is_zero():
                    return CheckResult.fail(
                        name,
                        f"metric compatibility fails at (k,i,j)=({k},{i},{j})",
                        (k, i, j),
                    )
    return CheckResult.ok(name)


def check_chirality_and_torsion(
    conn: ConnectionCoefficients, ups: ChiralCoefficients
) -> CheckResult:
    """Gamma - tilde-Gamma = Upsilon and (i,j)-symmetry of all four arrays."""
    name = "chirality-torsion"
    n = conn.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not (conn.low[i][j][k] - conn.low_t[i][j][k] - ups[i, j, k]).is_zero():
                    return CheckResult.fail(
                        name, f"chirality fails at ({i},{j},{k})", (i, j, k)
                    )
                for arr, tag in (
                    (conn.low, "low"),
                    (conn.low_t, "low_t"),
                    (conn.up, "up"),
                    (conn.up_t, "up_t"),
                ):
                    if not (arr[i][j][k] - arr[j][i][k]).is_zero():
                        return CheckResult.fail(
                            name,
                            f"torsion: {tag} not symmetric in (i,j) at ({i},{j},{k})",
                            (tag, i, j, k),
                        )
    return CheckResult.ok(name)


def check_metric_parallel(
    g: NCMetric, ginv: InverseMetric, conn: ConnectionCoefficients
) -> CheckResult:
    """Covariant constancy of the metric and of its inverse."""
    name = "metric-parallel"
    n = g.dim
    N = g.truncation
    star = g.star
    for k in range(n):
        for i in range(n):
            for j in range(n):
                direct = g.entries[i][j].partial(k) - conn.low[k][i][j] - conn.low_t[k][j][i]
                if not direct.is_zero():
                    return CheckResult.fail(
                        name, f"nabla g != 0 at ({k},{i},{j})", ("g", k, i, j)
                    )
                inv_term = ginv.entries[i][j].partial(k)
                for l in range(n):
                    inv_term = inv_term + star_mul(
                        ginv.entries[i][l], conn.up[k][l][j], star
                    )
                    inv_term = inv_term + star_mul(
                        conn.up_t[k][l][i], ginv.entries[l][j], star
                    )
                if not inv_term.is_zero():
                    return CheckResult.fail(
                        name, f"nabla g^-1 != 0 at ({k},{i},{j})", ("ginv", k, i, j)
                    )
    return CheckResult.ok(name)


def check_connection_parity(
    conn: ConnectionCoefficients, g: NCMetric, ups: ChiralCoefficients
) -> CheckResult:
    """Left/right relation per hbar-order under the parity hypotheses.

    The relation itself decides pass/fail; the hypotheses (metric
    transpose parity, vanishing even-order chiral coefficients) are only
    noted in the details, since the relation can hold without them.
    """
    from .metric import check_metric_parity

    name = "connection-parity"
    n = conn.dim
    N = g.truncation

    pre_ok = check_metric_parity(g)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for q in range(0, N + 1, 2):
                    if not ups[i, j, k].coeffs[q].is_zero():
                        pre_ok = False

    violation = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for q in range(N + 1):
                    sign = 1 if q % 2 == 0 else -1
                    a = conn.low[i][j][k].coeffs[q]
                    b = conn.low_t[i][j][k].coeffs[q]
                    if not (a - b.scale(sign)).is_zero():
                        violation = (i, j, k, q)
                        break
                if violation:
                    break
            if violation:
                break
        if violation:
            break

    note = "hypotheses hold" if pre_ok else "hypotheses unmet"
    if violation is None:
        return CheckResult.ok(name, note)
    return CheckResult.fail(
        name, f"{note}; relation fails at {violation}", violation
    )
