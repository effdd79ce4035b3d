"""Riemann and Ricci curvatures, their covariant derivatives, and identities.

The Riemann components are computed by three provably equal routes (the
commutator of covariant derivatives paired with the metric, and the two
displayed component formulas); any disagreement aborts, since it can only
be an implementation bug.  The right-connection curvature is computed
independently and must coincide with the left one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .connection import ChiralCoefficients, ConnectionCoefficients
from .errors import InternalDisagreement
from .metric import InverseMetric, NCMetric, check_metric_parity
from .report import CheckResult
from .series import HbarSeries
from .star import StarProduct, star_mul

__all__ = [
    "RiemannField",
    "RicciBundle",
    "CurvatureDerivative",
    "covariant_derivative_vector",
    "curvature_operator_components",
    "riemann",
    "ricci_bundle",
    "curvature_covariant_derivative",
    "first_bianchi_check",
    "second_bianchi_check",
    "contracted_bianchi_check",
    "ricci_equivalence_check",
    "RicciEquivalenceReport",
]

Vector = list[HbarSeries]


def covariant_derivative_vector(
    conn: ConnectionCoefficients,
    star: StarProduct,
    comps: Sequence[HbarSeries],
    i: int,
    right: bool = False,
) -> Vector:
    """Components of nabla_i applied to a vector field.

    Left vectors a^k * E_k give d_i a^k + a^j * Gamma^k_ij; right vectors
    reverse the product and use the right coefficients.
    """
    n = conn.dim
    out = []
    for k in range(n):
        acc = comps[k].partial(i)
        for j in range(n):
            if right:
                acc = acc + star_mul(conn.up_t[i][j][k], comps[j], star)
            else:
                acc = acc + star_mul(comps[j], conn.up[i][j][k], star)
        out.append(acc)
    return out


def curvature_operator_components(
    conn: ConnectionCoefficients,
    star: StarProduct,
    i: int,
    j: int,
    k: int,
    right: bool = False,
) -> Vector:
    """Components of [nabla_i, nabla_j] applied to the k-th basis vector."""
    n = conn.dim
    up = conn.up_t if right else conn.up
    first = [up[j][k][m] for m in range(n)]
    second = [up[i][k][m] for m in range(n)]
    v1 = covariant_derivative_vector(conn, star, first, i, right)
    v2 = covariant_derivative_vector(conn, star, second, j, right)
    return [a - b for a, b in zip(v1, v2)]


class RiemannField:
    """Lowered curvature components R[l][k][i][j]."""

    __slots__ = ("entries", "dim", "operator_components")

    def __init__(self, entries, operator_components):
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dim", len(entries))
        object.__setattr__(self, "operator_components", operator_components)

    def __setattr__(self, name, value):
        raise AttributeError("RiemannField is immutable")

    def __getitem__(self, lkij):
        l, k, i, j = lkij
        return self.entries[l][k][i][j]


def riemann(
    g: NCMetric, ginv: InverseMetric, conn: ConnectionCoefficients
) -> RiemannField:
    """Curvature components by three routes, all required to agree.

    Also computes the right-connection curvature and asserts its equality
    with the left one, and the antisymmetry in the last index pair.
    """
    n = g.dim
    N = g.truncation
    star = g.star

    C = [
        [
            [curvature_operator_components(conn, star, i, j, k) for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]

    # mid[i][k][r] = Gamma_iks * g^{sr}, shared across all quadratic terms
    mid = [
        [
            [
                sum(
                    (
                        star_mul(conn.low[i][k][s], ginv.entries[s][r], star)
                        for s in range(n)
                    ),
                    HbarSeries.zero(N),
                )
                for r in range(n)
            ]
            for k in range(n)
        ]
        for i in range(n)
    ]

    def half_quad(i, j, k, l):
        acc = HbarSeries.zero(N)
        for r in range(n):
            acc = acc + star_mul(mid[i][k][r], conn.low_t[j][l][r], star)
        return acc

    def quad(i, j, k, l):
        # Gamma_iks * g^{sr} * tilde-Gamma_jlr - (i <-> j)
        return half_quad(i, j, k, l) - half_quad(j, i, k, l)

    entries = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    paired = HbarSeries.zero(N)
                    for m in range(n):
                        paired = paired + star_mul(
                            C[i][j][k][m], g.entries[m][l], star
                        )
                    q = quad(i, j, k, l)
                    via_gamma = (
                        conn.low[j][k][l].partial(i)
                        - conn.low[i][k][l].partial(j)
                        + q
                    )
                    via_gamma_t = (
                        conn.low_t[i][l][k].partial(j)
                        - conn.low_t[j][l][k].partial(i)
                        + q
                    )
                    if not (paired - via_gamma).is_zero() or not (
                        paired - via_gamma_t
                    ).is_zero():
                        raise InternalDisagreement(
                            f"Riemann formulas disagree at ({l},{k},{i},{j})"
                        )
                    entries[l][k][i][j] = paired

    # right-connection curvature must equal the left one
    for l in range(n):
        for i in range(n):
            for j in range(n):
                ct = curvature_operator_components(conn, star, i, j, l, right=True)
                for k in range(n):
                    acc = HbarSeries.zero(N)
                    for m in range(n):
                        acc = acc + star_mul(g.entries[k][m], ct[m], star)
                    if not (entries[l][k][i][j] + acc).is_zero():
                        raise InternalDisagreement(
                            f"right curvature differs at ({l},{k},{i},{j})"
                        )

    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if not (entries[l][k][i][j] + entries[l][k][j][i]).is_zero():
                        raise InternalDisagreement(
                            f"R is not antisymmetric in its last two indices "
                            f"at ({l},{k},{i},{j})"
                        )

    return RiemannField(entries, C)


@dataclass(frozen=True)
class RicciBundle:
    ricci_low: list  # R_kj
    theta_low: list  # Theta_il
    ricci_up: list  # R^p_j indexed [p][j]
    theta_up: list  # Theta^p_i indexed [p][i]
    scalar: HbarSeries


def ricci_bundle(g: NCMetric, ginv: InverseMetric, riem: RiemannField) -> RicciBundle:
    """Both Ricci families, their raised forms and the common scalar trace."""
    n = g.dim
    N = g.truncation
    star = g.star
    R = riem.entries

    ricci_low = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
    theta_low = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for j in range(n):
            acc = HbarSeries.zero(N)
            for l in range(n):
                for i in range(n):
                    acc = acc + star_mul(R[l][k][i][j], ginv.entries[l][i], star)
            ricci_low[k][j] = acc
    for i in range(n):
        for l in range(n):
            acc = HbarSeries.zero(N)
            for j in range(n):
                for k in range(n):
                    acc = acc + star_mul(ginv.entries[j][k], R[l][k][i][j], star)
            theta_low[i][l] = acc

    ricci_up = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
    theta_up = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
    for p in range(n):
        for j in range(n):
            acc = HbarSeries.zero(N)
            for k in range(n):
                acc = acc + star_mul(ginv.entries[p][k], ricci_low[k][j], star)
            ricci_up[p][j] = acc
        for i in range(n):
            acc = HbarSeries.zero(N)
            for l in range(n):
                acc = acc + star_mul(theta_low[i][l], ginv.entries[l][p], star)
            theta_up[p][i] = acc

    trace_r = HbarSeries.zero(N)
    trace_t = HbarSeries.zero(N)
    for j in range(n):
        trace_r = trace_r + ricci_up[j][j]
        trace_t = trace_t + theta_up[j][j]
    if not (trace_r - trace_t).is_zero():
        raise InternalDisagreement("the two Ricci traces give different scalars")

    return RicciBundle(ricci_low, theta_low, ricci_up, theta_up, trace_r)


@dataclass(frozen=True)
class CurvatureDerivative:
    entries: list  # dR[s][l][k][i][j]
    vectors: list  # component vectors D[s][i][j][k][m] of (nabla_s R)_{E_i E_j} E_k
    ricci_up: list  # nabla_s R^p_j indexed [s][p][j]
    theta_up: list  # nabla_s Theta^p_i indexed [s][p][i]
    scalar: list  # nabla_s R indexed [s]


def curvature_covariant_derivative(
    g: NCMetric,
    ginv: InverseMetric,
    conn: ConnectionCoefficients,
    riem: RiemannField,
) -> CurvatureDerivative:
    """All covariant derivatives nabla_s of the curvature and contractions.

    The slot corrections extract the left factor of nabla_s E_i through the
    basis-slot linearity rule, which is the only well-defined extension.
    """
    n = g.dim
    N = g.truncation
    star = g.star
    C = riem.operator_components

    vectors = []
    entries = []
    for s in range(n):
        vec_s = [[[None] * n for _ in range(n)] for _ in range(n)]
        ent_s = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    d = covariant_derivative_vector(conn, star, C[i][j][k], s)
                    for m in range(n):
                        corr = [HbarSeries.zero(N) for _ in range(n)]
                        for t in range(n):
                            corr[t] = (
                                star_mul(conn.up[s][i][m], C[m][j][k][t], star)
                                + star_mul(conn.up[s][j][m], C[i][m][k][t], star)
                                + star_mul(conn.up[s][k][m], C[i][j][m][t], star)
                            )
                        d = [a - b for a, b in zip(d, corr)]
                    vec_s[i][j][k] = d
                    for l in range(n):
                        acc = HbarSeries.zero(N)
                        for m in range(n):
                            acc = acc + star_mul(d[m], g.entries[m][l], star)
                        ent_s[l][k][i][j] = acc
        vectors.append(vec_s)
        entries.append(ent_s)

    ricci_up = []
    theta_up = []
    scalar = []
    for s in range(n):
        r_s = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        t_s = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        sc = HbarSeries.zero(N)
        for p in range(n):
            for j in range(n):
                acc = HbarSeries.zero(N)
                for k in range(n):
                    for l in range(n):
                        for i in range(n):
                            mid = star_mul(
                                ginv.entries[p][k], entries[s][l][k][i][j], star
                            )
                            acc = acc + star_mul(mid, ginv.entries[l][i], star)
                r_s[p][j] = acc
            for i in range(n):
                acc = HbarSeries.zero(N)
                for j in range(n):
                    for k in range(n):
                        for l in range(n):
                            mid = star_mul(
                                ginv.entries[j][k], entries[s][l][k][i][j], star
                            )
                            acc = acc + star_mul(mid, ginv.entries[l][p], star)
                t_s[p][i] = acc
        for j in range(n):
            sc = sc + r_s[j][j]
        ricci_up.append(r_s)
        theta_up.append(t_s)
        scalar.append(sc)

    return CurvatureDerivative(entries, vectors, ricci_up, theta_up, scalar)


def first_bianchi_check(
    conn: ConnectionCoefficients, star: StarProduct
) -> CheckResult:
    """Cyclic sum of the curvature operator over the basis slots vanishes."""
    name = "first-bianchi"
    n = conn.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a = curvature_operator_components(conn, star, i, j, k)
                b = curvature_operator_components(conn, star, j, k, i)
                c = curvature_operator_components(conn, star, k, i, j)
                for m in range(n):
                    if not (a[m] + b[m] + c[m]).is_zero():
                        return CheckResult.fail(
                            name, f"cyclic sum nonzero at (i,j,k,m)=({i},{j},{k},{m})",
                            (i, j, k, m),
                        )
    return CheckResult.ok(name)


def second_bianchi_check(deriv: CurvatureDerivative) -> CheckResult:
    """Cyclic sum of covariant curvature derivatives vanishes."""
    name = "second-bianchi"
    n = len(deriv.vectors)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for p in range(n):
                    a = deriv.vectors[i][j][k][p]
                    b = deriv.vectors[j][k][i][p]
                    c = deriv.vectors[k][i][j][p]
                    for m in range(n):
                        if not (a[m] + b[m] + c[m]).is_zero():
                            return CheckResult.fail(
                                name,
                                f"cyclic sum nonzero at ({i},{j},{k},{p},{m})",
                                (i, j, k, p, m),
                            )
    return CheckResult.ok(name)


def contracted_bianchi_check(deriv: CurvatureDerivative) -> CheckResult:
    """nabla_i R^i_j + nabla_i Theta^i_j - nabla_j R = 0 for each j."""
    name = "contracted-bianchi"
    n = len(deriv.scalar)
    N = deriv.scalar[0].truncation
    for j in range(n):
        acc = HbarSeries.zero(N)
        for i in range(n):
            acc = acc + deriv.ricci_up[i][i][j] + deriv.theta_up[i][i][j]
        acc = acc - deriv.scalar[j]
        if not acc.is_zero():
            return CheckResult.fail(name, f"contracted identity fails at j={j}", j)
    return CheckResult.ok(name)


@dataclass(frozen=True)
class RicciEquivalenceReport:
    hypotheses: CheckResult
    riemann_parity: CheckResult
    ricci_equivalence: CheckResult

    @property
    def all_pass(self) -> bool:
        return (
            self.hypotheses.passed
            and self.riemann_parity.passed
            and self.ricci_equivalence.passed
        )


def ricci_equivalence_check(
    g: NCMetric,
    ups: ChiralCoefficients,
    riem: RiemannField,
    bundle: RicciBundle,
) -> RicciEquivalenceReport:
    """Three independent exact checks around the Ricci-equivalence theorem.

    The hypotheses (metric transpose parity and vanishing even-order chiral
    coefficients) are reported, not assumed; the curvature parity and the
    Ricci equivalence relations are tested regardless, so counterexamples
    show exactly which layer breaks.
    """
    n = g.dim
    N = g.truncation

    hyp_detail = []
    hyp_ok = check_metric_parity(g)
    if not hyp_ok:
        hyp_detail.append("metric transpose parity fails")
    ups_ok = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for q in range(0, N + 1, 2):
                    if not ups[i, j, k].coeffs[q].is_zero():
                        ups_ok = False
    if not ups_ok:
        hyp_detail.append("even-order chiral coefficients do not vanish")
    hypotheses = (
        CheckResult.ok("equivalence-hypotheses")
        if hyp_ok and ups_ok
        else CheckResult.fail("equivalence-hypotheses", "; ".join(hyp_detail))
    )

    parity = CheckResult.ok("riemann-parity")
    done = False
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    for q in range(N + 1):
                        sign = -1 if q % 2 == 0 else 1
                        a = riem.entries[l][k][i][j].coeffs[q]
                        b = riem.entries[k][l][i][j].coeffs[q]
                        if not (a - b.scale(sign)).is_zero():
                            parity = CheckResult.fail(
                                "riemann-parity",
                                f"first-pair parity fails at ({l},{k},{i},{j}), hbar^{q}",
                                (l, k, i, j, q),
                            )
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                break
        if done:
            break

    equiv = CheckResult.ok("ricci-equivalence")
    for i in range(n):
        for j in range(n):
            for q in range(N + 1):
                sign = 1 if q % 2 == 0 else -1
                low_ok = (
                    bundle.ricci_low[i][j].coeffs[q]
                    - bundle.theta_low[j][i].coeffs[q].scale(sign)
                ).is_zero()
                up_ok = (
                    bundle.ricci_up[i][j].coeffs[q]
                    - bundle.theta_up[i][j].coeffs[q].scale(sign)
                ).is_zero()
                if not (low_ok and up_ok):
                    equiv = CheckResult.fail(
                        "ricci-equivalence",
                        f"equivalence fails at ({i},{j}), hbar^{q}",
                        (i, j, q),
                    )
                    break
            if not equiv.passed:
                break
        if not equiv.passed:
            break

    return RicciEquivalenceReport(hypotheses, parity, equiv)
