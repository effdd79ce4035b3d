"""Quasi-connections and curvatures for general star products.

General star products lose the Leibniz rule, so covariant derivatives are
built by differentiating in the ambient space of an isometric embedding and
projecting back onto the tangential module.  Left and right curvatures are
no longer equal; eight Ricci arrays and two scalars result, and only the
first Bianchi identity survives.

For a general star product, associativity must be verified before any
geometry is computed; the constructions silently presuppose it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .embedding import IsometricEmbedding
from .errors import InternalDisagreement, ValidationError
from .metric import InverseMetric, NCMetric, star_inverse
from .report import CheckResult
from .scalars import Scalar
from .series import HbarSeries
from .star import (
    GeneralStarProduct,
    StarProduct,
    check_associativity,
    star_mul,
    star_mul_scalars,
)

__all__ = [
    "ensure_associative",
    "star_metric_from_embedding",
    "eta_pairing",
    "sigma_tangential_coefficients",
    "tangential_remainder_check",
    "QuasiConnection",
    "quasi_connection",
    "StarCurvatureBundle",
    "star_curvature_bundle",
    "first_bianchi_star_check",
]

AmbientVector = Sequence[HbarSeries]


def ensure_associative(
    star: StarProduct, emb: IsometricEmbedding, truncation: int
) -> None:
    """Gate for general star products: verify associativity on the embedding.

    Samples are the embedding components and their first derivatives; a
    failure aborts before any geometric structure is built.
    """
    if not isinstance(star, GeneralStarProduct):
        return
    comps = list(emb.components)
    derivs = [c.partial(i) for c in comps for i in range(emb.dim)]
    pool = [c for c in comps + derivs if not c.is_zero()][:6]
    samples = [
        (a, b, c) for a in pool for b in pool for c in pool
    ]
    result = check_associativity(star, samples, truncation)
    if not result.passed:
        raise ValidationError(
            f"star product is not associative through order {truncation}: "
            f"{result.details}"
        )


def star_metric_from_embedding(
    emb: IsometricEmbedding, star: StarProduct, truncation: int
) -> tuple[NCMetric, InverseMetric]:
    """Embedding metric and its two-sided inverse under a general star."""
    ensure_associative(star, emb, truncation)
    n = emb.dim
    dX = [[x.partial(i) for x in emb.components] for i in range(n)]
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = HbarSeries.zero(truncation)
            for a, eta in enumerate(emb.signature):
                term = star_mul_scalars(dX[i][a], dX[j][a], star, truncation)
                acc = acc + (term if eta == 1 else -term)
            row.append(acc)
        entries.append(row)
    g = NCMetric(entries, star)
    return g, star_inverse(g)


def _lift(s: Scalar, truncation: int) -> HbarSeries:
    return HbarSeries.from_scalar(s, truncation)


def eta_pairing(
    Y: AmbientVector, Z: AmbientVector, signature, star: StarProduct
) -> HbarSeries:
    """Signature-weighted star pairing of two ambient vectors."""
    acc = None
    for eta, y, z in zip(signature, Y, Z):
        term = star_mul(y, z, star)
        term = term if eta == 1 else -term
        acc = term if acc is None else acc + term
    return acc


def sigma_tangential_coefficients(
    Y: AmbientVector,
    emb: IsometricEmbedding,
    ginv: InverseMetric,
    star: StarProduct,
    right: bool = False,
) -> list[HbarSeries]:
    """Left (or right) coefficients of the tangential part of Y.

    Left: y^i = (Y paired with d_jX) * ginv^{ji}; the right version puts
    the inverse on the left of the reversed pairing.
    """
    n = emb.dim
    truncation = Y[0].truncation
    dX = [
        [_lift(x.partial(j), truncation) for x in emb.components] for j in range(n)
    ]
    out = []
    for i in range(n):
        acc = HbarSeries.zero(truncation)
        for j in range(n):
            if right:
                pair = eta_pairing(dX[j], Y, emb.signature, star)
                acc = acc + star_mul(ginv.entries[i][j], pair, star)
            else:
                pair = eta_pairing(Y, dX[j], emb.signature, star)
                acc = acc + star_mul(pair, ginv.entries[j][i], star)
        out.append(acc)
    return out


def tangential_remainder_check(
    Y: AmbientVector,
    emb: IsometricEmbedding,
    ginv: InverseMetric,
    star: StarProduct,
    right: bool = False,
) -> CheckResult:
    """The non-tangential remainder must pair to zero with every d_jX."""
    name = "tangential-remainder"
    n = emb.dim
    truncation = Y[0].truncation
    coeffs = sigma_tangential_coefficients(Y, emb, ginv, star, right)
    dX = [
        [_lift(x.partial(j), truncation) for x in emb.components] for j in range(n)
    ]
    rem = list(Y)
    for i in range(n):
        for a in range(emb.ambient_dim):
            if right:
                rem[a] = rem[a] - star_mul(dX[i][a], coeffs[i], star)
            else:
                rem[a] = rem[a] - star_mul(coeffs[i], dX[i][a], star)
    for j in range(n):
        if right:
            pair = eta_pairing(dX[j], rem, emb.signature, star)
        else:
            pair = eta_pairing(rem, dX[j], emb.signature, star)
        if not pair.is_zero():
            return CheckResult.fail(
                name, f"remainder pairs nontrivially with direction {j}", j
            )
    return CheckResult.ok(name)


def _quasi_covariant(
    comps: Sequence[HbarSeries],
    i: int,
    emb: IsometricEmbedding,
    ginv: InverseMetric,
    star: StarProduct,
    right: bool,
) -> list[HbarSeries]:
    """Differentiate the ambient image of a vector, then project back.

    No Leibniz splitting happens here; the whole ambient vector is
    differentiated componentwise and re-projected, which is the only
    formulation valid for star products.
    """
    n = emb.dim
    truncation = comps[0].truncation
    dX = [
        [_lift(x.partial(j), truncation) for x in emb.components] for j in range(n)
    ]
    amb = []
    for a in range(emb.ambient_dim):
        acc = HbarSeries.zero(truncation)
        for k in range(n):
            if right:
                acc = acc + star_mul(dX[k][a], comps[k], star)
            else:
                acc = acc + star_mul(comps[k], dX[k][a], star)
        amb.append(acc)
    damb = [a.partial(i) for a in amb]
    return sigma_tangential_coefficients(damb, emb, ginv, star, right)


@dataclass(frozen=True)
class QuasiConnection:
    up: list  # left raised coefficients [i][j][k]
    up_t: list  # right raised coefficients [i][j][k]
    dim: int


def quasi_connection(
    emb: IsometricEmbedding,
    g: NCMetric,
    ginv: InverseMetric,
) -> QuasiConnection:
    """Raised quasi-connection coefficients by ambient projection.

    Left coefficients pair second derivatives with first derivatives and
    multiply the inverse on the right; the right family mirrors this.
    Torsion symmetry in the lower indices is asserted.
    """
    n = emb.dim
    star = g.star
    truncation = g.truncation
    up = [[[None] * n for _ in range(n)] for _ in range(n)]
    up_t = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ddX = [_lift(x.partial(i).partial(j), truncation) for x in emb.components]
            left = sigma_tangential_coefficients(ddX, emb, ginv, star, right=False)
            right = sigma_tangential_coefficients(ddX, emb, ginv, star, right=True)
            for k in range(n):
                up[i][j][k] = left[k]
                up_t[i][j][k] = right[k]
    for i in range(n):
        for j in range(i):
            for k in range(n):
                if not (up[i][j][k] - up[j][i][k]).is_zero() or not (
                    up_t[i][j][k] - up_t[j][i][k]
                ).is_zero():
                    raise InternalDisagreement(
                        f"quasi-connection has torsion at ({i},{j},{k})"
                    )
    return QuasiConnection(up, up_t, n)


def _quasi_curvature_components(
    qconn: QuasiConnection,
    emb: IsometricEmbedding,
    ginv: InverseMetric,
    star: StarProduct,
    i: int,
    j: int,
    k: int,
    right: bool,
):
    up = qconn.up_t if right else qconn.up
    n = qconn.dim
    first = [up[j][k][m] for m in range(n)]
    second = [up[i][k][m] for m in range(n)]
    v1 = _quasi_covariant(first, i, emb, ginv, star, right)
    v2 = _quasi_covariant(second, j, emb, ginv, star, right)
    return [a - b for a, b in zip(v1, v2)]


@dataclass(frozen=True)
class StarCurvatureBundle:
    riemann_left: list  # [l][k][i][j]
    riemann_right: list
    ricci_left_low: list  # R_kj
    theta_left_low: list  # Theta_il
    ricci_right_low: list
    theta_right_low: list
    ricci_left_up: list  # [p][j]
    theta_left_up: list  # [p][i]
    ricci_right_up: list
    theta_right_up: list
    scalar_left: HbarSeries
    scalar_right: HbarSeries
    operator_components_left: list  # [i][j][k][m]
    operator_components_right: list


def star_curvature_bundle(
    emb: IsometricEmbedding,
    g: NCMetric,
    ginv: InverseMetric,
    qconn: QuasiConnection,
) -> StarCurvatureBundle:
    """Both Riemann families, all eight Ricci arrays and both scalars.

    Left/right Riemann equality is deliberately not asserted; the trace
    identities within each side are.
    """
    n = qconn.dim
    N = g.truncation
    star = g.star

    CL = [
        [
            [
                _quasi_curvature_components(qconn, emb, ginv, star, i, j, k, False)
                for k in range(n)
            ]
            for j in range(n)
        ]
        for i in range(n)
    ]
    CR = [
        [
            [
                _quasi_curvature_components(qconn, emb, ginv, star, i, j, k, True)
                for k in range(n)
            ]
            for j in range(n)
        ]
        for i in range(n)
    ]

    RL = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    RR = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = HbarSeries.zero(N)
                    for m in range(n):
                        acc = acc + star_mul(CL[i][j][k][m], g.entries[m][l], star)
                    RL[l][k][i][j] = acc
                    acc = HbarSeries.zero(N)
                    for m in range(n):
                        acc = acc + star_mul(g.entries[k][m], CR[i][j][l][m], star)
                    RR[l][k][i][j] = -acc

    def contract(R):
        low_r = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        low_t = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        for k in range(n):
            for j in range(n):
                acc = HbarSeries.zero(N)
                for l in range(n):
                    for i in range(n):
                        acc = acc + star_mul(R[l][k][i][j], ginv.entries[l][i], star)
                low_r[k][j] = acc
        for i in range(n):
            for l in range(n):
                acc = HbarSeries.zero(N)
                for j in range(n):
                    for k in range(n):
                        acc = acc + star_mul(ginv.entries[j][k], R[l][k][i][j], star)
                low_t[i][l] = acc
        up_r = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        up_t = [[HbarSeries.zero(N) for _ in range(n)] for _ in range(n)]
        for p in range(n):
            for j in range(n):
                acc = HbarSeries.zero(N)
                for k in range(n):
                    acc = acc + star_mul(ginv.entries[p][k], low_r[k][j], star)
                up_r[p][j] = acc
            for i in range(n):
                acc = HbarSeries.zero(N)
                for l in range(n):
                    acc = acc + star_mul(low_t[i][l], ginv.entries[l][p], star)
                up_t[p][i] = acc
        tr_r = HbarSeries.zero(N)
        tr_t = HbarSeries.zero(N)
        for j in range(n):
            tr_r = tr_r + up_r[j][j]
            tr_t = tr_t + up_t[j][j]
        if not (tr_r - tr_t).is_zero():
            raise InternalDisagreement("the two trace contractions disagree")
        return low_r, low_t, up_r, up_t, tr_r

    ll, lt, lu, ltu, sl = contract(RL)
    rl, rt, ru, rtu, sr = contract(RR)
    return StarCurvatureBundle(
        RL, RR, ll, lt, rl, rt, lu, ltu, ru, rtu, sl, sr, CL, CR
    )


def first_bianchi_star_check(bundle: StarCurvatureBundle) -> CheckResult:
    """Cyclic sums of both curvature operators over basis slots vanish."""
    name = "first-bianchi-star"
    for tag, C in (("left", bundle.operator_components_left),
                   ("right", bundle.operator_components_right)):
        n = len(C)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for m in range(n):
                        s = C[i][j][k][m] + C[j][k][i][m] + C[k][i][j][m]
                        if not s.is_zero():
                            return CheckResult.fail(
                                name,
                                f"{tag} cyclic sum nonzero at ({i},{j},{k},{m})",
                                (tag, i, j, k, m),
                            )
    return CheckResult.ok(name)
