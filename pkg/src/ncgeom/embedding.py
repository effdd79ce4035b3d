"""Quantum fluctuations of metrics induced by isometric embeddings.

The metric entries are star products of the embedding's first derivatives,
so its order-0 part is the classical pullback metric and the higher orders
are the noncommutative corrections.  The spherically symmetric family with
a single noncommuting angle pair admits closed forms: products of radial
and angular jets with constant hyperbolic series, checked here against an
independent expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .connection import ChiralCoefficients, ConnectionCoefficients, canonical_connection
from .errors import InternalDisagreement, SpecViolation
from .metric import InverseMetric, NCMetric, star_inverse
from .report import CheckResult
from .scalars import Jet, RationalLike, Scalar, coordinate_jet, jet_of_elementary, rat
from .series import HbarSeries
from .star import StarProduct, ThetaMatrix, star_mul_scalars
from .trig import TrigAnchor, angle_jet, closed_form_oracle, series_match_to_budget

__all__ = [
    "IsometricEmbedding",
    "fluctuation_metric",
    "embedding_connection_tables",
    "EmbeddingGeometry",
    "embedding_geometry",
    "SphericalEmbeddingSpec",
    "spherical_theta",
    "spherical_embedding",
    "spherical_fluctuation",
]


class IsometricEmbedding:
    """Component functions X^alpha into flat space with diagonal signature."""

    __slots__ = ("components", "signature", "dim")

    def __init__(
        self,
        components: Sequence[Scalar],
        signature: Sequence[int],
        dim: int,
    ):
        comps = tuple(c if isinstance(c, Scalar) else Scalar(c) for c in components)
        sig = tuple(int(s) for s in signature)
        if len(sig) != len(comps):
            raise SpecViolation("signature length must match the component count")
        if any(s not in (-1, 1) for s in sig):
            raise SpecViolation("signature entries must be +1 or -1")
        if len(comps) < dim:
            raise SpecViolation("ambient dimension must be at least the chart dimension")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("IsometricEmbedding is immutable")

    @property
    def ambient_dim(self) -> int:
        return len(self.components)

    @staticmethod
    def identity(base_point: Sequence[RationalLike], order: int) -> "IsometricEmbedding":
        n = len(tuple(base_point))
        comps = [Scalar(coordinate_jet(i, base_point, order)) for i in range(n)]
        return IsometricEmbedding(comps, [1] * n, n)


def fluctuation_metric(
    emb: IsometricEmbedding, star: StarProduct, truncation: int
) -> NCMetric:
    """g_ij as the signature-weighted star products of first derivatives."""
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
    return NCMetric(entries, star)


def embedding_connection_tables(
    emb: IsometricEmbedding, star: StarProduct, truncation: int
):
    """Lowered left/right coefficients and chiral coefficients from X.

    Gamma_ijk pairs second derivatives with first derivatives on the left,
    the right family reverses the product, and the chiral coefficients are
    their difference.
    """
    n = emb.dim
    dX = [[x.partial(i) for x in emb.components] for i in range(n)]
    ddX = [[[x.partial(i).partial(j) for x in emb.components] for j in range(n)] for i in range(n)]
    low = [[[None] * n for _ in range(n)] for _ in range(n)]
    low_t = [[[None] * n for _ in range(n)] for _ in range(n)]
    ups = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                g_acc = HbarSeries.zero(truncation)
                t_acc = HbarSeries.zero(truncation)
                for a, eta in enumerate(emb.signature):
                    left = star_mul_scalars(ddX[i][j][a], dX[k][a], star, truncation)
                    right = star_mul_scalars(dX[k][a], ddX[i][j][a], star, truncation)
                    if eta == 1:
                        g_acc = g_acc + left
                        t_acc = t_acc + right
                    else:
                        g_acc = g_acc - left
                        t_acc = t_acc - right
                low[i][j][k] = g_acc
                low_t[i][j][k] = t_acc
                ups[i][j][k] = g_acc - t_acc
    return low, low_t, ChiralCoefficients(ups)


@dataclass(frozen=True)
class EmbeddingGeometry:
    metric: NCMetric
    inverse: InverseMetric
    connection: ConnectionCoefficients
    chiral: ChiralCoefficients


def embedding_geometry(
    emb: IsometricEmbedding, star: StarProduct, truncation: int
) -> EmbeddingGeometry:
    """Full canonical pipeline from an embedding, with a cross-derivation.

    The lowered connection coefficients are computed both from the metric's
    derivatives and from the embedding's second-derivative sums; the two
    must coincide within the shared derivative budget.
    """
    g = fluctuation_metric(emb, star, truncation)
    ginv = star_inverse(g)
    low, low_t, ups = embedding_connection_tables(emb, star, truncation)
    conn = canonical_connection(g, ginv, ups)
    n = emb.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not series_match_to_budget(conn.low[i][j][k], low[i][j][k]):
                    raise InternalDisagreement(
                        f"metric-derived and embedding-derived coefficients "
                        f"disagree at ({i},{j},{k})"
                    )
                if not series_match_to_budget(conn.low_t[i][j][k], low_t[i][j][k]):
                    raise InternalDisagreement(
                        f"right coefficients disagree at ({i},{j},{k})"
                    )
    return EmbeddingGeometry(g, ginv, conn, ups)


class SphericalEmbeddingSpec:
    """Spherically symmetric embedding with one noncommuting angle pair.

    Chart coordinates are (rho, angle_1, ..., angle_{n-1}).  Radial profiles
    come in as univariate derivative towers at the base radius; the two
    profiles feeding the noncommuting components must coincide.  The Moyal
    matrix has a single nonzero pair coupling coordinate 2 with coordinate
    l (1-based), with l at least 3.
    """

    __slots__ = ("n", "m", "p", "l", "lam", "radial_tables", "anchors", "base_point")

    def __init__(
        self,
        n: int,
        m: int,
        p: int,
        l: int,
        lam: RationalLike,
        radial_tables: Sequence[Sequence[RationalLike]],
        anchors: Sequence[TrigAnchor],
        base_point: Sequence[RationalLike],
    ):
        lam = rat(lam)
        if not 3 <= l <= n:
            raise SpecViolation(f"the noncommuting coordinate l={l} must lie in [3, {n}]")
        if lam == 0:
            raise SpecViolation("the deformation parameter must be nonzero")
        if m < n:
            raise SpecViolation("ambient dimension below chart dimension")
        if m - n + 1 <= p:
            raise SpecViolation(
                "the noncommuting components must carry positive signature (m - n + 1 > p)"
            )
        tables = tuple(tuple(rat(x) for x in t) for t in radial_tables)
        if len(tables) != m:
            raise SpecViolation(f"need {m} radial profiles, got {len(tables)}")
        if tables[m - n] != tables[m - n + 1]:
            raise SpecViolation(
                "the two noncommuting components must share one radial profile"
            )
        anchors = tuple(anchors)
        if len(anchors) != n - 1:
            raise SpecViolation(f"need {n - 1} angle anchors, got {len(anchors)}")
        base = tuple(rat(b) for b in base_point)
        if len(base) != n:
            raise SpecViolation("base point dimension mismatch")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "radial_tables", tables)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "base_point", base)

    def __setattr__(self, name, value):
        raise AttributeError("SphericalEmbeddingSpec is immutable")


def spherical_theta(spec: SphericalEmbeddingSpec) -> ThetaMatrix:
    return ThetaMatrix.single_pair(spec.n, 1, spec.l - 1, spec.lam)


def _radial_jet(table, base_point, order):
    n = len(tuple(base_point))
    weights = [0] * n
    weights[0] = 1
    tower = list(table) + [0] * max(0, order + 1 - len(table))
    return jet_of_elementary(
        "derivative_table", weights, 0, base_point, order, table=tower
    )


def spherical_embedding(spec: SphericalEmbeddingSpec, jet_order: int) -> IsometricEmbedding:
    """Build the component jets of the spherically symmetric embedding."""
    n, m = spec.n, spec.m
    base = spec.base_point

    def sin_j(t):  # angle index t in 1..n-1, coordinate t (0-based)
        return angle_jet("sin", t, spec.anchors[t - 1], base, jet_order)

    def cos_j(t):
        return angle_jet("cos", t, spec.anchors[t - 1], base, jet_order)

    comps = []
    for a in range(m - n):
        comps.append(Scalar(_radial_jet(spec.radial_tables[a], base, jet_order)))
    for t in range(1, n + 1):
        jet = _radial_jet(spec.radial_tables[m - n + t - 1], base, jet_order)
        for u in range(t, n):
            jet = jet * sin_j(u)
        if t >= 2:
            jet = jet * cos_j(t - 1)
        comps.append(Scalar(jet))
    signature = [-1] * spec.p + [1] * (m - spec.p)
    return IsometricEmbedding(comps, signature, n)


def _closed_form_terms(spec: SphericalEmbeddingSpec, jet_order: int):
    """Closed forms for the noncommuting block of every metric entry.

    Returns a map (i, j) 0-based -> list of (Scalar factor, hyperbolic kind)
    covering the full index square.
    """
    n, l = spec.n, spec.l
    base = spec.base_point
    a = l - 1  # the distinguished angle index

    sin_jets = {t: Scalar(angle_jet("sin", t, spec.anchors[t - 1], base, jet_order)) for t in range(1, n)}
    cos_jets = {t: Scalar(angle_jet("cos", t, spec.anchors[t - 1], base, jet_order)) for t in range(1, n)}
    f = Scalar(_radial_jet(spec.radial_tables[spec.m - n], base, jet_order))
    fp = Scalar(_radial_jet(spec.radial_tables[spec.m - n][1:], base, jet_order))
    sa, ca = sin_jets[a], cos_jets[a]

    def pad(excluded):
        # the first angle never appears in the closed forms
        acc = Scalar(1)
        for t in range(2, n):
            if t == a or t in excluded:
                continue
            acc = acc * sin_jets[t] * sin_jets[t]
        return acc

    def mixed(p):
        # p * (sin^2 cosh^2 - cos^2 sinh^2) of the distinguished angle
        return [(p * sa * sa, "cosh2"), (-(p * ca * ca), "sinh2")]

    def mixed_flipped(p):
        return [(p * ca * ca, "cosh2"), (-(p * sa * sa), "sinh2")]

    P = pad(set())
    terms = {}
    one_b = 0  # rho
    two_b = 1  # first angle coordinate
    l_b = l - 1  # the noncommuting partner coordinate

    terms[(one_b, one_b)] = mixed(fp * fp * P)
    t12 = [((f * fp * P * sa * ca).scale(2), "coshsinh")]
    terms[(one_b, two_b)] = t12
    terms[(two_b, one_b)] = [(-c, k) for c, k in t12]
    t1l = [(f * fp * P * sa * ca, "one_plus_2sinh2")]
    terms[(one_b, l_b)] = t1l
    terms[(l_b, one_b)] = t1l
    terms[(two_b, two_b)] = mixed(f * f * P)
    t2l = [(f * f * P * (sa * sa - ca * ca), "coshsinh")]
    terms[(two_b, l_b)] = t2l
    terms[(l_b, two_b)] = [(-c, k) for c, k in t2l]
    terms[(l_b, l_b)] = mixed_flipped(f * f * P)

    others = [k for k in range(3, n + 1) if k != l]  # 1-based chart indices
    for k in others:
        ak = k - 1
        kb = k - 1  # 0-based coordinate
        Q = pad({ak}) * sin_jets[ak] * cos_jets[ak]
        t1k = mixed(f * fp * Q)
        terms[(one_b, kb)] = t1k
        terms[(kb, one_b)] = t1k
        t2k = [((f * f * Q * sa * ca).scale(-2), "coshsinh")]
        terms[(two_b, kb)] = t2k
        terms[(kb, two_b)] = [(-c, kk) for c, kk in t2k]
        tlk = [(f * f * Q * sa * ca, "one_plus_2sinh2")]
        terms[(l_b, kb)] = tlk
        terms[(kb, l_b)] = tlk
        terms[(kb, kb)] = mixed(f * f * pad({ak}) * cos_jets[ak] * cos_jets[ak])
    for x in range(len(others)):
        for y in range(x + 1, len(others)):
            i_c, j_c = others[x], others[y]
            ai, aj = i_c - 1, j_c - 1
            p = (
                f * f * pad({ai, aj})
                * sin_jets[ai] * cos_jets[ai]
                * sin_jets[aj] * cos_jets[aj]
            )
            tij = mixed(p)
            terms[(i_c - 1, j_c - 1)] = tij
            terms[(j_c - 1, i_c - 1)] = tij
    return terms


def spherical_fluctuation(
    spec: SphericalEmbeddingSpec, truncation: int, jet_order: int
):
    """Metric of the spherical embedding plus its structural checks.

    Checks: the noncommuting component block of every entry matches the
    closed-form expansion; no entry depends on the first angle; the only
    antisymmetric pairs are those involving the first angle's coordinate.
    """
    from .star import MoyalProduct

    n = spec.n
    star = MoyalProduct(spherical_theta(spec))
    emb = spherical_embedding(spec, jet_order)
    g = fluctuation_metric(emb, star, truncation)

    a0 = spec.m - n  # 0-based index of the first noncommuting component
    dX = [[x.partial(i) for x in emb.components] for i in range(n)]
    oracle_terms = _closed_form_terms(spec, jet_order)
    closed = CheckResult.ok("spherical-closed-form")
    for i in range(n):
        for j in range(n):
            block = star_mul_scalars(dX[i][a0], dX[j][a0], star, truncation) + \
                star_mul_scalars(dX[i][a0 + 1], dX[j][a0 + 1], star, truncation)
            rhs = closed_form_oracle(oracle_terms[(i, j)], spec.lam, truncation)
            if not series_match_to_budget(block, rhs):
                closed = CheckResult.fail(
                    "spherical-closed-form",
                    f"noncommuting block differs from closed form at ({i},{j})",
                    (i, j),
                )
                break
        if not closed.passed:
            break

    indep = CheckResult.ok("spherical-angle-independence")
    for i in range(n):
        for j in range(n):
            if not g.entries[i][j].partial(1).is_zero():
                indep = CheckResult.fail(
                    "spherical-angle-independence",
                    f"entry ({i},{j}) depends on the first angle",
                    (i, j),
                )

    structure = CheckResult.ok("spherical-transpose-structure")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            lhs = g.entries[i][j]
            rhs = g.entries[j][i]
            if i == 1 or j == 1:
                ok = (lhs + rhs).is_zero()
            else:
                ok = (lhs - rhs).is_zero()
            if not ok:
                structure = CheckResult.fail(
                    "spherical-transpose-structure",
                    f"pair ({i},{j}) breaks the expected symmetry pattern",
                    (i, j),
                )
    return g, emb, [closed, indep, structure]
