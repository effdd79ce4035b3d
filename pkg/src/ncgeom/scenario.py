"""Declarative scenario execution: parse, build the pipeline, run checks.

A scenario is one JSON document holding exact rationals as "p/q" strings.
The pipeline assembles metric, inverse, connection and curvature lazily so
cheap scenarios never pay for the expensive stages, and every requested
check contributes uniform result records to a deterministic report.
"""

from __future__ import annotations

import json
import os
import random
from fractions import Fraction
from typing import Optional, Sequence

from .connection import (
    ChiralCoefficients,
    canonical_connection,
    check_chirality_and_torsion,
    check_compatibility,
    check_connection_parity,
    check_metric_parallel,
)
from .curvature import (
    contracted_bianchi_check,
    curvature_covariant_derivative,
    first_bianchi_check,
    ricci_bundle,
    ricci_equivalence_check,
    riemann,
    second_bianchi_check,
)
from .embedding import (
    IsometricEmbedding,
    SphericalEmbeddingSpec,
    embedding_geometry,
    spherical_embedding,
    spherical_fluctuation,
    spherical_theta,
)
from .errors import NCGeomError, ParseError, ValidationError
from .metric import (
    NCMetric,
    check_inverse_parity,
    check_invertible,
    check_metric_parity,
    star_inverse,
)
from .report import CheckResult
from .scalars import Jet, Scalar, coordinate_jet, jet_of_elementary, rat, rat_str
from .series import HbarSeries
from .star import (
    BidifferentialOperator,
    GeneralStarProduct,
    MoyalProduct,
    ThetaMatrix,
    check_associativity,
    check_leibniz,
    star_mul_scalars,
)
from .trig import TrigAnchor, angle_jet, random_unit_pair, series_match_to_budget, verify_trig_identities

__all__ = [
    "JET_ORDER_ENV",
    "default_jet_order",
    "load_scenario",
    "run_scenario",
    "verify_appendix",
    "report_to_markdown",
    "available_checks",
]

JET_ORDER_ENV = "NCGEOM_JET_ORDER"


def default_jet_order(truncation: int) -> int:
    """Worst-case derivative budget for the deepest pipeline, plus margin."""
    return 5 * truncation + 8


def _resolve_jet_order(doc: dict, override: Optional[int]) -> int:
    if override is not None:
        return override
    if "jet_order" in doc:
        return int(doc["jet_order"])
    env = os.environ.get(JET_ORDER_ENV)
    if env is not None:
        return int(env)
    return default_jet_order(int(doc["truncation"]))


def load_scenario(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a JSON object")
    for key in ("name", "chart", "truncation", "metric", "checks"):
        if key not in doc:
            raise ParseError(f"scenario is missing required key {key!r}")
    return doc


def _series_from_strings(values: Sequence, truncation: int) -> HbarSeries:
    coeffs = [rat(str(v)) for v in values]
    if len(coeffs) > truncation + 1:
        coeffs = coeffs[: truncation + 1]
    coeffs += [Fraction(0)] * (truncation + 1 - len(coeffs))
    return HbarSeries(coeffs)


def _build_theta(doc: dict, dim: int) -> ThetaMatrix:
    spec = doc.get("theta")
    if spec is None:
        return ThetaMatrix.zero(dim)
    if "matrix" in spec:
        return ThetaMatrix([[rat(str(x)) for x in row] for row in spec["matrix"]])
    if "lambda" in spec:
        pair = spec.get("pair", [1, 2])
        i, j = int(pair[0]) - 1, int(pair[1]) - 1
        return ThetaMatrix.single_pair(dim, i, j, rat(str(spec["lambda"])))
    raise ParseError("theta needs either a matrix or a lambda/pair shorthand")


def _build_star(doc: dict, theta: ThetaMatrix, dim: int):
    spec = doc.get("star", {"type": "moyal"})
    if spec.get("type", "moyal") == "moyal":
        return MoyalProduct(theta)
    if spec["type"] == "general":
        ops = {}
        for entry in spec["operators"]:
            q = int(entry["order"])
            terms = [
                (rat(str(t["coeff"])), tuple(t["left"]), tuple(t["right"]))
                for t in entry["terms"]
            ]
            ops[q] = BidifferentialOperator(dim, terms)
        return GeneralStarProduct(dim, ops)
    raise ParseError(f"unknown star product type {spec['type']!r}")


def _build_component(desc: dict, base_point, order: int) -> Scalar:
    kind = desc["kind"]
    if kind == "coordinate":
        return Scalar(coordinate_jet(int(desc["index"]) - 1, base_point, order))
    if kind == "constant":
        return Scalar(
            Jet.constant(rat(str(desc["value"])), base_point, order)
        )
    if kind == "polynomial":
        return Scalar(
            jet_of_elementary(
                "polynomial",
                [rat(str(w)) for w in desc["weights"]],
                rat(str(desc.get("shift", "0"))),
                base_point,
                order,
                poly_coeffs=[rat(str(c)) for c in desc["coeffs"]],
            )
        )
    if kind == "trig_product":
        jet = None
        if "radial_table" in desc:
            n = len(tuple(base_point))
            weights = [0] * n
            weights[0] = 1
            table = [rat(str(x)) for x in desc["radial_table"]]
            table += [Fraction(0)] * max(0, order + 1 - len(table))
            jet = jet_of_elementary(
                "derivative_table", weights, 0, base_point, order, table=table
            )
        for factor in desc["factors"]:
            anchor = TrigAnchor(str(factor["anchor"][0]), str(factor["anchor"][1]))
            f = angle_jet(
                factor["fn"], int(factor["coord"]) - 1, anchor, base_point, order
            )
            jet = f if jet is None else jet * f
        return Scalar(jet)
    if kind == "sum":
        acc = None
        for term in desc["terms"]:
            s = _build_component(term, base_point, order)
            acc = s if acc is None else acc + s
        return acc
    raise ParseError(f"unknown embedding component kind {kind!r}")


class Pipeline:
    """Lazily materialized geometry for one scenario."""

    def __init__(self, doc: dict, jet_order: Optional[int] = None):
        self.doc = doc
        self.name = doc["name"]
        self.n = int(doc["chart"]["dim"])
        self.N = int(doc["truncation"])
        self.jet_order = _resolve_jet_order(doc, jet_order)
        self.seed = int(doc.get("seed", 0))
        self.base_point = tuple(
            rat(str(b)) for b in doc.get("base_point", ["0"] * self.n)
        )
        if len(self.base_point) != self.n:
            raise ValidationError("base point dimension does not match the chart")
        self.theta = _build_theta(doc, self.n)
        self.star = _build_star(doc, self.theta, self.n)
        self._cache: dict = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    # -- metric stage -----------------------------------------------------

    @property
    def metric_source(self) -> str:
        return self.doc["metric"]["source"]

    @property
    def spherical_spec(self) -> SphericalEmbeddingSpec:
        def build():
            m = self.doc["metric"]
            return SphericalEmbeddingSpec(
                n=self.n,
                m=int(m["m"]),
                p=int(m["p"]),
                l=int(m["l"]),
                lam=rat(str(m["lambda"])),
                radial_tables=[[rat(str(x)) for x in t] for t in m["radial_tables"]],
                anchors=[TrigAnchor(str(a[0]), str(a[1])) for a in m["anchors"]],
                base_point=self.base_point,
            )
        return self._get("spherical_spec", build)

    @property
    def embedding(self) -> IsometricEmbedding:
        def build():
            src = self.metric_source
            if src == "embedding":
                m = self.doc["metric"]
                comps = [
                    _build_component(d, self.base_point, self.jet_order)
                    for d in m["components"]
                ]
                sig = m.get("signature", [1] * len(comps))
                return IsometricEmbedding(comps, sig, self.n)
            if src == "spherical":
                return spherical_embedding(self.spherical_spec, self.jet_order)
            raise ValidationError(f"metric source {src!r} has no embedding")
        return self._get("embedding", build)

    @property
    def spherical_results(self):
        def build():
            spec = self.spherical_spec
            # star for the spherical family is fixed by the spec
            g, emb, results = spherical_fluctuation(spec, self.N, self.jet_order)
            return g, emb, results
        return self._get("spherical", build)

    @property
    def geometry(self):
        def build():
            src = self.metric_source
            if src == "constant_series":
                entries = [
                    [
                        _series_from_strings(cell, self.N)
                        for cell in row
                    ]
                    for row in self.doc["metric"]["entries"]
                ]
                g = NCMetric(entries, self.star)
                ginv = star_inverse(g)
                ups = self._explicit_chiral()
                conn = canonical_connection(g, ginv, ups)
                return g, ginv, conn, ups
            if src == "spherical":
                g, emb, _ = self.spherical_results
                star = MoyalProduct(spherical_theta(self.spherical_spec))
                geo = embedding_geometry(emb, star, self.N)
                return geo.metric, geo.inverse, geo.connection, geo.chiral
            if src == "embedding":
                geo = embedding_geometry(self.embedding, self.star, self.N)
                return geo.metric, geo.inverse, geo.connection, geo.chiral
            raise ValidationError(f"unknown metric source {src!r}")
        return self._get("geometry", build)

    def _explicit_chiral(self) -> ChiralCoefficients:
        spec = self.doc.get("chiral", {"source": "zero"})
        src = spec.get("source", "zero")
        if src == "zero":
            return ChiralCoefficients.zero(self.n, self.N)
        if src == "explicit":
            cube = [
                [[HbarSeries.zero(self.N) for _ in range(self.n)] for _ in range(self.n)]
                for _ in range(self.n)
            ]
            for entry in spec["entries"]:
                i, j, k = (int(x) - 1 for x in entry["index"])
                cube[i][j][k] = _series_from_strings(entry["series"], self.N)
            return ChiralCoefficients(cube)
        raise ParseError(f"unknown chiral source {src!r} for this metric source")

    @property
    def g(self):
        return self.geometry[0]

    @property
    def ginv(self):
        return self.geometry[1]

    @property
    def conn(self):
        return self.geometry[2]

    @property
    def ups(self):
        return self.geometry[3]

    @property
    def riem(self):
        return self._get("riem", lambda: riemann(self.g, self.ginv, self.conn))

    @property
    def ricci(self):
        return self._get("ricci", lambda: ricci_bundle(self.g, self.ginv, self.riem))

    @property
    def deriv(self):
        return self._get(
            "deriv",
            lambda: curvature_covariant_derivative(self.g, self.ginv, self.conn, self.riem),
        )

    # -- sample generation for randomized checks --------------------------

    def random_jets(self, count: int):
        rng = random.Random(self.seed)
        jets = []
        for _ in range(count):
            coeffs = {}
            for _ in range(4):
                alpha = tuple(rng.randint(0, 2) for _ in range(self.n))
                if sum(alpha) <= self.jet_order:
                    coeffs[alpha] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            jets.append(Scalar(Jet(self.base_point, self.jet_order, coeffs)))
        return jets


# -- individual checks ----------------------------------------------------


def _check_invertible(p: Pipeline):
    ok = check_invertible(p.g)
    name = "invertible"
    return [CheckResult.ok(name) if ok else CheckResult.fail(name, "order-0 metric singular at base")]


def _check_metric_parity(p: Pipeline):
    ok = check_metric_parity(p.g)
    name = "metric-parity"
    return [CheckResult.ok(name) if ok else CheckResult.fail(name, "transpose-parity violated")]


def _check_inverse_parity(p: Pipeline):
    name = "inverse-parity"
    if not check_metric_parity(p.g):
        return [CheckResult.skipped(name, "metric itself violates transpose parity")]
    ok = check_inverse_parity(p.ginv)
    return [CheckResult.ok(name) if ok else CheckResult.fail(name, "inverse breaks transpose parity")]


def _check_coordinate_commutator(p: Pipeline):
    name = "coordinate-commutator"
    for i in range(p.n):
        for j in range(p.n):
            xi = Scalar(coordinate_jet(i, p.base_point, p.jet_order))
            xj = Scalar(coordinate_jet(j, p.base_point, p.jet_order))
            comm = star_mul_scalars(xi, xj, p.star, p.N) - star_mul_scalars(
                xj, xi, p.star, p.N
            )
            expected = HbarSeries.monomial(
                Scalar(p.theta.entries[i][j] * 2), 1, p.N
            ) if isinstance(p.star, MoyalProduct) else None
            if expected is None:
                return [CheckResult.skipped(name, "only defined for the Moyal product")]
            if not series_match_to_budget(comm, expected):
                return [
                    CheckResult.fail(name, f"commutator of x^{i+1}, x^{j+1} wrong", (i, j))
                ]
    return [CheckResult.ok(name)]


def _check_leibniz(p: Pipeline):
    jets = p.random_jets(20)
    pairs = list(zip(jets[::2], jets[1::2]))
    return [check_leibniz(p.star, pairs, p.N)]


def _check_associativity(p: Pipeline):
    jets = p.random_jets(30)
    triples = list(zip(jets[::3], jets[1::3], jets[2::3]))
    return [check_associativity(p.star, triples, p.N)]


def _check_compatibility(p: Pipeline):
    return [check_compatibility(p.g, p.conn)]


def _check_chirality(p: Pipeline):
    return [check_chirality_and_torsion(p.conn, p.ups)]


def _check_parallel(p: Pipeline):
    return [check_metric_parallel(p.g, p.ginv, p.conn)]


def _check_conn_parity(p: Pipeline):
    return [check_connection_parity(p.conn, p.g, p.ups)]


def _check_first_bianchi(p: Pipeline):
    return [first_bianchi_check(p.conn, p.g.star)]


def _check_second_bianchi(p: Pipeline):
    return [second_bianchi_check(p.deriv)]


def _check_contracted_bianchi(p: Pipeline):
    return [contracted_bianchi_check(p.deriv)]


def _check_ricci_equivalence(p: Pipeline):
    rep = ricci_equivalence_check(p.g, p.ups, p.riem, p.ricci)
    return [rep.hypotheses, rep.riemann_parity, rep.ricci_equivalence]


def _check_spherical(p: Pipeline):
    if p.metric_source != "spherical":
        return [CheckResult.skipped("spherical-closed-form", "not a spherical scenario")]
    _, _, results = p.spherical_results
    return list(results)


def _lookup_series(p: Pipeline, target: str, key: str) -> Optional[HbarSeries]:
    idx = tuple(int(x) - 1 for x in key.split(","))
    if target == "inverse":
        return p.ginv.entries[idx[0]][idx[1]]
    if target == "metric":
        return p.g.entries[idx[0]][idx[1]]
    if target == "connection":
        return p.conn.low[idx[0]][idx[1]][idx[2]]
    if target == "connection_right":
        return p.conn.low_t[idx[0]][idx[1]][idx[2]]
    if target == "riemann":
        return p.riem.entries[idx[0]][idx[1]][idx[2]][idx[3]]
    if target == "ricci":
        return p.ricci.ricci_low[idx[0]][idx[1]]
    if target == "theta_ricci":
        return p.ricci.theta_low[idx[0]][idx[1]]
    if target == "ricci_up":
        return p.ricci.ricci_up[idx[0]][idx[1]]
    if target == "theta_up":
        return p.ricci.theta_up[idx[0]][idx[1]]
    return None


def _check_expected_values(p: Pipeline):
    name = "expected-values"
    expected = p.doc.get("expected")
    if not expected:
        return [CheckResult.skipped(name, "scenario declares no expected values")]
    checked = 0
    for target, table in expected.items():
        if target == "scalar":
            want = _series_from_strings(table, p.N)
            if not series_match_to_budget(p.ricci.scalar, want):
                return [CheckResult.fail(name, "scalar curvature mismatch", "scalar")]
            checked += 1
            continue
        for key, values in table.items():
            got = _lookup_series(p, target, key)
            if got is None:
                return [CheckResult.fail(name, f"unknown expected target {target!r}")]
            want = _series_from_strings(values, p.N)
            if not series_match_to_budget(got, want):
                return [
                    CheckResult.fail(
                        name,
                        f"{target}[{key}] = {got.render()} differs from {want.render()}",
                        (target, key),
                    )
                ]
            checked += 1
    return [CheckResult.ok(name, f"{checked} values match exactly")]


def _quasi_context(p: Pipeline):
    from .quasi import quasi_connection, star_curvature_bundle, star_metric_from_embedding

    def build():
        emb = p.embedding if p.metric_source == "embedding" else p.spherical_results[1]
        star = p.star if p.metric_source == "embedding" else MoyalProduct(
            spherical_theta(p.spherical_spec)
        )
        gq, ginvq = star_metric_from_embedding(emb, star, p.N)
        qconn = quasi_connection(emb, gq, ginvq)
        bundle = star_curvature_bundle(emb, gq, ginvq, qconn)
        return emb, gq, ginvq, qconn, bundle

    return p._get("quasi", build)


def _check_quasi_crosscheck(p: Pipeline):
    name = "quasi-crosscheck"
    if p.metric_source not in ("embedding", "spherical"):
        return [CheckResult.skipped(name, "requires an embedding-backed metric")]
    if not isinstance(p.star, MoyalProduct):
        return [CheckResult.skipped(name, "cross-check is against the Moyal pipeline")]
    _, gq, ginvq, qconn, bundle = _quasi_context(p)
    n = p.n
    for i in range(n):
        for j in range(n):
            if not series_match_to_budget(gq.entries[i][j], p.g.entries[i][j]):
                return [CheckResult.fail(name, f"metric mismatch at ({i},{j})")]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not series_match_to_budget(qconn.up[i][j][k], p.conn.up[i][j][k]):
                    return [CheckResult.fail(name, f"left coefficients differ at ({i},{j},{k})")]
                if not series_match_to_budget(qconn.up_t[i][j][k], p.conn.up_t[i][j][k]):
                    return [CheckResult.fail(name, f"right coefficients differ at ({i},{j},{k})")]
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    want = p.riem.entries[l][k][i][j]
                    if not series_match_to_budget(bundle.riemann_left[l][k][i][j], want):
                        return [CheckResult.fail(name, f"left curvature differs at ({l},{k},{i},{j})")]
                    if not series_match_to_budget(bundle.riemann_right[l][k][i][j], want):
                        return [CheckResult.fail(name, f"right curvature differs at ({l},{k},{i},{j})")]
    pairs = [
        (bundle.ricci_left_low, p.ricci.ricci_low),
        (bundle.ricci_right_low, p.ricci.ricci_low),
        (bundle.theta_left_low, p.ricci.theta_low),
        (bundle.theta_right_low, p.ricci.theta_low),
        (bundle.ricci_left_up, p.ricci.ricci_up),
        (bundle.ricci_right_up, p.ricci.ricci_up),
        (bundle.theta_left_up, p.ricci.theta_up),
        (bundle.theta_right_up, p.ricci.theta_up),
    ]
    for got, want in pairs:
        for i in range(n):
            for j in range(n):
                if not series_match_to_budget(got[i][j], want[i][j]):
                    return [CheckResult.fail(name, f"a Ricci array differs at ({i},{j})")]
    if not series_match_to_budget(bundle.scalar_left, p.ricci.scalar):
        return [CheckResult.fail(name, "left scalar curvature differs")]
    if not series_match_to_budget(bundle.scalar_right, p.ricci.scalar):
        return [CheckResult.fail(name, "right scalar curvature differs")]
    return [CheckResult.ok(name, "all quasi quantities agree with the canonical pipeline")]


def _check_first_bianchi_star(p: Pipeline):
    from .quasi import first_bianchi_star_check

    if p.metric_source not in ("embedding", "spherical"):
        return [CheckResult.skipped("first-bianchi-star", "requires an embedding-backed metric")]
    _, _, _, _, bundle = _quasi_context(p)
    return [first_bianchi_star_check(bundle)]


CHECKS = {
    "invertible": _check_invertible,
    "metric-parity": _check_metric_parity,
    "inverse-parity": _check_inverse_parity,
    "coordinate-commutator": _check_coordinate_commutator,
    "leibniz": _check_leibniz,
    "associativity": _check_associativity,
    "compatibility": _check_compatibility,
    "chirality-torsion": _check_chirality,
    "metric-parallel": _check_parallel,
    "connection-parity": _check_conn_parity,
    "first-bianchi": _check_first_bianchi,
    "second-bianchi": _check_second_bianchi,
    "contracted-bianchi": _check_contracted_bianchi,
    "ricci-equivalence": _check_ricci_equivalence,
    "spherical-closed-form": _check_spherical,
    "expected-values": _check_expected_values,
    "quasi-crosscheck": _check_quasi_crosscheck,
    "first-bianchi-star": _check_first_bianchi_star,
}


def available_checks() -> list[str]:
    return list(CHECKS)


def run_scenario(doc: dict, jet_order: Optional[int] = None) -> dict:
    for check in doc["checks"]:
        if check not in CHECKS:
            raise ValidationError(f"unknown check {check!r}")
    pipeline = Pipeline(doc, jet_order)
    expected_fail = set(doc.get("expected_fail", []))
    entries = []
    all_ok = True
    for check in doc["checks"]:
        try:
            results = CHECKS[check](pipeline)
        except NCGeomError as exc:
            results = [CheckResult.fail(check, f"{type(exc).__name__}: {exc}")]
        for res in results:
            status = res.status
            if res.name in expected_fail:
                if status == "fail":
                    status = "expected-fail"
                elif status == "pass":
                    status = "unexpected-pass"
            if status in ("fail", "unexpected-pass"):
                all_ok = False
            entries.append(
                {
                    "name": res.name,
                    "status": status,
                    "details": res.details,
                    "counterexample": None
                    if res.counterexample is None
                    else repr(res.counterexample),
                }
            )
    return {
        "scenario": doc["name"],
        "environment": {
            "truncation": pipeline.N,
            "jet_order": pipeline.jet_order,
            "seed": pipeline.seed,
        },
        "checks": entries,
        "all_ok": all_ok,
    }


def verify_appendix(
    order: int = 8, points: int = 5, seed: int = 42, jet_order: Optional[int] = None
) -> dict:
    """All sixteen trig product identities at several random rational anchors."""
    rng = random.Random(seed)
    if jet_order is None:
        env = os.environ.get(JET_ORDER_ENV)
        jet_order = int(env) if env is not None else order + 4
    entries = []
    all_ok = True
    for point in range(points):
        anchors = [random_unit_pair(rng), random_unit_pair(rng)]
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        results = verify_trig_identities(anchors, lam, order, jet_order)
        label = (
            f"anchors=({rat_str(anchors[0].s)},{rat_str(anchors[0].c)})/"
            f"({rat_str(anchors[1].s)},{rat_str(anchors[1].c)}), lambda={rat_str(lam)}"
        )
        for res in results:
            if not res.passed:
                all_ok = False
            entries.append(
                {
                    "name": f"point-{point + 1}/{res.name}",
                    "status": res.status,
                    "details": f"{label}; {res.details}",
                    "counterexample": None
                    if res.counterexample is None
                    else repr(res.counterexample),
                }
            )
    return {
        "scenario": "appendix-trig-identities",
        "environment": {"truncation": order, "jet_order": jet_order, "seed": seed},
        "checks": entries,
        "all_ok": all_ok,
    }


def report_to_markdown(report: dict) -> str:
    lines = [
        f"# Report: {report['scenario']}",
        "",
        f"truncation N = {report['environment']['truncation']}, "
        f"jet order = {report['environment']['jet_order']}, "
        f"seed = {report['environment']['seed']}",
        "",
        "| check | status | details |",
        "| --- | --- | --- |",
    ]
    for entry in report["checks"]:
        lines.append(
            f"| {entry['name']} | {entry['status']} | {entry['details'] or ''} |"
        )
    lines.append("")
    lines.append("overall: " + ("ok" if report["all_ok"] else "FAILED"))
    return "\n".join(lines) + "\n"
