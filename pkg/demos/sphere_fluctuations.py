"""Quantum fluctuations of the round sphere and the trace-equivalence law.

Embeds the unit sphere through exact trigonometric jets anchored at a
rational point, builds the fluctuation metric under a Moyal product,
and checks that the four Ricci traces collapse to one (the symmetric
embedding case where the equivalence theorem applies in full).

Run:  python3 demos/sphere_fluctuations.py
"""

from ncgeom import (
    IsometricEmbedding,
    MoyalProduct,
    Scalar,
    ThetaMatrix,
    TrigAnchor,
    angle_jet,
    embedding_geometry,
    ricci_bundle,
    ricci_equivalence_check,
    riemann,
)

N = 4
ORDER = 10
base = ("1/3", "1/5")
star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, "1/2"))

a1 = TrigAnchor("3/5", "4/5")
a2 = TrigAnchor("5/13", "12/13")
s1 = Scalar(angle_jet("sin", 0, a1, base, ORDER))
c1 = Scalar(angle_jet("cos", 0, a1, base, ORDER))
s2 = Scalar(angle_jet("sin", 1, a2, base, ORDER))
c2 = Scalar(angle_jet("cos", 1, a2, base, ORDER))
emb = IsometricEmbedding([s2 * c1, s2 * s1, c2], [1, 1, 1], 2)

geo = embedding_geometry(emb, star, N)
riem = riemann(geo.metric, geo.inverse, geo.connection)
bundle = ricci_bundle(geo.metric, geo.inverse, riem)

print("g_11:              ", geo.metric.entries[0][0].render())
print("g_12:              ", geo.metric.entries[0][1].render())
print("R_1212:            ", riem.entries[0][1][0][1].render())
print("Ricci_11:          ", bundle.ricci_low[0][0].render())
print("theta-Ricci_11:    ", bundle.theta_low[0][0].render())
print("scalar curvature:  ", bundle.scalar.render())

report = ricci_equivalence_check(geo.metric, geo.chiral, riem, bundle)
print()
print("hypotheses:        ", "pass" if report.hypotheses.passed else "fail")
print("riemann parity:    ", "pass" if report.riemann_parity.passed else "fail")
print("trace equivalence: ", "pass" if report.ricci_equivalence.passed else "fail")
