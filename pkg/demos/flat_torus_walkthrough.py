"""Walk through the constant-coefficient counterexample by hand.

Builds the diagonal geometric-series metric with a prescribed chiral
cube on a 2d Moyal chart, then prints the inverse, the connection, the
distinguished curvature entry and both Ricci traces.  Everything is an
exact rational series in hbar; compare the output against the values
baked into scenarios/example-1.json.

Run:  python3 demos/flat_torus_walkthrough.py
"""

from fractions import Fraction

from ncgeom import (
    ChiralCoefficients,
    HbarSeries,
    MoyalProduct,
    NCMetric,
    Scalar,
    ThetaMatrix,
    canonical_connection,
    ricci_bundle,
    riemann,
    star_inverse,
)

N = 6
star = MoyalProduct(ThetaMatrix.single_pair(2, 0, 1, 1))


def const_series(coeffs):
    vals = [Scalar(Fraction(c)) for c in coeffs]
    vals += [Scalar(0)] * (N + 1 - len(vals))
    return HbarSeries(vals[: N + 1])


zero = const_series([])
ones = const_series([1] * (N + 1))
g = NCMetric([[ones, zero], [zero, ones]], star)

hbar = const_series([0, 1])
cube = [[[zero] * 2 for _ in range(2)] for _ in range(2)]
cube[0][0][0] = hbar
cube[0][0][1] = -hbar
cube[0][1][0] = -hbar
cube[0][1][1] = -hbar
cube[1][0][0] = -hbar
cube[1][0][1] = -hbar
cube[1][1][0] = -hbar
cube[1][1][1] = hbar
ups = ChiralCoefficients(cube)

ginv = star_inverse(g)
conn = canonical_connection(g, ginv, ups)
riem = riemann(g, ginv, conn)
bundle = ricci_bundle(g, ginv, riem)

print("inverse g^11:      ", ginv.entries[0][0].render())
print("Gamma_111:         ", conn.low[0][0][0].render())
print("Gamma~_111:        ", conn.low_t[0][0][0].render())
print("R_1212:            ", riem.entries[0][1][0][1].render())
print("Ricci_11:          ", bundle.ricci_low[0][0].render())
print("theta-Ricci_11:    ", bundle.theta_low[0][0].render())
print("raised Ricci^1_1:  ", bundle.ricci_up[0][0].render())
print("scalar curvature:  ", bundle.scalar.render())
