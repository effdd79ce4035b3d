"""Exact-arithmetic engine for star-product differential geometry.

Everything is computed over exact rationals: functions are truncated Taylor
jets with a derivative budget, deformation series are truncated in hbar,
and every identity check is an exact coefficientwise equality.
"""

from .connection import (
    ChiralCoefficients,
    ConnectionCoefficients,
    canonical_connection,
    check_chirality_and_torsion,
    check_compatibility,
    check_connection_parity,
    check_metric_parallel,
)
from .curvature import (
    CurvatureDerivative,
    RicciBundle,
    RicciEquivalenceReport,
    RiemannField,
    contracted_bianchi_check,
    curvature_covariant_derivative,
    first_bianchi_check,
    ricci_bundle,
    ricci_equivalence_check,
    riemann,
    second_bianchi_check,
)
from .embedding import (
    EmbeddingGeometry,
    IsometricEmbedding,
    SphericalEmbeddingSpec,
    embedding_geometry,
    fluctuation_metric,
    spherical_embedding,
    spherical_fluctuation,
    spherical_theta,
)
from .errors import (
    AsymmetricChiral,
    BudgetExhausted,
    InternalDisagreement,
    NCGeomError,
    NotInvertible,
    OrderMismatch,
    ParseError,
    ShapeMismatch,
    SpecViolation,
    ValidationError,
)
from .metric import (
    InverseMetric,
    NCMetric,
    check_inverse_parity,
    check_invertible,
    check_metric_parity,
    star_inverse,
)
from .quasi import (
    QuasiConnection,
    StarCurvatureBundle,
    ensure_associative,
    first_bianchi_star_check,
    quasi_connection,
    star_curvature_bundle,
    star_metric_from_embedding,
)
from .report import CheckResult
from .scalars import Jet, Scalar, coordinate_jet, jet_of_elementary, rat, rat_str
from .scenario import (
    available_checks,
    default_jet_order,
    load_scenario,
    report_to_markdown,
    run_scenario,
    verify_appendix,
)
from .series import HbarSeries
from .star import (
    BidifferentialOperator,
    GeneralStarProduct,
    MoyalProduct,
    ThetaMatrix,
    check_associativity,
    check_leibniz,
    mu_q,
    poisson_bracket,
    star_commutator,
    star_mul,
    star_mul_scalars,
)
from .trig import (
    TrigAnchor,
    angle_jet,
    closed_form_oracle,
    random_unit_pair,
    trig_product_identities,
    verify_trig_identities,
)

__version__ = "0.1.0"
