"""Exception types shared across the package."""


class NCGeomError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatch(NCGeomError):
    """Operands live at different base points or in different variable counts."""


class BudgetExhausted(NCGeomError):
    """A derivative was requested from a jet whose validity budget is spent."""


class OrderMismatch(NCGeomError):
    """Two series with different truncation orders were combined."""


class OrderOutOfRange(NCGeomError):
    """A series coefficient beyond the truncation order was requested."""


class IrrationalBase(NCGeomError):
    """An elementary function has no rational derivative tower at the base point."""


class NotInvertible(NCGeomError):
    """The order-0 part of a metric is singular at the base point."""


class AsymmetricChiral(NCGeomError):
    """Chiral coefficients fail the required symmetry in the first two indices."""


class InternalDisagreement(NCGeomError):
    """Two formulas that are provably equal produced different results (a bug)."""


class SpecViolation(NCGeomError):
    """A structured input violates one of its declared hypotheses."""


class UnsupportedForm(NCGeomError):
    """A closed-form descriptor uses a building block the oracle does not know."""


class ValidationError(NCGeomError):
    """A scenario file is well-formed JSON but violates a scenario invariant."""


class ParseError(NCGeomError):
    """A scenario file could not be parsed."""
