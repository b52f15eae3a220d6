"""Exception taxonomy shared by all toolkit modules.

Every error that can cross the service boundary carries a stable ``code``
used by the API error payloads and mapped to CLI exit statuses (success 0,
usage 1, soundness violation 2, precision exhausted 3, budget exceeded 4).
"""


class ExpMeasureError(Exception):
    """Base class for all toolkit errors."""

    code = "error"
    exit_status = 1


class PrecisionExhausted(ExpMeasureError):
    """An adaptive-precision computation hit the hard precision cap.

    Raised instead of silently degrading: the doubling schedule starts at
    128 bits and gives up at 2**20 bits.
    """

    code = "precision_exhausted"
    exit_status = 3


class BudgetExceeded(ExpMeasureError):
    """An enumeration would evaluate more polynomials than the caller allowed."""

    code = "budget_exceeded"
    exit_status = 4


class SoundnessViolation(ExpMeasureError):
    """The certified lower bound exceeded a measured minimum.

    This is the build-stopping sentinel: it can only mean the implementation
    (or its premises) is wrong, never a property of the inputs.
    """

    code = "soundness_violation"
    exit_status = 2


class ZeroInput(ExpMeasureError):
    """An operation that requires alpha != 0 received zero."""

    code = "zero_input"


class ConstraintViolated(ExpMeasureError):
    """A documented parameter constraint failed; the message names it."""

    code = "constraint_violated"


class DegenerateDenominator(ConstraintViolated):
    """psi(d, delta, p) evaluated at the pole p = delta*d - 1."""

    code = "degenerate_denominator"


class KernelDimensionUnexpected(ExpMeasureError):
    """The approximant linear system did not have a 1-dimensional kernel."""

    code = "kernel_dimension_unexpected"


class VanishingOrderExcess(ExpMeasureError):
    """A remainder series vanished beyond its certified order."""

    code = "vanishing_order_excess"


class DeterminantShapeViolation(ExpMeasureError):
    """det(P_{k,l}(x)) contained monomials other than c*x^{(p+1)n}."""

    code = "determinant_shape_violation"


class AllSubsetsSingular(ExpMeasureError):
    """Every column subset produced D = 0; impossible unless upstream is broken."""

    code = "all_subsets_singular"


class NotInvertible(ExpMeasureError):
    """Division by a zero divisor in Q[x]/(minpoly); the modulus is reducible
    or the element is zero."""

    code = "not_invertible"


class ParseError(ExpMeasureError):
    """A textual descriptor (algebraic number, range, rational) did not parse."""

    code = "parse_error"
