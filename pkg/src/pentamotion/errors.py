"""Exception hierarchy.

Everything derives from :class:`PentamotionError`.  Validation problems
(bad designs, violated preconditions) derive from :class:`ValidationError`;
numerical breakdowns (singular systems, stalled traces) from
:class:`NumericalError`.  The CLI maps the two families to exit codes 1 and 2.
"""


class PentamotionError(Exception):
    pass


class ValidationError(PentamotionError, ValueError):
    pass


class NumericalError(PentamotionError, ArithmeticError):
    pass


# core kinematics
class ZeroNorm(ValidationError):
    pass


class NotLineSymmetric(ValidationError):
    pass


class AllZero(ValidationError):
    pass


# design
class InvalidDesign(ValidationError):
    pass


class UnsupportedType(ValidationError):
    pass


class SpecialCaseV0(ValidationError):
    """Raised where the leg relation cannot be solved because v = 0."""


class PreconditionError(ValidationError):
    pass


# self-motion
class SingularSystem(NumericalError):
    pass


class RankDeficiency(NumericalError):
    pass


class DivisionFails(NumericalError):
    pass


class DegenerateDirection(NumericalError):
    pass


class NoRealSeed(NumericalError):
    pass


class ContinuationStall(NumericalError):
    pass


# geometry / reality / verification
class IdealPoint(ValidationError):
    pass


class CircleCase(NumericalError):
    pass


class Degenerate(NumericalError):
    pass


class TraceFailure(NumericalError):
    pass
