"""Exception hierarchy shared by all modules."""


class AipError(Exception):
    """Base class for every error raised by the package."""


class NonFinite(AipError, ValueError):
    pass


class NotHermitian(AipError, ValueError):
    pass


class Singular(AipError, ValueError):
    """Linear system with a numerically singular matrix.

    Attributes
    ----------
    cond : float
        Estimated condition number of the offending matrix.
    """

    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(message)
        self.cond = cond


class ResonantSpectrum(AipError, ValueError):
    pass


class PoleAtPoint(AipError, ValueError):
    pass


class NormalizationSingular(AipError, ValueError):
    pass


class SingularK(AipError, ValueError):
    pass


class AssumptionViolated(AipError, ValueError):
    pass


class ShiftNotRegular(AipError, ValueError):
    pass


class NotNeutral(AipError, ValueError):
    pass


class DimensionExceeded(AipError, ValueError):
    pass


class DenominatorSingular(PoleAtPoint):
    pass


class InadmissibleParameter(AipError, ValueError):
    pass


class PickNotPsd(AipError, ValueError):
    pass


class HankelNotPsd(AipError, ValueError):
    pass


class ExactnessFailure(AipError, ValueError):
    pass


class NoInvariantSupport(AipError, ValueError):
    pass


class SingularHankel(AipError, ValueError):
    pass


class NonRealPole(AipError, ValueError):
    pass


class ResidueNotPsd(AipError, ValueError):
    pass


class NotInAdjoint(AipError, ValueError):
    pass


class SystemSingular(AipError, ValueError):
    pass


class BoundaryNotSelfadjoint(AipError, ValueError):
    pass


class RelationNotGraph(AipError, ValueError):
    pass


class ParseError(AipError, ValueError):
    pass


class SchemaVersionUnsupported(ParseError):
    pass
