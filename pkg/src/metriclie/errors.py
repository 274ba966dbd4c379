"""Exception hierarchy shared by all modules."""


class MetricLieError(Exception):
    """Base class for every error raised by metriclie."""


class DependentInput(MetricLieError, ValueError):
    pass


class DimensionMismatch(MetricLieError, ValueError):
    pass


class NonFiniteValue(MetricLieError, ValueError):
    pass


class NotPositiveDefinite(MetricLieError, ValueError):
    pass


class DegeneratePlane(MetricLieError, ValueError):
    pass


class UnsupportedDerivedDim(MetricLieError):
    pass


class NonAbelianDerived(MetricLieError):
    pass


class ClosureViolation(MetricLieError):
    pass


class WrongKind(MetricLieError, TypeError):
    pass


class NonOrthonormalInput(MetricLieError, ValueError):
    pass


class NotNilpotent(MetricLieError):
    pass


class BadParameters(MetricLieError, ValueError):
    pass


class NoExpectationsForFamily(MetricLieError, KeyError):
    pass
