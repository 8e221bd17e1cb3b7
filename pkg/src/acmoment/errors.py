"""Semantic exception hierarchy shared by all acmoment modules."""


class AcMomentError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(AcMomentError):
    """Requested tolerance was not reached within the evaluation budget."""

    def __init__(self, message, value=None, error_estimate=None, evaluations=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class NonFiniteIntegrand(AcMomentError):
    """Integrand returned NaN or infinity at a sample point."""


class DomainError(AcMomentError):
    """Kinematics outside the supported domain (denominator not positive)."""


class InfraredDivergent(AcMomentError):
    """The requested integral has a non-integrable corner and no finite value."""


class SingularPoint(AcMomentError):
    """Field evaluation requested exactly at a charge position."""


class SingularPath(AcMomentError):
    """A path segment passes within machine tolerance of a charge."""


class PointOnPath(AcMomentError):
    """Winding number requested for a point lying on the path itself."""


class EndpointMismatch(AcMomentError):
    """Interferometer arms do not share identical start and end points."""


class ParseError(AcMomentError):
    """Input file does not conform to the expected JSON schema."""
