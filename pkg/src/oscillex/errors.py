"""Exception and warning types shared by every module."""


class OscillexError(Exception):
    """Base class for library errors."""


class PoleError(OscillexError, ValueError):
    """Argument sits on a pole of the gamma function."""


class DomainError(OscillexError, ValueError):
    """Arguments outside the supported domain of a formula."""


class NoConvergence(OscillexError, ArithmeticError):
    """A series did not converge within the allowed number of terms."""


class MaxDepthExceeded(OscillexError, ArithmeticError):
    """Adaptive quadrature reached its refinement limit."""


class SingularTime(OscillexError, ValueError):
    """The propagator degenerates at the requested time."""


class SingularAngle(OscillexError, ValueError):
    """Rotation angle is a multiple of 2*pi."""


class SingularPoint(OscillexError, ValueError):
    """Closed form evaluated at a pole of its generating function."""


class DiagonalPoint(OscillexError, ValueError):
    """Two-term kernel evaluated on the diagonal x == y."""


class DimensionMismatch(OscillexError, ValueError):
    """Vectors with different lengths where equal lengths are required."""


class IndexChainViolation(OscillexError, ValueError):
    """Harmonic label does not satisfy its branching inequalities."""


class EdgeLeakage(OscillexError, ValueError):
    """Grid state is not small enough at the domain edges."""


class ConfigError(OscillexError, ValueError):
    """Invalid run configuration."""


class TailNotNegligible(UserWarning):
    """Integrand is still large at the truncation cutoff."""


class CancellationWarning(UserWarning):
    """Severe cancellation detected in an alternating sum."""


class TruncationWarning(UserWarning):
    """Truncated expansion leaks mass beyond the retained modes."""


class LeakageWarning(UserWarning):
    """Boundary magnitude of a propagated state exceeds the edge tolerance."""


class StepSizeWarning(UserWarning):
    """Time step is coarser than the recommended limit."""
