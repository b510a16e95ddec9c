"""Exact propagators of the modified oscillator and their numerical cross-checks."""

from .errors import (CancellationWarning, ConfigError, DiagonalPoint, DimensionMismatch,
                     DomainError, EdgeLeakage, IndexChainViolation, LeakageWarning,
                     MaxDepthExceeded, NoConvergence, OscillexError, PoleError,
                     SingularAngle, SingularPoint, SingularTime, StepSizeWarning,
                     TailNotNegligible, TruncationWarning)
from .grid import GridState
from .propagators import ForcingSpec, KernelSpec, RelParams, apply_kernel

__version__ = "0.1.0"
