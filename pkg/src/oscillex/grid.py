"""Uniform one-dimensional grids carrying complex wavefunction samples."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["GridState"]


@dataclass(frozen=True, eq=False)
class GridState:
    """Samples ``values[k]`` of a wavefunction at x_min + k h, k < points."""

    x_min: float
    x_max: float
    points: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if self.points < 16:
            raise DomainError("a grid needs at least 16 points")
        if not self.x_min < self.x_max:
            raise DomainError("need x_min < x_max")
        if v.shape != (self.points,):
            raise DomainError(f"expected {self.points} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("grid values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f, x_min, x_max, points):
        x = np.linspace(x_min, x_max, points)
        return cls(x_min, x_max, points, np.asarray(f(x), dtype=complex))

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.points)

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.points - 1)

    def with_values(self, values):
        return GridState(self.x_min, self.x_max, self.points, values)

    def inner(self, other):
        """Trapezoid approximation of <self, other>."""
        w = np.conj(self.values) * other.values
        return self.h * (w.sum() - 0.5 * (w[0] + w[-1]))

    def norm(self):
        return float(np.sqrt(abs(self.inner(self))))

    def distance(self, other):
        """L2 distance on the common grid."""
        if (self.points, self.x_min, self.x_max) != (other.points, other.x_min, other.x_max):
            raise DomainError("grids differ")
        return self.with_values(self.values - other.values).norm()

    def edge_magnitude(self):
        return float(max(abs(self.values[0]), abs(self.values[-1])))
