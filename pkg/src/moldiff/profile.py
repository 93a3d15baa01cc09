"""Sampled one-dimensional intensity profiles on uniform transverse grids."""

from dataclasses import dataclass

import numpy as np

from moldiff.errors import DomainError


@dataclass(frozen=True, eq=False)
class Profile:
    """Nonnegative intensity sampled at ``x0 + i * dx_grid``.

    Parameters
    ----------
    x0 : float
        Position of the first sample [m].
    dx_grid : float
        Grid pitch [m].
    intensity : numpy.ndarray
        Intensity samples, arbitrary units. Stored read-only.
    """

    x0: float
    dx_grid: float
    intensity: np.ndarray

    def __post_init__(self):
        arr = np.array(self.intensity, dtype=float)
        if arr.ndim != 1 or arr.size < 8:
            raise DomainError("a profile needs a 1-D array of at least 8 samples")
        if not self.dx_grid > 0:
            raise DomainError(f"grid pitch must be positive, got {self.dx_grid}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("profile intensity must be finite")
        if np.any(arr < 0):
            raise DomainError("profile intensity must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "intensity", arr)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx_grid", float(self.dx_grid))

    def __len__(self):
        return self.intensity.size

    @property
    def x(self):
        return self.x0 + self.dx_grid * np.arange(self.intensity.size)

    @property
    def peak(self):
        return float(self.intensity.max())

    def integral(self):
        return float(self.intensity.sum() * self.dx_grid)

    def centroid(self):
        return float(np.sum(self.x * self.intensity) / np.sum(self.intensity))

    def normalized(self):
        """Copy scaled to unit peak (unchanged if identically zero)."""
        peak = self.peak
        if peak == 0:
            return self
        return Profile(self.x0, self.dx_grid, self.intensity / peak)

    def with_intensity(self, intensity):
        return Profile(self.x0, self.dx_grid, intensity)


@dataclass(frozen=True)
class ScreenGrid:
    """Symmetric screen window ``[-halfwidth, +halfwidth]`` sampled at ``points`` nodes."""

    halfwidth: float
    points: int = 2048

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise DomainError(f"screen half-width must be positive, got {self.halfwidth}")
        if int(self.points) < 8:
            raise DomainError(f"screen needs at least 8 points, got {self.points}")

    @property
    def pitch(self):
        return 2.0 * self.halfwidth / (self.points - 1)

    @property
    def x(self):
        # Built from the centre outwards so that x[i] == -x[-1-i] exactly.
        i = np.arange(self.points) - 0.5 * (self.points - 1)
        return i * self.pitch

    @property
    def x0(self):
        return -self.halfwidth

    def profile(self, intensity):
        return Profile(float(self.x[0]), self.pitch, intensity)
