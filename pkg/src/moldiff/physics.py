"""Physical constants, beam and beamline types, de Broglie relations and the
discretized velocity distribution used for polychromatic averaging."""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import constants as _sc
from scipy.optimize import brentq

from moldiff.errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants in SI units."""

    h: float = _sc.h
    k_B: float = _sc.k
    amu: float = _sc.atomic_mass

    def __post_init__(self):
        if not (self.h > 0 and self.k_B > 0 and self.amu > 0):
            raise DomainError("physical constants must be positive")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class Particle:
    """A molecule of given mass in amu."""

    mass: float
    name: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"particle mass must be positive, got {self.mass}")

    @property
    def mass_kg(self):
        return self.mass * CONSTANTS.amu


C70 = Particle(mass=840.0, name="C70")


class DistributionKind(str, Enum):
    GAUSSIAN_IN_V = "gaussian_in_v"
    EFFUSIVE_FLUX = "effusive_flux"


def most_probable_flux_velocity(particle, temperature):
    """Peak of the effusive flux density v^3 exp(-m v^2 / 2 k_B T), i.e. sqrt(3 k_B T / m)."""
    return float(np.sqrt(3.0 * CONSTANTS.k_B * temperature / particle.mass_kg))


@dataclass(frozen=True)
class ThermalBeam:
    """Thermal molecular beam.

    ``mean_velocity`` defaults to the most probable velocity of the effusive flux
    distribution at ``temperature`` (163.5 m/s for C70 at 900 K).
    ``relative_fwhm_spread`` is the FWHM of the speed distribution over its mean.
    """

    particle: Particle = C70
    temperature: float = 900.0
    mean_velocity: float | None = None
    relative_fwhm_spread: float = 0.6
    distribution_kind: DistributionKind = DistributionKind.GAUSSIAN_IN_V

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError(f"temperature must be positive, got {self.temperature}")
        if self.mean_velocity is None:
            object.__setattr__(
                self, "mean_velocity", most_probable_flux_velocity(self.particle, self.temperature)
            )
        if not self.mean_velocity > 0:
            raise DomainError(f"mean velocity must be positive, got {self.mean_velocity}")
        if not 0 < self.relative_fwhm_spread < 2:
            raise DomainError(
                f"relative FWHM spread must lie in (0, 2), got {self.relative_fwhm_spread}"
            )
        object.__setattr__(self, "distribution_kind", DistributionKind(self.distribution_kind))


@dataclass(frozen=True)
class BeamlineGeometry:
    """Two-slit collimation geometry, all lengths in metres.

    ``s1_width`` is the fixed source slit, ``s2_width`` the diffracting slit (the
    position uncertainty), ``L1`` the S1-S2 distance and ``L2`` the S2-detector distance.
    """

    s1_width: float = 10e-6
    s2_width: float = 1.4e-6
    L1: float = 1.13
    L2: float = 1.33

    def __post_init__(self):
        for name in ("s1_width", "s2_width", "L1", "L2"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.s2_width > self.s1_width * 1e3:
            raise DomainError("s2_width exceeds 1000 x s1_width")

    def with_slit(self, s2_width):
        return replace(self, s2_width=s2_width)


@dataclass(frozen=True)
class VelocitySample:
    velocity: float
    weight: float


def de_broglie_wavelength(particle, velocity):
    """De Broglie wavelength h / (m v) in metres."""
    if not velocity > 0:
        raise DomainError(f"velocity must be positive, got {velocity}")
    return CONSTANTS.h / (particle.mass_kg * velocity)


def longitudinal_momentum(particle, velocity):
    """Forward momentum m v in kg m/s."""
    if not velocity > 0:
        raise DomainError(f"velocity must be positive, got {velocity}")
    return particle.mass_kg * velocity


def _gaussian_density(v, beam):
    sigma = beam.relative_fwhm_spread * beam.mean_velocity / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    return np.exp(-0.5 * ((v - beam.mean_velocity) / sigma) ** 2)


def _effusive_density(v, beam):
    # Written in units of the peak velocity to avoid under/overflow.
    u = v / most_probable_flux_velocity(beam.particle, beam.temperature)
    return u**3 * np.exp(-1.5 * (u**2 - 1.0))


@lru_cache(maxsize=None)
def effusive_fwhm_ratio():
    """FWHM of the effusive flux density divided by its peak velocity (about 0.95)."""
    f = lambda u: u**3 * np.exp(-1.5 * (u**2 - 1.0)) - 0.5
    return brentq(f, 1.0, 5.0) - brentq(f, 1e-6, 1.0)


_DENSITIES = {
    DistributionKind.GAUSSIAN_IN_V: _gaussian_density,
    DistributionKind.EFFUSIVE_FLUX: _effusive_density,
}


def discretize_velocities(beam, n):
    """Deterministic velocity nodes and normalized weights for a beam.

    Nodes are equally spaced over ``mean * (1 -/+ 1.5 * spread)`` with the lower end
    clipped to a small positive speed; the effusive distribution uses at least its
    intrinsic FWHM ratio as the spread so that its high-speed tail is covered.
    Weights are the density times trapezoid weights, normalized to one.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"need at least one velocity sample, got {n}")
    vbar = beam.mean_velocity
    if n == 1:
        return [VelocitySample(vbar, 1.0)]
    spread = beam.relative_fwhm_spread
    if beam.distribution_kind is DistributionKind.EFFUSIVE_FLUX:
        spread = max(spread, effusive_fwhm_ratio())
    hi = vbar * (1.0 + 1.5 * spread)
    lo = max(vbar * (1.0 - 1.5 * spread), hi / (4.0 * n))
    v = np.linspace(lo, hi, n)
    w = _DENSITIES[beam.distribution_kind](v, beam)
    w[0] *= 0.5
    w[-1] *= 0.5
    total = w.sum()
    if not total > 0:
        raise DomainError("velocity distribution has no weight on the sampled support")
    w = w / total
    return [VelocitySample(float(vi), float(wi)) for vi, wi in zip(v, w)]


def fresnel_number(width, wavelength, distance):
    return width**2 / (wavelength * distance)
