"""Single-slit matter-wave diffraction of thermal molecules and the
position-momentum uncertainty product extracted from detected beam widths."""

from moldiff.analysis import (
    FwhmResult,
    UncertaintyPoint,
    WidthDecomposition,
    fwhm_crossing,
    fwhm_gaussian_fit,
    momentum_uncertainty,
    quadrature_subtract,
    theoretical_dp,
    uncertainty_curve,
)
from moldiff.detector import DetectorResponse, add_counting_noise, convolve_detector
from moldiff.physics import (
    CONSTANTS,
    BeamlineGeometry,
    Particle,
    PhysicalConstants,
    ThermalBeam,
    VelocitySample,
    de_broglie_wavelength,
    discretize_velocities,
    longitudinal_momentum,
)
from moldiff.profile import Profile, ScreenGrid
from moldiff.propagation import (
    PropagationSettings,
    far_field_sinc,
    fresnel_point_source_intensity,
    incoherent_beam_profile,
)
from moldiff.shadow import classical_fwhm, classical_profile

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "BeamlineGeometry",
    "DetectorResponse",
    "FwhmResult",
    "Particle",
    "PhysicalConstants",
    "Profile",
    "PropagationSettings",
    "ScreenGrid",
    "ThermalBeam",
    "UncertaintyPoint",
    "VelocitySample",
    "WidthDecomposition",
    "add_counting_noise",
    "classical_fwhm",
    "classical_profile",
    "convolve_detector",
    "de_broglie_wavelength",
    "discretize_velocities",
    "far_field_sinc",
    "fresnel_point_source_intensity",
    "fwhm_crossing",
    "fwhm_gaussian_fit",
    "incoherent_beam_profile",
    "longitudinal_momentum",
    "momentum_uncertainty",
    "quadrature_subtract",
    "theoretical_dp",
    "uncertainty_curve",
]
