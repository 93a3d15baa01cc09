"""Scalar-wave (paraxial Fresnel) model of the two-slit beamline.

A point source at ``s`` in the plane of S1 illuminates the diffracting slit S2;
the screen amplitude is the two-segment Fresnel integral

    psi(x) = integral over S2 of exp{i k [(xi - s)^2 / 2 L1 + (x - xi)^2 / 2 L2]} dxi

evaluated by composite Simpson quadrature on a node grid fine enough that the
phase never advances by more than ``max_phase_step`` between neighbouring nodes.
S1 is a spatially incoherent source: intensities from a row of point sources are
summed, then averaged over the beam's velocity distribution.

Intensities carry the flux normalisation ``|psi|^2 / (lambda L1 L2)`` of an
incoherent line source whose emission per unit angle does not depend on the de
Broglie wavelength, so every velocity class deposits the same flux ``dx / L1``
on the screen and the velocity weights are plain flux fractions.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from moldiff.errors import DomainError, PreconditionError, ResourceError
from moldiff.physics import de_broglie_wavelength, discretize_velocities
from moldiff.profile import Profile, ScreenGrid
from moldiff.shadow import classical_fwhm

MAX_QUADRATURE_NODES = 10**8
MIN_QUADRATURE_NODES = 17
_NODE_CHUNK = 1024


def _sinc_half_power_root():
    return brentq(lambda u: (math.sin(u) / u) ** 2 - 0.5, 1.0, 2.0)


# (sin u / u)^2 = 1/2 at u = 0.4430 pi; the central-lobe FWHM is 2 u / pi in units
# of lambda L / dx.
SINC_HALF_POWER_U = _sinc_half_power_root()
FAR_FIELD_FWHM_FACTOR = 2.0 * SINC_HALF_POWER_U / math.pi


@dataclass(frozen=True)
class PropagationSettings:
    """Discretization controls.

    ``screen_halfwidth=None`` picks ``max(4 x classical FWHM, 6 x far-field lobe FWHM)``
    at the beam's mean wavelength.
    """

    n_source_points: int = 65
    n_velocity_samples: int = 33
    screen_halfwidth: float | None = None
    screen_points: int = 2048
    max_phase_step: float = math.pi / 4

    def __post_init__(self):
        if self.n_source_points < 1 or self.n_velocity_samples < 1:
            raise DomainError("source and velocity sample counts must be >= 1")
        if self.screen_points < 64:
            raise DomainError(f"screen_points must be >= 64, got {self.screen_points}")
        if not 0 < self.max_phase_step <= math.pi / 2:
            raise DomainError(f"max_phase_step must lie in (0, pi/2], got {self.max_phase_step}")
        if self.screen_halfwidth is not None and not self.screen_halfwidth > 0:
            raise DomainError("screen_halfwidth must be positive")


def far_field_lobe_fwhm(geom, wavelength):
    return FAR_FIELD_FWHM_FACTOR * wavelength * geom.L2 / geom.s2_width


def default_screen(geom, wavelength, settings):
    if settings.screen_halfwidth is not None:
        halfwidth = settings.screen_halfwidth
    else:
        halfwidth = max(4.0 * classical_fwhm(geom), 6.0 * far_field_lobe_fwhm(geom, wavelength))
    return ScreenGrid(halfwidth, settings.screen_points)


def source_positions(geom, n):
    """Midpoints of ``n`` equal cells across S1 (the axis for ``n == 1``)."""
    if n == 1:
        return np.zeros(1)
    return ((np.arange(n) + 0.5) / n - 0.5) * geom.s1_width


def quadrature_node_count(geom, wavelength, x_max, max_phase_step):
    """Odd Simpson node count keeping the phase step per node below ``max_phase_step``.

    The bound holds for every source point in S1, so all sources share one node set.
    """
    k = 2.0 * math.pi / wavelength
    half = 0.5 * geom.s2_width
    # Largest |d phase / d xi| over aperture, S1 and screen.
    slope = k * ((half + 0.5 * geom.s1_width) / geom.L1 + (x_max + half) / geom.L2)
    n = math.ceil(geom.s2_width * slope / max_phase_step) + 1
    n = max(n, MIN_QUADRATURE_NODES)
    if n % 2 == 0:
        n += 1
    if n > MAX_QUADRATURE_NODES:
        raise ResourceError(
            f"aperture quadrature needs {n:.3g} nodes (limit {MAX_QUADRATURE_NODES:.0e}) for "
            f"slit {geom.s2_width:.3g} m, wavelength {wavelength:.3g} m, screen half-width "
            f"{x_max:.3g} m; use a narrower screen or a larger max_phase_step"
        )
    return n


def _simpson_weights(n, h):
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def screen_intensities(geom, wavelength, sources, x, max_phase_step):
    """Flux-normalized point-source intensities, shape ``(len(x), len(sources))``.

    The phase factors depending only on ``x`` or only on ``s`` have unit modulus and
    are dropped; the remainder factorizes into a screen-by-node matrix times a
    node-by-source matrix, accumulated over fixed node chunks.
    """
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    x = np.asarray(x, dtype=float)
    sources = np.atleast_1d(np.asarray(sources, dtype=float))
    k = 2.0 * math.pi / wavelength
    n = quadrature_node_count(geom, wavelength, float(np.max(np.abs(x))), max_phase_step)
    half = 0.5 * geom.s2_width
    xi = np.linspace(-half, half, n)
    weights = _simpson_weights(n, xi[1] - xi[0])
    curvature = 0.5 * k * (1.0 / geom.L1 + 1.0 / geom.L2)

    psi = np.zeros((x.size, sources.size), dtype=complex)
    for start in range(0, n, _NODE_CHUNK):
        sl = slice(start, min(start + _NODE_CHUNK, n))
        xj = xi[sl]
        screen = np.exp(-1j * (k / geom.L2) * np.outer(x, xj))
        aperture = weights[sl, None] * np.exp(
            1j * (curvature * xj[:, None] ** 2 - (k / geom.L1) * np.outer(xj, sources))
        )
        psi += screen @ aperture
    return (psi.real**2 + psi.imag**2) / (wavelength * geom.L1 * geom.L2)


def fresnel_point_source_intensity(geom, wavelength, source_x, settings=PropagationSettings(), grid=None):
    """Screen intensity from one monochromatic point source in the S1 plane.

    Parameters
    ----------
    geom : BeamlineGeometry
    wavelength : float
        De Broglie wavelength [m].
    source_x : float
        Source position within S1 [m].
    settings : PropagationSettings
    grid : ScreenGrid, optional
        Defaults to :func:`default_screen` for this wavelength.

    Returns
    -------
    Profile
        Unnormalized intensity (flux per unit screen length).
    """
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    if abs(source_x) > 0.5 * geom.s1_width * (1 + 1e-12):
        raise PreconditionError(
            f"source position {source_x:.3g} m lies outside S1 (half-width {0.5 * geom.s1_width:.3g} m)"
        )
    grid = grid or default_screen(geom, wavelength, settings)
    intensity = screen_intensities(geom, wavelength, [source_x], grid.x, settings.max_phase_step)
    return grid.profile(intensity[:, 0])


def monochromatic_beam_intensity(geom, wavelength, settings, grid):
    """Source-averaged intensity for one wavelength on ``grid`` (unnormalized)."""
    sources = source_positions(geom, settings.n_source_points)
    per_source = screen_intensities(geom, wavelength, sources, grid.x, settings.max_phase_step)
    total = np.zeros(grid.points)
    for j in range(sources.size):
        total += per_source[:, j]
    return total / sources.size


def beam_screen(geom, beam, settings):
    return default_screen(geom, de_broglie_wavelength(beam.particle, beam.mean_velocity), settings)


def incoherent_beam_profile(geom, beam, settings=PropagationSettings(), grid=None, normalize=True):
    """Velocity- and source-averaged screen profile of the molecular beam.

    Sums point-source intensities over ``settings.n_source_points`` positions
    across S1 and over the velocity samples of ``beam`` weighted by their flux
    fractions. Reduction order is fixed, so the result does not depend on how
    the caller distributes work.

    With ``normalize=False`` the profile keeps flux units (integral ~ dx / L1),
    otherwise it is scaled to unit peak.
    """
    grid = grid or beam_screen(geom, beam, settings)
    samples = discretize_velocities(beam, settings.n_velocity_samples)
    buffers = [
        monochromatic_beam_intensity(
            geom, de_broglie_wavelength(beam.particle, s.velocity), settings, grid
        )
        for s in samples
    ]
    total = np.zeros(grid.points)
    for sample, buf in zip(samples, buffers):
        total += sample.weight * buf
    profile = grid.profile(total)
    return profile.normalized() if normalize else profile


def far_field_sinc(geom, wavelength, grid):
    """Analytic Fraunhofer pattern ``(sin u / u)^2`` with ``u = pi dx x / (lambda L2)``, unit peak."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    arg = geom.s2_width * grid.x / (wavelength * geom.L2)
    return grid.profile(np.sinc(arg) ** 2)
