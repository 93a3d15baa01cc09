"""Beam-width measurement and the uncertainty-product pipeline.

The chain works on FWHM values only: the detector width is removed from the
detected width by quadrature subtraction, the classical shadow width is removed
the same way, and the remaining quantum width is turned into a momentum spread
with the single-slit relation

    dp = p_z / (0.89 L2) * (sqrt(X_mol^2 - X_cl^2) - dx)

where 0.89 converts the half-power width of the (sin u / u)^2 lobe into the
momentum needed to reach its first minimum.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import least_squares

from moldiff.errors import DecompositionError, DomainError, FitError, PhysicsError, ShapeError
from moldiff.physics import CONSTANTS, longitudinal_momentum
from moldiff.shadow import classical_fwhm, shadow_widths

GAUSSIAN_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
MOMENTUM_FWHM_FACTOR = 0.89
# Below this slit width the beam width is read from a Gaussian fit, above it
# directly from the half-maximum crossings.
FIT_METHOD_THRESHOLD = 4e-6
BELOW_CLASSICAL = "below classical resolution"


class FwhmMethod(str, Enum):
    CROSSING = "crossing"
    GAUSSIAN_FIT = "gaussian_fit"


@dataclass(frozen=True)
class FwhmResult:
    fwhm: float
    method: FwhmMethod
    fit_rms: float = float("nan")
    uncertainty: float = 0.0

    def __post_init__(self):
        if not self.fwhm > 0:
            raise ShapeError(f"non-positive FWHM {self.fwhm}")
        if not self.uncertainty >= 0:
            raise ShapeError(f"negative FWHM uncertainty {self.uncertainty}")


@dataclass(frozen=True)
class WidthDecomposition:
    """FWHM budget: ``x_mol^2 = x_exp^2 - x_detector^2`` and ``x_qu^2 = x_mol^2 - x_cl^2``."""

    x_exp: float
    x_detector: float
    x_mol: float
    x_cl: float
    x_qu: float


@dataclass(frozen=True)
class UncertaintyPoint:
    """One point of the dp-versus-dx curve.

    ``error`` is ``None`` for a usable point; otherwise it names why the point
    could not be evaluated (``dp`` is then NaN) or that the quantum width did not
    exceed the slit width (``dp <= 0``).
    """

    slit_width: float
    slit_width_err: float
    dp: float
    dp_err: float
    product_over_h: float
    error: str | None = None

    def __post_init__(self):
        if not self.slit_width > 0:
            raise DomainError(f"slit width must be positive, got {self.slit_width}")
        if self.error is None and not self.product_over_h > 0:
            raise DomainError("a valid uncertainty point needs a positive product")


def fwhm_crossing(profile):
    """FWHM from the outermost half-maximum crossings, linearly interpolated."""
    y = profile.intensity
    peak = y.max()
    if not peak > 0:
        raise ShapeError("profile has no positive peak")
    half = 0.5 * peak
    above = np.flatnonzero(y >= half)
    left, right = above[0], above[-1]
    if left == 0 or right == y.size - 1:
        raise ShapeError("profile does not fall below half maximum on both sides of the window")
    x_left = left - (y[left] - half) / (y[left] - y[left - 1])
    x_right = right + (y[right] - half) / (y[right] - y[right + 1])
    return FwhmResult(
        fwhm=float((x_right - x_left) * profile.dx_grid),
        method=FwhmMethod.CROSSING,
        uncertainty=profile.dx_grid,
    )


def _gaussian(p, x):
    amp, centre, sigma, offset = p
    return amp * np.exp(-0.5 * ((x - centre) / sigma) ** 2) + offset


def _gaussian_jac(p, x):
    amp, centre, sigma, _ = p
    t = (x - centre) / sigma
    e = np.exp(-0.5 * t**2)
    return np.column_stack([e, amp * e * t / sigma, amp * e * t**2 / sigma, np.ones_like(x)])


def fwhm_gaussian_fit(profile, max_nfev=2000):
    """Least-squares fit of ``A exp(-(x - c)^2 / 2 sigma^2) + offset``.

    Coordinates are rescaled to the initial width estimate and the intensity to
    unit peak before fitting, so ``fit_rms`` is relative to the peak. The width
    uncertainty is the 1-sigma error from the Jacobian at the optimum with the
    residual variance as noise estimate.
    """
    y_raw = profile.intensity
    peak = y_raw.max()
    if not peak > 0:
        raise ShapeError("profile has no positive peak")
    if np.count_nonzero(y_raw > 0.1 * peak) < 8:
        raise ShapeError("fewer than 8 samples above 10% of peak; refine the grid")
    y = y_raw / peak
    x_raw = profile.x
    i_peak = int(np.argmax(y))
    try:
        width0 = fwhm_crossing(profile).fwhm
    except ShapeError:
        width0 = profile.dx_grid * np.count_nonzero(y > 0.5)
    scale = width0 / GAUSSIAN_FWHM_PER_SIGMA
    x = (x_raw - x_raw[i_peak]) / scale
    p0 = np.array([1.0, 0.0, 1.0, float(min(y[0], y[-1]))])
    res = least_squares(
        lambda p: _gaussian(p, x) - y,
        p0,
        jac=lambda p: _gaussian_jac(p, x),
        method="lm",
        xtol=1e-12,
        ftol=1e-12,
        gtol=1e-12,
        max_nfev=max_nfev,
    )
    rms = float(np.sqrt(np.mean(res.fun**2)))
    if not res.success or not np.all(np.isfinite(res.x)) or res.x[2] == 0:
        raise FitError(f"Gaussian fit did not converge: {res.message}", best_rms=rms)
    dof = max(y.size - 4, 1)
    jtj = res.jac.T @ res.jac
    cov = np.linalg.pinv(jtj) * (np.sum(res.fun**2) / dof)
    sigma = abs(res.x[2]) * scale
    sigma_err = math.sqrt(max(cov[2, 2], 0.0)) * scale
    return FwhmResult(
        fwhm=float(GAUSSIAN_FWHM_PER_SIGMA * sigma),
        method=FwhmMethod.GAUSSIAN_FIT,
        fit_rms=rms,
        uncertainty=GAUSSIAN_FWHM_PER_SIGMA * sigma_err,
    )


def method_for_slit(slit_width):
    return FwhmMethod.GAUSSIAN_FIT if slit_width < FIT_METHOD_THRESHOLD else FwhmMethod.CROSSING


def measure_fwhm(profile, method):
    if FwhmMethod(method) is FwhmMethod.GAUSSIAN_FIT:
        return fwhm_gaussian_fit(profile)
    return fwhm_crossing(profile)


def quadrature_subtract(total, component):
    """``sqrt(total^2 - component^2)``; raises if the component exceeds the total."""
    if component < 0 or total < 0:
        raise DomainError("widths must be nonnegative")
    if component > total:
        raise DecompositionError(
            f"component width {component:.4g} exceeds total width {total:.4g}"
        )
    return math.sqrt(total * total - component * component)


def decompose_widths(x_exp, x_detector, x_cl):
    x_mol = quadrature_subtract(x_exp, x_detector)
    x_qu = quadrature_subtract(x_mol, x_cl)
    return WidthDecomposition(x_exp, x_detector, x_mol, x_cl, x_qu)


def momentum_uncertainty(x_mol, x_cl, slit_width, p_z, L2):
    """Momentum spread from molecular and classical beam widths.

    Returns ``p_z / (0.89 L2) * (sqrt(x_mol^2 - x_cl^2) - slit_width)``. A
    non-positive result means the measured width is below classical resolution;
    callers report such points rather than discard them.
    """
    x_qu = quadrature_subtract(x_mol, x_cl)
    return p_z / (MOMENTUM_FWHM_FACTOR * L2) * (x_qu - slit_width)


def theoretical_dp(slit_width, p_z=None, wavelength=None):
    """Expected momentum spread ``h / dx``, or ``p_z * lambda / dx`` when both are given."""
    if not slit_width > 0:
        raise DomainError(f"slit width must be positive, got {slit_width}")
    if p_z is not None and wavelength is not None:
        return p_z * wavelength / slit_width
    return CONSTANTS.h / slit_width


def slit_width_error(slit_width, absolute=30e-9, relative=0.03):
    """Combined zero-point and calibration-scale error on the slit width."""
    return math.hypot(absolute, relative * slit_width)


def _uncertainty_point(row, beam, geom, det, abs_err, rel_err):
    dx = row.dx
    dx_err = slit_width_error(dx, abs_err, rel_err)
    p_z = longitudinal_momentum(beam.particle, beam.mean_velocity)
    d_eff = det.effective_fwhm if det is not None else 0.0
    detected_classical = getattr(row, "fwhm_classical_detected", None)
    slit_geom = geom.with_slit(dx)
    if detected_classical is not None and math.isfinite(detected_classical):
        # Classical shadow passed through the same detector and width reading.
        x_cl = quadrature_subtract(detected_classical, d_eff)
        dxcl_ddx = 0.0
    else:
        x_cl = classical_fwhm(slit_geom)
        w1, w2 = shadow_widths(slit_geom)
        dxcl_ddx = (geom.L1 + geom.L2) / geom.L1 if w1 > w2 else 0.0
    dec = decompose_widths(row.fwhm_wave_detected, d_eff, x_cl)
    dp = momentum_uncertainty(dec.x_mol, dec.x_cl, dx, p_z, geom.L2)
    product = dx * dp / CONSTANTS.h

    scale = p_z / (MOMENTUM_FWHM_FACTOR * geom.L2)
    fwhm_err = getattr(row, "fwhm_wave_detected_err", 0.0) or 0.0
    if dec.x_qu > 0:
        d_dxexp = scale * dec.x_exp / dec.x_qu
        d_ddx = scale * (-1.0 - dec.x_cl * dxcl_ddx / dec.x_qu)
        dp_err = math.hypot(d_dxexp * fwhm_err, d_ddx * dx_err)
    else:
        dp_err = float("inf")
    error = None if dp > 0 else BELOW_CLASSICAL
    return UncertaintyPoint(dx, dx_err, dp, dp_err, product, error)


def uncertainty_curve(rows, beam, geom, det, slit_abs_err=30e-9, slit_rel_err=0.03):
    """Convert measured beam widths into ``(dx, dp, dx dp / h)`` points.

    Parameters
    ----------
    rows : iterable
        Records with attributes ``dx`` and ``fwhm_wave_detected`` [m], and
        optionally ``fwhm_wave_detected_err`` and ``fwhm_classical_detected``.
        When the detected classical width is present it is deconvolved like the
        measured width; otherwise the analytic shadow FWHM is used.
    beam, geom, det
        Beam (for ``p_z``), beamline (``L1``, ``L2``, S1) and detector;
        ``det=None`` treats the widths as undetected (no detector subtraction).

    Failures are attached to the offending point instead of aborting.
    """
    points = []
    for row in rows:
        if getattr(row, "error", None):
            points.append(_failed_point(row.dx, slit_abs_err, slit_rel_err, row.error))
            continue
        try:
            points.append(_uncertainty_point(row, beam, geom, det, slit_abs_err, slit_rel_err))
        except PhysicsError as exc:
            points.append(_failed_point(row.dx, slit_abs_err, slit_rel_err, str(exc)))
    return points


def _failed_point(dx, abs_err, rel_err, message):
    nan = float("nan")
    return UncertaintyPoint(dx, slit_width_error(dx, abs_err, rel_err), nan, nan, nan, message)
