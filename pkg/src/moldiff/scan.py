"""Slit-width scans comparing the wave model with the classical shadow."""

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from moldiff.analysis import measure_fwhm, method_for_slit
from moldiff.detector import DetectorResponse, add_counting_noise, convolve_detector
from moldiff.errors import DomainError, PhysicsError
from moldiff.physics import BeamlineGeometry, ThermalBeam
from moldiff.propagation import PropagationSettings, beam_screen, incoherent_beam_profile
from moldiff.shadow import classical_fwhm, classical_profile

NAN = float("nan")


@dataclass(frozen=True)
class NoiseSpec:
    enabled: bool = False
    total_counts: int = 10_000
    seed: int = 0


@dataclass(frozen=True)
class ScanRow:
    """Beam widths at one slit width [m]; ``error`` is set when the point failed."""

    dx: float
    fwhm_wave: float = NAN
    fwhm_classical: float = NAN
    fwhm_wave_detected: float = NAN
    fwhm_classical_detected: float = NAN
    fwhm_wave_detected_err: float = 0.0
    method: str = ""
    error: str | None = None


def scan_widths(dx_min, dx_max, points, spacing="log"):
    """Ascending slit widths; a single point scan returns ``[dx_min]``."""
    points = int(points)
    if points < 1:
        raise DomainError("a scan needs at least one point")
    if points == 1:
        return np.array([dx_min])
    if not 0 < dx_min < dx_max:
        raise DomainError(f"scan needs 0 < min < max, got {dx_min} and {dx_max}")
    if spacing == "log":
        return np.geomspace(dx_min, dx_max, points)
    if spacing == "linear":
        return np.linspace(dx_min, dx_max, points)
    raise DomainError(f"unknown scan spacing {spacing!r}")


def model_profiles(dx, geom, beam, det, settings):
    """Wave and classical profiles at slit width ``dx``, before and after the detector."""
    g = geom.with_slit(dx)
    grid = beam_screen(g, beam, settings)
    wave = incoherent_beam_profile(g, beam, settings, grid=grid)
    classical = classical_profile(g, grid)
    return wave, classical, convolve_detector(wave, det), convolve_detector(classical, det)


def scan_point(dx, geom, beam, det, settings, noise=NoiseSpec(), index=0):
    try:
        wave, classical, wave_det, classical_det = model_profiles(dx, geom, beam, det, settings)
        if noise.enabled:
            wave_det = add_counting_noise(wave_det, noise.total_counts, noise.seed + index)
        method = method_for_slit(dx)
        measured = measure_fwhm(wave_det, method)
        return ScanRow(
            dx=float(dx),
            fwhm_wave=measure_fwhm(wave, "crossing").fwhm,
            fwhm_classical=measure_fwhm(classical, "crossing").fwhm,
            fwhm_wave_detected=measured.fwhm,
            fwhm_classical_detected=measure_fwhm(classical_det, method).fwhm,
            fwhm_wave_detected_err=measured.uncertainty,
            method=method.value,
        )
    except PhysicsError as exc:
        return ScanRow(dx=float(dx), error=f"{type(exc).__name__}: {exc}")


def ideal_scan_point(dx, geom, beam, settings=PropagationSettings()):
    """Idealized row: monochromatic beam at the mean velocity, axial point source, no detector.

    The point source is modelled by shrinking S1 to ``dx / 1000``, so the
    classical shadow is a box of the projected aperture width. That box can be
    narrower than the screen pitch and is taken analytically; the wave width is
    read from the half-maximum crossings.
    """
    g = dataclasses.replace(geom, s1_width=1e-3 * dx, s2_width=dx)
    s = dataclasses.replace(settings, n_source_points=1, n_velocity_samples=1)
    try:
        wave = incoherent_beam_profile(g, beam, s)
        w, c = measure_fwhm(wave, "crossing").fwhm, classical_fwhm(g)
        return ScanRow(float(dx), w, c, w, c, 0.0, "crossing")
    except PhysicsError as exc:
        return ScanRow(dx=float(dx), error=f"{type(exc).__name__}: {exc}")


def _scan_task(args, geom, beam, det, settings, noise):
    index, dx = args
    return scan_point(dx, geom, beam, det, settings, noise, index)


def run_scan(
    widths,
    geom=BeamlineGeometry(),
    beam=ThermalBeam(),
    det=DetectorResponse(),
    settings=PropagationSettings(),
    noise=NoiseSpec(),
    workers=1,
):
    """Evaluate :func:`scan_point` for every width, ascending in ``dx``.

    Each point is computed entirely inside one worker with a seed derived from
    its index, so rows are identical for any ``workers``.
    """
    widths = sorted(float(w) for w in widths)
    task = partial(_scan_task, geom=geom, beam=beam, det=det, settings=settings, noise=noise)
    jobs = list(enumerate(widths))
    if workers <= 1 or len(jobs) <= 1:
        return [task(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(task, jobs))


def relative_difference(a, b):
    return abs(a - b) / b if math.isfinite(a) and math.isfinite(b) else NAN
