import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants

from moldiff import Particle, ThermalBeam, de_broglie_wavelength, discretize_velocities
from moldiff import fwhm_crossing, longitudinal_momentum
from moldiff.errors import DomainError
from moldiff.physics import (
    C70,
    CONSTANTS,
    BeamlineGeometry,
    DistributionKind,
    effusive_fwhm_ratio,
    most_probable_flux_velocity,
)
from moldiff.profile import Profile


def test_constants_are_codata():
    assert CONSTANTS.h == constants.h
    assert CONSTANTS.k_B == constants.k
    assert CONSTANTS.amu == constants.atomic_mass


def test_wavelength_c70_at_163_5():
    # h / (840 amu * 163.5 m/s) evaluated independently with CODATA values
    assert de_broglie_wavelength(C70, 163.5) == pytest.approx(2.9054e-12, rel=1e-4)


def test_wavelength_halves_at_double_speed():
    assert de_broglie_wavelength(C70, 327.0) == pytest.approx(1.4527e-12, rel=1e-4)


def test_equal_momentum_equal_wavelength():
    assert de_broglie_wavelength(C70, 100.0) == pytest.approx(
        de_broglie_wavelength(Particle(420.0), 200.0), rel=1e-15
    )


def test_longitudinal_momentum():
    assert longitudinal_momentum(C70, 163.5) == pytest.approx(2.2806e-22, rel=1e-4)


def test_momentum_vanishes_with_velocity():
    assert longitudinal_momentum(C70, 1e-30) < 1e-50


@pytest.mark.parametrize("v", [0.0, -1.0])
def test_nonpositive_velocity_rejected(v):
    with pytest.raises(DomainError):
        de_broglie_wavelength(C70, v)
    with pytest.raises(DomainError):
        longitudinal_momentum(C70, v)


@given(
    mass=st.floats(1.0, 1e6),
    velocity=st.floats(1e-3, 1e5),
)
def test_wavelength_times_momentum_is_h(mass, velocity):
    p = Particle(mass)
    assert de_broglie_wavelength(p, velocity) * longitudinal_momentum(p, velocity) == pytest.approx(
        constants.h, rel=1e-14
    )


def test_default_mean_velocity_is_effusive_peak():
    beam = ThermalBeam()
    assert beam.mean_velocity == pytest.approx(163.48, abs=0.01)
    assert beam.mean_velocity == most_probable_flux_velocity(C70, 900.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(temperature=0.0),
        dict(mean_velocity=-1.0),
        dict(relative_fwhm_spread=0.0),
        dict(relative_fwhm_spread=2.0),
    ],
)
def test_beam_invariants(kwargs):
    with pytest.raises(DomainError):
        ThermalBeam(**kwargs)


def test_geometry_invariants():
    with pytest.raises(DomainError):
        BeamlineGeometry(L1=0.0)
    with pytest.raises(DomainError):
        BeamlineGeometry(s1_width=1e-9, s2_width=1e-5)
    with pytest.raises(DomainError):
        Particle(0.0)


def test_single_sample_is_monochromatic(beam):
    (s,) = discretize_velocities(beam, 1)
    assert s.velocity == beam.mean_velocity
    assert s.weight == 1.0


def test_zero_samples_rejected(beam):
    with pytest.raises(DomainError):
        discretize_velocities(beam, 0)


@pytest.mark.parametrize("n", [33, 65, 129])
def test_gaussian_sampled_fwhm_matches_spread(n):
    beam = ThermalBeam(relative_fwhm_spread=0.6)
    samples = discretize_velocities(beam, n)
    v = np.array([s.velocity for s in samples])
    w = np.array([s.weight for s in samples])
    # undo the trapezoid end weights to read the density itself
    w[[0, -1]] *= 2
    fwhm = fwhm_crossing(Profile(v[0], v[1] - v[0], w)).fwhm
    assert fwhm == pytest.approx(0.6 * beam.mean_velocity, rel=0.02)


def test_support_covers_required_interval(beam):
    samples = discretize_velocities(beam, 33)
    lo, hi = samples[0].velocity, samples[-1].velocity
    assert hi >= beam.mean_velocity * (1 + 1.5 * 0.6) * (1 - 1e-12)
    assert lo <= beam.mean_velocity * (1 - 1.5 * 0.6) * (1 + 1e-12)
    assert lo > 0


def test_wide_spread_is_clipped_positive():
    samples = discretize_velocities(ThermalBeam(relative_fwhm_spread=1.5), 33)
    assert min(s.velocity for s in samples) > 0


def test_effusive_fwhm_ratio():
    # FWHM of u^3 exp(-3 (u^2 - 1) / 2) with unit peak position, brentq roots
    assert effusive_fwhm_ratio() == pytest.approx(0.949, abs=1e-3)


def test_effusive_density_peaks_at_most_probable_velocity():
    beam = ThermalBeam(distribution_kind="effusive_flux")
    samples = discretize_velocities(beam, 65)
    v = np.array([s.velocity for s in samples])
    w = np.array([s.weight for s in samples])
    v_peak = math.sqrt(3 * constants.k * 900 / (840 * constants.atomic_mass))
    pitch = v[1] - v[0]
    assert abs(v[np.argmax(w)] - v_peak) <= 0.5 * pitch + 1e-9
    assert v_peak == pytest.approx(163.5, abs=0.05)


@pytest.mark.parametrize("kind", list(DistributionKind))
@pytest.mark.parametrize("n", [2, 17, 33, 65, 200])
def test_weights_normalized_and_nonnegative(kind, n):
    samples = discretize_velocities(ThermalBeam(distribution_kind=kind), n)
    w = np.array([s.weight for s in samples])
    assert len(samples) == n
    assert np.all(w >= 0)
    assert abs(w.sum() - 1.0) < 1e-12
    assert all(s.velocity > 0 for s in samples)


@pytest.mark.parametrize("kind", list(DistributionKind))
def test_mean_velocity_converges(kind):
    beam = ThermalBeam(distribution_kind=kind)
    means = []
    for n in (17, 33, 65):
        samples = discretize_velocities(beam, n)
        means.append(sum(s.velocity * s.weight for s in samples))
    assert abs(means[1] - means[0]) / means[0] < 0.005
    assert abs(means[2] - means[1]) / means[1] < 0.005


def test_discretization_is_deterministic(beam):
    assert discretize_velocities(beam, 33) == discretize_velocities(beam, 33)
