import math

import numpy as np
import pytest

from moldiff import BeamlineGeometry, DetectorResponse, Profile, ThermalBeam

ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def geom():
    return BeamlineGeometry()


@pytest.fixture
def beam():
    return ThermalBeam()


@pytest.fixture
def det():
    return DetectorResponse()


def gaussian_profile(fwhm, pitch, n=2049, centre=0.0, offset=0.0, amp=1.0):
    sigma = fwhm / (2 * math.sqrt(2 * math.log(2)))
    x = (np.arange(n) - (n - 1) / 2) * pitch
    return Profile(x[0], pitch, amp * np.exp(-0.5 * ((x - centre) / sigma) ** 2) + offset)


def trapezoid_profile(w_wide, w_narrow, pitch, n=4001):
    x = (np.arange(n) - (n - 1) / 2) * pitch
    y = np.clip((0.5 * (w_wide + w_narrow) - np.abs(x)) / w_narrow, 0, 1)
    return Profile(x[0], pitch, y)
