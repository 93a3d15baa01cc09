"""Scanning-detector resolution function and counting noise."""

from dataclasses import dataclass

import numpy as np

from moldiff.errors import DomainError, PreconditionError

GAUSSIAN_FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))
# Kernel support and zero padding, in effective FWHM on each side.
KERNEL_HALF_SPAN = 4.0


@dataclass(frozen=True)
class DetectorResponse:
    """Detector line shape. The effective FWHM is ``fwhm + broadening``."""

    fwhm: float = 10e-6
    broadening: float = 3.5e-6
    shape: str = "gaussian"

    def __post_init__(self):
        if not self.fwhm > 0:
            raise DomainError(f"detector FWHM must be positive, got {self.fwhm}")
        if not self.broadening >= 0:
            raise DomainError(f"detector broadening must be >= 0, got {self.broadening}")
        if self.shape != "gaussian":
            raise DomainError(f"unsupported detector shape {self.shape!r}")

    @property
    def effective_fwhm(self):
        return self.fwhm + self.broadening

    def kernel(self, dx_grid):
        """Unit-sum kernel sampled on the grid pitch, spanning +-4 effective FWHM."""
        sigma = self.effective_fwhm / GAUSSIAN_FWHM_PER_SIGMA
        m = int(np.ceil(KERNEL_HALF_SPAN * self.effective_fwhm / dx_grid))
        offsets = np.arange(-m, m + 1) * dx_grid
        g = np.exp(-0.5 * (offsets / sigma) ** 2)
        return g / g.sum()


def convolve_detector(profile, det):
    """Detected profile ``D * M`` on the same grid as ``profile``.

    The input is treated as zero outside its window (equivalent to zero padding
    by the kernel half-span), and the kernel has unit area so the integral is
    preserved for profiles that vanish near the window edges.
    """
    if det.effective_fwhm < 3.0 * profile.dx_grid:
        raise PreconditionError(
            f"detector FWHM {det.effective_fwhm:.3g} m is under-resolved on a "
            f"{profile.dx_grid:.3g} m grid; use a grid pitch <= {det.effective_fwhm / 3:.3g} m"
        )
    g = det.kernel(profile.dx_grid)
    m = g.size // 2
    full = np.convolve(profile.intensity, g, mode="full")
    out = full[m : m + len(profile)]
    return profile.with_intensity(np.maximum(out, 0.0))


def add_counting_noise(profile, total_counts, seed):
    """Poisson counts per bin with expected total ``total_counts``."""
    if total_counts < 1:
        raise DomainError(f"total_counts must be >= 1, got {total_counts}")
    total = profile.intensity.sum()
    if not total > 0:
        raise DomainError("cannot draw counts from an all-zero profile")
    mean = profile.intensity * (total_counts / total)
    rng = np.random.default_rng(seed)
    return profile.with_intensity(rng.poisson(mean).astype(float))
