"""Geometric shadow of the two-slit collimator.

Straight rays from a uniformly filled S1 through S2 land on the screen with a
trapezoidal density: the convolution of the projected aperture
``w1 = dx (L1 + L2) / L1`` with the projected source ``w2 = S1 L2 / L1``.
"""

import numpy as np

from moldiff.errors import DomainError


def shadow_widths(geom):
    """Return ``(w1, w2)``, the projected aperture and projected source widths [m]."""
    w1 = geom.s2_width * (geom.L1 + geom.L2) / geom.L1
    w2 = geom.s1_width * geom.L2 / geom.L1
    return w1, w2


def classical_fwhm(geom):
    """FWHM of the shadow, ``max(w1, w2)``."""
    return max(shadow_widths(geom))


def classical_profile(geom, grid):
    """Unit-peak trapezoid ``rect(w1) * rect(w2)`` centred on the axis."""
    wide, narrow = sorted(shadow_widths(geom), reverse=True)
    x = grid.x
    intensity = np.clip((0.5 * (wide + narrow) - np.abs(x)) / narrow, 0.0, 1.0)
    return grid.profile(intensity)


def ray_trace_hits(geom, n_rays, seed=0):
    """Screen positions of ``n_rays`` straight rays through S1 and S2.

    Rays are drawn uniformly over (source point, aperture point) pairs, which at
    paraxial angles is uniform emission per unit angle from every point of S1.
    """
    if n_rays < 1:
        raise DomainError("need at least one ray")
    rng = np.random.default_rng(seed)
    s = rng.uniform(-0.5 * geom.s1_width, 0.5 * geom.s1_width, n_rays)
    xi = rng.uniform(-0.5 * geom.s2_width, 0.5 * geom.s2_width, n_rays)
    return xi + (xi - s) * geom.L2 / geom.L1
