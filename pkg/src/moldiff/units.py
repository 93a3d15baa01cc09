"""Unit-suffixed quantity parsing and formatting.

All internal values are SI. User-facing text takes a number followed by a unit
suffix, e.g. ``"113 cm"``, ``"1.4 um"``, ``"70nm"``, ``"900 K"``, ``"840 amu"``.
"""

import re

from scipy.constants import atomic_mass

from moldiff.errors import ConfigError

LENGTH = {
    "m": 1.0,
    "cm": 1e-2,
    "mm": 1e-3,
    "um": 1e-6,
    "μm": 1e-6,
    "µm": 1e-6,
    "micron": 1e-6,
    "nm": 1e-9,
    "pm": 1e-12,
}
MASS = {"kg": 1.0, "amu": atomic_mass, "u": atomic_mass, "Da": atomic_mass}
SPEED = {"m/s": 1.0, "km/s": 1e3}
TEMPERATURE = {"K": 1.0}
ANGLE = {"rad": 1.0, "mrad": 1e-3, "pi": 3.141592653589793}
DIMENSIONLESS = {"": 1.0}

KINDS = {
    "length": LENGTH,
    "mass": MASS,
    "speed": SPEED,
    "temperature": TEMPERATURE,
    "angle": ANGLE,
    "dimensionless": DIMENSIONLESS,
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(text, kind):
    """Parse ``"<number> <unit>"`` into an SI float.

    A bare number is accepted only for ``kind="dimensionless"`` and ``kind="angle"``
    (radians); every dimensional quantity must carry its unit.
    """
    if isinstance(text, (int, float)):
        if kind in ("dimensionless", "angle"):
            return float(text)
        raise ConfigError(f"{kind} value {text!r} needs a unit suffix")
    match = _QUANTITY.match(str(text))
    if match is None:
        raise ConfigError(f"cannot parse {text!r} as a {kind}")
    value, unit = float(match.group(1)), match.group(2)
    table = KINDS[kind]
    if unit == "" and kind == "angle":
        return value
    if unit not in table:
        allowed = ", ".join(repr(u) for u in table if u)
        raise ConfigError(f"unit {unit!r} is not a {kind} unit (expected one of {allowed})")
    return value * table[unit]


def format_length(value, unit="um"):
    return f"{value / LENGTH[unit]:.10g} {unit}"
