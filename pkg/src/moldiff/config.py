"""Run configuration: flat ``key = value unit`` files with command-line overrides.

Example::

    # default beamline
    L1 = 113 cm
    L2 = 133 cm
    s1_width = 10 um
    temperature = 900 K
    scan_min = 70 nm
    scan_max = 20 um

Every key can be overridden with a same-named flag (``--L1 "120 cm"``).
"""

import math
from dataclasses import dataclass, field

from moldiff.detector import DetectorResponse
from moldiff.errors import ConfigError, MoldiffError
from moldiff.physics import BeamlineGeometry, Particle, ThermalBeam
from moldiff.propagation import PropagationSettings
from moldiff.scan import NoiseSpec
from moldiff.units import parse_quantity

# key -> (kind, default text, help)
KEYS = {
    "s1_width": ("length", "10 um", "width of the source slit S1"),
    "L1": ("length", "113 cm", "distance S1 to S2"),
    "L2": ("length", "133 cm", "distance S2 to detector"),
    "dx": ("length", "1.4 um", "S2 width for the profile command"),
    "particle": ("name", "C70", "particle label"),
    "mass": ("mass", "840 amu", "particle mass"),
    "temperature": ("temperature", "900 K", "source temperature"),
    "mean_velocity": ("speed|auto", "auto", "mean forward velocity; auto = sqrt(3 kT/m)"),
    "velocity_spread": ("dimensionless", "0.6", "relative FWHM of the velocity distribution"),
    "distribution": ("choice:gaussian_in_v,effusive_flux", "gaussian_in_v", "velocity distribution"),
    "detector_fwhm": ("length", "10 um", "best detector resolution FWHM"),
    "detector_broadening": ("length", "3.5 um", "added to the detector FWHM"),
    "n_source_points": ("int", "65", "incoherent source points across S1"),
    "n_velocity_samples": ("int", "33", "velocity quadrature nodes"),
    "screen_halfwidth": ("length|auto", "auto", "screen half-width"),
    "screen_points": ("int", "2048", "screen samples"),
    "max_phase_step": ("angle", "0.25 pi", "largest phase advance between aperture nodes"),
    "scan_min": ("length", "70 nm", "smallest scanned S2 width"),
    "scan_max": ("length", "20 um", "largest scanned S2 width"),
    "scan_points": ("int", "40", "number of scanned widths"),
    "scan_spacing": ("choice:log,linear", "log", "scan spacing"),
    "quantum_max": ("length", "2 um", "largest width used for the uncertainty curve"),
    "slit_abs_err": ("length", "30 nm", "absolute slit-width (zero-point) error"),
    "slit_rel_err": ("dimensionless", "0.03", "relative slit-width (calibration) error"),
    "model": ("choice:wave,classical", "wave", "profile model"),
    "detector": ("choice:on,off", "on", "convolve the profile with the detector"),
    "noise": ("choice:on,off", "off", "add Poisson counting noise to detected profiles"),
    "noise_counts": ("int", "10000", "expected total counts per noisy profile"),
    "seed": ("int", "0", "noise seed"),
    "workers": ("int", "1", "parallel scan workers"),
    "out": ("path", "-", "output CSV path ('-' for stdout)"),
    "svg": ("bool", "off", "also write an SVG plot next to the CSV"),
}


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def read_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read(), source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc


def _convert(key, text):
    kind = KEYS[key][0]
    text = str(text).strip()
    if kind.endswith("|auto"):
        if text == "auto":
            return None
        kind = kind[: -len("|auto")]
    if kind in ("name", "path"):
        return text
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
    if kind == "bool":
        if text in ("on", "true", "yes", "1"):
            return True
        if text in ("off", "false", "no", "0"):
            return False
        raise ConfigError(f"{key}: expected on/off, got {text!r}")
    if kind.startswith("choice:"):
        choices = kind[len("choice:") :].split(",")
        if text not in choices:
            raise ConfigError(f"{key}: expected one of {choices}, got {text!r}")
        return text
    try:
        return parse_quantity(text, kind)
    except ConfigError as exc:
        raise ConfigError(f"{key}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    geometry: BeamlineGeometry
    beam: ThermalBeam
    detector: DetectorResponse
    settings: PropagationSettings
    scan_min: float
    scan_max: float
    scan_points: int
    scan_spacing: str
    quantum_max: float
    slit_abs_err: float
    slit_rel_err: float
    model: str
    detector_on: bool
    noise: NoiseSpec
    workers: int
    out: str
    svg: bool
    # Merged key -> text, in KEYS order, written into output headers.
    provenance: dict = field(default_factory=dict)

    @property
    def dx(self):
        return self.geometry.s2_width


def build_config(overrides=None):
    """Defaults, then ``overrides`` (already merged file + flag text values)."""
    text = {key: spec[1] for key, spec in KEYS.items()}
    for key, value in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        text[key] = str(value)
    v = {key: _convert(key, value) for key, value in text.items()}
    if v["scan_points"] < 1:
        raise ConfigError("scan_points must be >= 1")
    if v["scan_points"] > 1 and not v["scan_min"] < v["scan_max"]:
        raise ConfigError("scan_min must be smaller than scan_max")
    if v["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    try:
        geometry = BeamlineGeometry(v["s1_width"], v["dx"], v["L1"], v["L2"])
        beam = ThermalBeam(
            Particle(v["mass"] / parse_quantity("1 amu", "mass"), v["particle"]),
            v["temperature"],
            v["mean_velocity"],
            v["velocity_spread"],
            v["distribution"],
        )
        detector = DetectorResponse(v["detector_fwhm"], v["detector_broadening"])
        settings = PropagationSettings(
            v["n_source_points"],
            v["n_velocity_samples"],
            v["screen_halfwidth"],
            v["screen_points"],
            v["max_phase_step"],
        )
    except MoldiffError as exc:
        raise ConfigError(str(exc)) from None
    if not math.isfinite(v["quantum_max"]) or v["quantum_max"] <= 0:
        raise ConfigError("quantum_max must be positive")
    return RunConfig(
        geometry=geometry,
        beam=beam,
        detector=detector,
        settings=settings,
        scan_min=v["scan_min"],
        scan_max=v["scan_max"],
        scan_points=v["scan_points"],
        scan_spacing=v["scan_spacing"],
        quantum_max=v["quantum_max"],
        slit_abs_err=v["slit_abs_err"],
        slit_rel_err=v["slit_rel_err"],
        model=v["model"],
        detector_on=v["detector"] == "on",
        noise=NoiseSpec(v["noise"] == "on", v["noise_counts"], v["seed"]),
        workers=v["workers"],
        out=v["out"],
        svg=v["svg"],
        provenance=text,
    )
