"""Command-line front end.

    moldiff profile     --dx "1.4 um" [--model wave|classical] [--detector on|off]
    moldiff scan        [--scan_min "70 nm" --scan_max "20 um" --scan_points 40]
    moldiff uncertainty [--input scan.csv]
    moldiff ingest      profile.csv

Global flags: --config PATH, --out PATH, --svg, --workers N, --seed N, plus one
flag per configuration key. Exit codes: 0 success, 1 usage or configuration
error, 2 physics-precondition error, 3 I/O or data-format error.
"""

import argparse
import logging
import sys

from moldiff import svg
from moldiff.analysis import fwhm_crossing, uncertainty_curve
from moldiff.config import KEYS, build_config, read_config_file
from moldiff.csvio import (
    SCAN_COLUMNS,
    UNCERTAINTY_COLUMNS,
    ingest_profile,
    ingest_scan,
    scan_row_cells,
    uncertainty_cells,
    write_csv,
    write_profile,
)
from moldiff.detector import add_counting_noise, convolve_detector
from moldiff.errors import ConfigError, DataFormatError, PhysicsError
from moldiff.physics import CONSTANTS
from moldiff.propagation import beam_screen, incoherent_beam_profile
from moldiff.scan import run_scan, scan_widths
from moldiff.shadow import classical_profile

log = logging.getLogger("moldiff")

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options():
    common = _Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, metavar="PATH",
                        help="flat key = value configuration file")
    for key, (kind, default, help_text) in KEYS.items():
        if kind == "bool":
            common.add_argument(f"--{key}", action="store_const", const="on",
                                default=argparse.SUPPRESS, help=help_text)
        else:
            common.add_argument(f"--{key}", default=argparse.SUPPRESS, metavar="VALUE",
                                help=f"{help_text} (default: {default})")
    return common


def build_parser():
    common = _common_options()
    parser = _Parser(prog="moldiff", description=__doc__.split("\n\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    sub.add_parser("profile", parents=[common], help="one beam profile in the detection plane")
    sub.add_parser("scan", parents=[common], help="beam width versus slit width")
    p = sub.add_parser("uncertainty", parents=[common], help="momentum spread and dx*dp/h")
    p.add_argument("--input", default=None, metavar="SCAN_CSV",
                   help="analyse an existing scan CSV instead of simulating")
    p = sub.add_parser("ingest", parents=[common], help="resample a measured profile CSV")
    p.add_argument("path")
    return parser


def load_config(ns):
    values = {}
    config_path = getattr(ns, "config", None)
    if config_path:
        values.update(read_config_file(config_path))
    for key in KEYS:
        if hasattr(ns, key):
            values[key] = getattr(ns, key)
    return build_config(values)


# Execution-only keys; they must not change output bytes.
_RUNTIME_KEYS = ("workers", "out", "svg")


def _comments(config, command):
    physics = {k: v for k, v in config.provenance.items() if k not in _RUNTIME_KEYS}
    return {"command": command, **physics}


def cmd_profile(config):
    """Write the wave or classical profile at ``config.dx``; returns the profile."""
    geom, beam = config.geometry, config.beam
    grid = beam_screen(geom, beam, config.settings)
    if config.model == "wave":
        profile = incoherent_beam_profile(geom, beam, config.settings, grid=grid)
    else:
        profile = classical_profile(geom, grid)
    if config.detector_on:
        profile = convolve_detector(profile, config.detector)
        if config.noise.enabled:
            profile = add_counting_noise(profile, config.noise.total_counts, config.noise.seed)
    profile = profile.normalized()
    write_profile(config.out, profile, _comments(config, "profile"))
    log.info("FWHM = %.4g um", fwhm_crossing(profile).fwhm / 1e-6)
    if config.svg:
        label = f"{config.model}, detector {'on' if config.detector_on else 'off'}"
        svg.plot(
            [svg.Series(list(profile.x / 1e-6), list(profile.intensity), label)],
            svg.svg_path_for(config.out, "profile.svg"),
            title=f"dx = {geom.s2_width / 1e-6:.4g} um",
            xlabel="x (um)",
            ylabel="intensity (peak = 1)",
        )
    return profile


def cmd_scan(config):
    widths = scan_widths(config.scan_min, config.scan_max, config.scan_points, config.scan_spacing)
    rows = run_scan(widths, config.geometry, config.beam, config.detector, config.settings,
                    config.noise, config.workers)
    write_csv(config.out, SCAN_COLUMNS, (scan_row_cells(r) for r in rows), _comments(config, "scan"))
    for row in rows:
        if row.error:
            log.warning("dx = %.4g um: %s", row.dx / 1e-6, row.error)
    if config.svg:
        um = 1e-6
        dxs = [r.dx / um for r in rows]
        svg.plot(
            [
                svg.Series(dxs, [r.fwhm_wave_detected / um for r in rows], "wave, detected"),
                svg.Series(dxs, [r.fwhm_classical_detected / um for r in rows],
                           "classical, detected", dashed=True),
                svg.Series(dxs, [r.fwhm_wave / um for r in rows], "wave"),
                svg.Series(dxs, [r.fwhm_classical / um for r in rows], "classical", dashed=True),
            ],
            svg.svg_path_for(config.out, "scan.svg"),
            title="beam width in the detection plane",
            xlabel="slit width dx (um)",
            ylabel="FWHM (um)",
            logx=True,
        )
    return rows


def cmd_uncertainty(config, input_path=None):
    if input_path:
        rows = [r for r in ingest_scan(input_path) if r.dx <= config.quantum_max]
    else:
        hi = min(config.scan_max, config.quantum_max)
        if config.scan_min > hi:
            widths = []
        else:
            points = config.scan_points if hi == config.scan_max else _points_below(config, hi)
            widths = scan_widths(config.scan_min, hi, points, config.scan_spacing) if points else []
        rows = run_scan(widths, config.geometry, config.beam, config.detector, config.settings,
                        config.noise, config.workers)
    points = uncertainty_curve(rows, config.beam, config.geometry, config.detector,
                               config.slit_abs_err, config.slit_rel_err)
    if not points:
        log.warning("no slit widths in the quantum regime (dx <= %.4g um)", config.quantum_max / 1e-6)
    write_csv(config.out, UNCERTAINTY_COLUMNS, (uncertainty_cells(p) for p in points),
              _comments(config, "uncertainty"))
    for p in points:
        if p.error:
            log.warning("dx = %.4g um: %s", p.slit_width / 1e-6, p.error)
    if config.svg:
        good = [p for p in points if p.error is None]
        dxs = [p.slit_width for p in points] or [config.scan_min, config.quantum_max]
        lo, hi = min(dxs), max(dxs)
        overlay = [lo * (hi / lo) ** (i / 100) for i in range(101)] if hi > lo else [lo]
        svg.plot(
            [
                svg.Series([p.slit_width / 1e-6 for p in good], [p.dp for p in good],
                           "extracted dp", style="points"),
                svg.Series([d / 1e-6 for d in overlay], [CONSTANTS.h / d for d in overlay], "h / dx"),
            ],
            svg.svg_path_for(config.out, "uncertainty.svg"),
            title="momentum spread versus slit width",
            xlabel="slit width dx (um)",
            ylabel="dp (kg m/s)",
            logx=True,
            logy=True,
        )
    return points


def _points_below(config, hi):
    """Keep the scan's own grid spacing when the quantum cut truncates it."""
    widths = scan_widths(config.scan_min, config.scan_max, config.scan_points, config.scan_spacing)
    return int(sum(1 for w in widths if w <= hi * (1 + 1e-12)))


def cmd_ingest(config, path):
    profile = ingest_profile(path)
    write_profile(config.out, profile, {"command": "ingest", "source": path})
    log.info("FWHM = %.4g um", fwhm_crossing(profile).fwhm / 1e-6)
    return profile


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = load_config(ns)
        if ns.command == "profile":
            cmd_profile(config)
        elif ns.command == "scan":
            cmd_scan(config)
        elif ns.command == "uncertainty":
            cmd_uncertainty(config, ns.input)
        elif ns.command == "ingest":
            cmd_ingest(config, ns.path)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except PhysicsError as exc:
        log.error("%s", exc)
        return EXIT_PHYSICS
    except (DataFormatError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
