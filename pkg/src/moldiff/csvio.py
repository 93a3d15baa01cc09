"""CSV emission and ingestion.

Files are comma-separated with ``#``-prefixed comment lines carrying the run
configuration, followed by one column-name row and the data rows. Floats are
written with ten significant digits so that identical runs give identical bytes.
"""

import math
import sys
from contextlib import contextmanager

import numpy as np

from moldiff.errors import DataFormatError
from moldiff.profile import Profile
from moldiff.scan import ScanRow

X_UNITS = {"x_m": 1.0, "x_mm": 1e-3, "x_um": 1e-6, "x_nm": 1e-9}


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value.replace(",", ";").replace("\n", " ")
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.10g}"


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def write_csv(path, columns, rows, comments=None):
    """Write ``rows`` (sequences aligned with ``columns``) after ``# key = value`` comments."""
    with _open_out(path) as fh:
        for key, value in (comments or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_table(path):
    """Return ``(columns, rows, line_numbers)``; comment and blank lines are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except UnicodeDecodeError as exc:
        raise DataFormatError(f"{path} is not UTF-8 text") from exc
    columns, rows, numbers = None, [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if columns is None and not _is_number(cells[0]):
            columns = cells
            continue
        rows.append(cells)
        numbers.append(lineno)
    return columns, rows, numbers


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _float(cell, lineno, what):
    try:
        return float(cell)
    except ValueError:
        raise DataFormatError(f"cannot parse {what} {cell!r} as a number", line=lineno) from None


def ingest_profile(path):
    """Read a two-column ``x, intensity`` CSV and resample it onto a uniform grid.

    ``x`` is in micrometres unless the header names another unit (``x_m``,
    ``x_mm``, ``x_nm``). Already-uniform input is kept sample for sample; other
    input is linearly interpolated onto as many equally spaced points.
    """
    columns, rows, numbers = read_table(path)
    scale = 1e-6
    if columns:
        scale = X_UNITS.get(columns[0], 1e-6)
    xs, ys = [], []
    for cells, lineno in zip(rows, numbers):
        if len(cells) < 2:
            raise DataFormatError("expected two columns: x, intensity", line=lineno)
        xs.append(_float(cells[0], lineno, "x"))
        ys.append(_float(cells[1], lineno, "intensity"))
    if len(xs) < 8:
        raise DataFormatError(f"need at least 8 samples, found {len(xs)}")
    x = np.asarray(xs) * scale
    y = np.asarray(ys)
    steps = np.diff(x)
    if np.any(steps <= 0):
        bad = int(np.flatnonzero(steps <= 0)[0]) + 1
        raise DataFormatError("x values must be strictly increasing", line=numbers[bad])
    if np.any(y < 0):
        bad = int(np.flatnonzero(y < 0)[0])
        raise DataFormatError("intensity must be nonnegative", line=numbers[bad])
    pitch = (x[-1] - x[0]) / (x.size - 1)
    if np.allclose(steps, pitch, rtol=1e-6, atol=0):
        return Profile(x[0], pitch, y)
    grid = x[0] + pitch * np.arange(x.size)
    grid[-1] = x[-1]
    return Profile(x[0], pitch, np.interp(grid, x, y))


def write_profile(path, profile, comments=None):
    rows = zip(profile.x / 1e-6, profile.intensity)
    write_csv(path, ["x_um", "intensity"], rows, comments)


SCAN_COLUMNS = [
    "dx_um",
    "fwhm_wave_um",
    "fwhm_classical_um",
    "fwhm_wave_detected_um",
    "fwhm_classical_detected_um",
    "fwhm_wave_detected_err_um",
    "method",
    "error",
]


def scan_row_cells(row):
    um = 1e-6
    return [
        row.dx / um,
        row.fwhm_wave / um,
        row.fwhm_classical / um,
        row.fwhm_wave_detected / um,
        row.fwhm_classical_detected / um,
        row.fwhm_wave_detected_err / um,
        row.method,
        row.error or "",
    ]


def ingest_scan(path):
    """Read a scan CSV (at least ``dx_um`` and ``fwhm_wave_detected_um``) into rows.

    ``fwhm_exp_um`` is accepted as an alias of ``fwhm_wave_detected_um``; missing
    optional columns are left unset so the analysis falls back to the analytic
    classical width.
    """
    columns, rows, numbers = read_table(path)
    if not columns:
        raise DataFormatError("scan CSV needs a header row")
    index = {name: i for i, name in enumerate(columns)}
    if "fwhm_exp_um" in index and "fwhm_wave_detected_um" not in index:
        index["fwhm_wave_detected_um"] = index["fwhm_exp_um"]
    for required in ("dx_um", "fwhm_wave_detected_um"):
        if required not in index:
            raise DataFormatError(f"scan CSV lacks column {required!r}")

    def get(cells, name, lineno):
        i = index.get(name)
        if i is None or i >= len(cells) or cells[i] == "":
            return None
        return _float(cells[i], lineno, name) * 1e-6

    out = []
    for cells, lineno in zip(rows, numbers):
        error = cells[index["error"]] if "error" in index and index["error"] < len(cells) else ""
        dx = get(cells, "dx_um", lineno)
        if dx is None or not dx > 0:
            raise DataFormatError("dx_um must be a positive number", line=lineno)
        fwhm = get(cells, "fwhm_wave_detected_um", lineno)
        if fwhm is None and not error:
            raise DataFormatError("missing fwhm_wave_detected_um", line=lineno)
        classical = get(cells, "fwhm_classical_detected_um", lineno)
        err = get(cells, "fwhm_wave_detected_err_um", lineno)
        out.append(
            ScanRow(
                dx=dx,
                fwhm_wave_detected=float("nan") if fwhm is None else fwhm,
                fwhm_classical_detected=float("nan") if classical is None else classical,
                fwhm_wave_detected_err=0.0 if err is None else err,
                error=error or None,
            )
        )
    return sorted(out, key=lambda r: r.dx)


UNCERTAINTY_COLUMNS = ["dx_um", "dx_err_um", "dp_SI", "dp_err_SI", "product_over_h", "error"]


def uncertainty_cells(point):
    return [
        point.slit_width / 1e-6,
        point.slit_width_err / 1e-6,
        point.dp,
        point.dp_err,
        point.product_over_h,
        point.error or "",
    ]
