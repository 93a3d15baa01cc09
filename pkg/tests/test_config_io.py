import math

import numpy as np
import pytest

from moldiff import fwhm_crossing
from moldiff.config import KEYS, build_config, parse_config_text, read_config_file
from moldiff.csvio import format_value, ingest_profile, ingest_scan, read_table, write_csv, write_profile
from moldiff.errors import ConfigError, DataFormatError
from moldiff.units import parse_quantity

from conftest import gaussian_profile


@pytest.mark.parametrize(
    "text,kind,expected",
    [
        ("113 cm", "length", 1.13),
        ("1.4 um", "length", 1.4e-6),
        ("1.4 µm", "length", 1.4e-6),
        ("70nm", "length", 70e-9),
        ("840 amu", "mass", 840 * 1.66053906660e-27),
        ("900 K", "temperature", 900.0),
        ("163.5 m/s", "speed", 163.5),
        ("0.25 pi", "angle", math.pi / 4),
        ("0.6", "dimensionless", 0.6),
    ],
)
def test_parse_quantity(text, kind, expected):
    assert parse_quantity(text, kind) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("text,kind", [("113", "length"), ("3 furlongs", "length"), ("abc", "mass"), ("5 K", "length")])
def test_parse_quantity_rejects(text, kind):
    with pytest.raises(ConfigError):
        parse_quantity(text, kind)


def test_defaults_build_the_standard_beamline():
    c = build_config()
    assert c.geometry.L1 == pytest.approx(1.13)
    assert c.geometry.L2 == pytest.approx(1.33)
    assert c.geometry.s1_width == pytest.approx(10e-6)
    assert c.detector.effective_fwhm == pytest.approx(13.5e-6)
    assert c.beam.mean_velocity == pytest.approx(163.478, rel=1e-4)
    assert c.settings.max_phase_step == pytest.approx(math.pi / 4)
    assert c.quantum_max == pytest.approx(2e-6)
    assert list(c.provenance) == list(KEYS)


def test_config_text_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# beamline\nL1 = 120 cm  # longer\n\ndx = 2 um\n", encoding="utf-8")
    values = read_config_file(path)
    assert values == {"L1": "120 cm", "dx": "2 um"}
    c = build_config({**values, "dx": "3 um"})
    assert c.geometry.L1 == pytest.approx(1.2)
    assert c.dx == pytest.approx(3e-6)


@pytest.mark.parametrize(
    "text", ["nonsense line", "unknown_key = 3", "L1 = 3 parsecs"]
)
def test_bad_config_is_rejected(text):
    with pytest.raises(ConfigError):
        build_config(parse_config_text(text))


@pytest.mark.parametrize(
    "overrides",
    [{"scan_points": "0"}, {"scan_min": "30 um"}, {"workers": "0"}, {"L1": "-1 m"},
     {"model": "quantum"}, {"n_source_points": "many"}, {"quantum_max": "0 um"}],
)
def test_invalid_values_are_config_errors(overrides):
    with pytest.raises(ConfigError):
        build_config(overrides)


def test_missing_config_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "absent.cfg")


def test_format_value():
    assert format_value(1.0 / 3.0) == "0.3333333333"
    assert format_value(float("nan")) == "nan"
    assert format_value(None) == ""
    assert format_value(7) == "7"
    assert format_value("a,b") == "a;b"


def test_profile_round_trip_within_one_pitch(tmp_path):
    p = gaussian_profile(17e-6, 0.13e-6, n=1001)
    path = tmp_path / "p.csv"
    write_profile(str(path), p, {"command": "profile"})
    back = ingest_profile(str(path))
    assert len(back) == len(p)
    assert back.dx_grid == pytest.approx(p.dx_grid, rel=1e-8)
    assert abs(fwhm_crossing(back).fwhm - fwhm_crossing(p).fwhm) <= p.dx_grid


def test_ingest_skips_comments_and_honours_units(tmp_path):
    path = tmp_path / "m.csv"
    x = np.linspace(-50, 50, 101)
    y = np.exp(-0.5 * (x / 8) ** 2)
    lines = ["# measured", "x_nm,signal", "# mid-file note"]
    lines += [f"{1000 * a},{b}" for a, b in zip(x, y)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    p = ingest_profile(str(path))
    assert p.x0 == pytest.approx(-50e-6)
    assert p.dx_grid == pytest.approx(1e-6)


def test_non_uniform_input_is_resampled_without_width_bias(tmp_path):
    rng = np.random.default_rng(2)
    x = np.sort(rng.uniform(-60, 60, 1500))
    y = np.exp(-0.5 * (x / (17 / 2.3548)) ** 2)
    path = tmp_path / "nu.csv"
    path.write_text("x_um,intensity\n" + "\n".join(f"{a:.17g},{b:.17g}" for a, b in zip(x, y)), encoding="utf-8")
    p = ingest_profile(str(path))
    assert len(p) == 1500
    assert fwhm_crossing(p).fwhm == pytest.approx(17e-6, rel=0.005)


@pytest.mark.parametrize(
    "body,line",
    [
        ("x_um,intensity\n" + "\n".join(f"{i},1" for i in range(9)) + "\n9,abc\n", 11),
        ("x_um,intensity\n" + "\n".join(f"{i},1" for i in range(9)) + "\n3,1\n", 11),
        ("x_um,intensity\n" + "\n".join(f"{i},1" for i in range(9)) + "\n10,-1\n", 11),
        ("x_um,intensity\n" + "\n".join(f"{i},1" for i in range(9)) + "\n10\n", 11),
    ],
)
def test_malformed_profiles_report_line(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(DataFormatError) as info:
        ingest_profile(str(path))
    assert info.value.line == line


def test_too_few_samples(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("x_um,intensity\n0,1\n1,2\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="at least 8"):
        ingest_profile(str(path))


def test_ingest_scan_with_alias_and_missing_columns(tmp_path):
    path = tmp_path / "scan.csv"
    path.write_text("# measured widths\ndx_um,fwhm_exp_um\n1.4,17\n0.07,43\n", encoding="utf-8")
    rows = ingest_scan(str(path))
    assert [r.dx for r in rows] == pytest.approx([70e-9, 1.4e-6])
    assert rows[0].fwhm_wave_detected == pytest.approx(43e-6)
    assert math.isnan(rows[0].fwhm_classical_detected)


def test_ingest_scan_requires_columns(tmp_path):
    path = tmp_path / "scan.csv"
    path.write_text("dx_um,other\n1,2\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="fwhm_wave_detected_um"):
        ingest_scan(str(path))


def test_write_csv_layout(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(str(path), ["a", "b"], [(1.5, "x")], {"command": "test"})
    assert path.read_text() == "# command = test\na,b\n1.5,x\n"
    columns, rows, numbers = read_table(str(path))
    assert columns == ["a", "b"] and rows == [["1.5", "x"]] and numbers == [3]
