import math
import subprocess
import sys

import pytest

from moldiff import fwhm_crossing
from moldiff.cli import EXIT_IO, EXIT_OK, EXIT_PHYSICS, EXIT_USAGE, main
from moldiff.csvio import SCAN_COLUMNS, UNCERTAINTY_COLUMNS, ingest_profile, read_table

FAST = ["--n_source_points", "5", "--n_velocity_samples", "3", "--screen_points", "512"]


def run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, *FAST, "--out", str(out)])
    return code, out


def test_profile_command_writes_unit_peak_profile(tmp_path):
    code, out = run(tmp_path, "profile", "--dx", "1.4 um")
    assert code == EXIT_OK
    text = out.read_text()
    assert text.startswith("# command = profile\n")
    assert "# dx = 1.4 um" in text
    assert "workers" not in text and "out =" not in text
    p = ingest_profile(str(out))
    assert p.peak == pytest.approx(1.0)


def test_profile_classical_model_without_detector(tmp_path):
    code, out = run(tmp_path, "profile", "--model", "classical", "--detector", "off", "--dx", "20 um")
    assert code == EXIT_OK
    assert fwhm_crossing(ingest_profile(str(out))).fwhm == pytest.approx(43.54e-6, rel=0.01)


def test_profile_svg(tmp_path):
    code, out = run(tmp_path, "profile", "--svg")
    assert code == EXIT_OK
    svg = out.with_suffix(".svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dx = 5 um\nL2 = 100 cm\n", encoding="utf-8")
    code, out = run(tmp_path, "profile", "--config", str(cfg), "--dx", "2 um")
    assert code == EXIT_OK
    text = out.read_text()
    assert "# dx = 2 um" in text and "# L2 = 100 cm" in text


@pytest.mark.parametrize(
    "args",
    [["profile", "--dx", "1.4"], ["profile", "--L1", "3 parsecs"], ["profile", "--model", "x"], ["bogus"], []],
)
def test_usage_and_config_errors_exit_1(tmp_path, args):
    with pytest.raises(SystemExit) as info:
        code = main(args + ["--out", str(tmp_path / "o.csv")])
        raise SystemExit(code)
    assert info.value.code == EXIT_USAGE


def test_physics_precondition_exits_2(tmp_path):
    code, _ = run(tmp_path, "profile", "--screen_halfwidth", "2 mm", "--screen_points", "64")
    assert code == EXIT_PHYSICS


def test_ingest_errors_exit_3(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x_um,intensity\n1,2\n", encoding="utf-8")
    assert main(["ingest", str(bad), "--out", str(tmp_path / "o.csv")]) == EXIT_IO
    assert main(["ingest", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "o.csv")]) == EXIT_IO


def test_ingest_command_resamples(tmp_path):
    src = tmp_path / "m.csv"
    xs = [i * i / 50 - 50 for i in range(0, 71)]
    src.write_text("x_um,intensity\n" + "".join(f"{x},{math.exp(-x * x / 200)}\n" for x in xs), encoding="utf-8")
    code = main(["ingest", str(src), "--out", str(tmp_path / "o.csv")])
    assert code == EXIT_OK
    columns, rows, _ = read_table(str(tmp_path / "o.csv"))
    assert columns == ["x_um", "intensity"] and len(rows) == len(xs)


def test_scan_command_layout(tmp_path):
    code, out = run(tmp_path, "scan", "--scan_min", "0.5 um", "--scan_max", "10 um", "--scan_points", "3")
    assert code == EXIT_OK
    columns, rows, _ = read_table(str(out))
    assert columns == SCAN_COLUMNS
    assert [float(r[0]) for r in rows] == pytest.approx([0.5, math.sqrt(5), 10.0])
    assert all(r[-1] == "" for r in rows)


def test_scan_output_identical_across_worker_counts(tmp_path):
    args = ["scan", "--scan_min", "0.2 um", "--scan_max", "8 um", "--scan_points", "4",
            "--noise", "on", "--seed", "4"]
    _, one = run(tmp_path, *args, "--workers", "1", name="w1.csv")
    _, two = run(tmp_path, *args, "--workers", "2", name="w2.csv")
    assert one.read_bytes() == two.read_bytes()


def test_scan_records_per_point_errors(tmp_path):
    code, out = run(tmp_path, "scan", "--scan_min", "1 um", "--scan_max", "20 um", "--scan_points", "2",
                    "--screen_halfwidth", "15 um")
    assert code == EXIT_OK
    _, rows, _ = read_table(str(out))
    assert rows[0][-1] == "" and rows[1][-1].startswith("ShapeError")


def test_uncertainty_from_measured_widths(tmp_path):
    scan = tmp_path / "measured.csv"
    scan.write_text("dx_um,fwhm_exp_um\n0.07,43\n1.4,17\n", encoding="utf-8")
    code = main(["uncertainty", "--input", str(scan), "--out", str(tmp_path / "u.csv")])
    assert code == EXIT_OK
    columns, rows, _ = read_table(str(tmp_path / "u.csv"))
    assert columns == UNCERTAINTY_COLUMNS
    first = dict(zip(columns, rows[0]))
    assert float(first["dp_SI"]) == pytest.approx(7.517e-27, rel=2e-3)
    assert float(first["product_over_h"]) == pytest.approx(0.794, abs=0.002)
    assert "exceeds" in rows[1][-1]


def test_uncertainty_simulated_keeps_quantum_regime(tmp_path):
    code, out = run(tmp_path, "uncertainty", "--scan_min", "0.1 um", "--scan_max", "20 um",
                    "--scan_points", "6", "--svg")
    assert code == EXIT_OK
    _, rows, _ = read_table(str(out))
    dxs = [float(r[0]) for r in rows]
    assert dxs and max(dxs) <= 2.0
    assert out.with_suffix(".svg").exists()


def test_empty_quantum_regime_is_not_an_error(tmp_path):
    code, out = run(tmp_path, "uncertainty", "--scan_min", "5 um", "--scan_max", "20 um", "--scan_points", "3")
    assert code == EXIT_OK
    columns, rows, _ = read_table(str(out))
    assert columns == UNCERTAINTY_COLUMNS and rows == []


def test_console_script_entry_point():
    result = subprocess.run([sys.executable, "-m", "moldiff.cli", "--help"], capture_output=True, text=True)
    assert result.returncode == 0
    assert "uncertainty" in result.stdout
