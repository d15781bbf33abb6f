import json
import math

import numpy as np
import pytest

from wigner_bounds import serialize
from wigner_bounds.cli import main, parse_angle, read_config
from wigner_bounds.errors import ConfigError
from wigner_bounds.sweep import SweepConfig, check_envelope, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


def comments(text):
    return dict(ln[2:].split(": ", 1) for ln in text.splitlines() if ln.startswith("# "))


@pytest.mark.parametrize("text, value", [
    ("pi", math.pi),
    ("pi/4", math.pi / 4),
    ("-pi/3", -math.pi / 3),
    ("5pi/8", 5 * math.pi / 8),
    ("3*pi/4", 3 * math.pi / 4),
    ("0.25", 0.25),
    ("-1e-3", -1e-3),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == value


@pytest.mark.parametrize("text", ["pi/0", "nan", "inf", "two", "pi/x"])
def test_parse_angle_rejects(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_classical(capsys):
    code, out, _ = run(capsys, "classical")
    assert code == 0
    lines = data_lines(out)
    assert lines[0] == "x1,x2,y2,y3,w"
    assert len(lines) == 17
    assert {ln.rsplit(",", 1)[1] for ln in lines[1:]} == {"0", "1"}
    assert comments(out) == {"w_min": "0", "w_max": "1"}


def test_classical_json(capsys):
    code, out, _ = run(capsys, "classical", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and (doc["w_min"], doc["w_max"]) == (0, 1) and len(doc["rows"]) == 16


def test_bounds_default(capsys):
    code, out, _ = run(capsys, "bounds")
    assert code == 0
    lines = data_lines(out)
    assert lines[0] == "theta,lambda_min,lambda_max" and len(lines) == 1001
    c = comments(out)
    assert float(c["global_min"].split("value=")[1]) == pytest.approx((1 - math.sqrt(2)) / 2, abs=1e-4)
    assert float(c["global_max"].split("value=")[1]) == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-4)


def test_bounds_single_point(capsys):
    code, out, _ = run(capsys, "bounds", "--theta-min", "0", "--theta-max", "0")
    assert code == 0
    assert data_lines(out)[1:] == ["0,0,1"]


def test_bounds_general_json(capsys):
    code, out, _ = run(capsys, "bounds", "--parametrization", "general", "--grid-steps", "21", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 441
    assert doc["extrema"]["global_min"]["value"] == pytest.approx((1 - math.sqrt(2)) / 2, abs=1e-4)
    assert doc["extrema"]["global_max"]["value"] == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-4)


def test_sweep_cells(capsys):
    code, out, _ = run(capsys, "sweep", "--theta-min", "pi/6", "--theta-max", "pi/4", "--theta-steps", "2",
                       "--xi-min", "pi/8", "--xi-max", "pi/2", "--xi-steps", "2")
    assert code == 0
    grid = serialize.parse_sweep(out)
    table = {(round(t, 6), round(x, 6)): w for t, x, w in grid.rows()}
    assert table[(round(math.pi / 4, 6), round(math.pi / 8, 6))] == pytest.approx(1.20711, abs=1e-4)
    assert table[(round(math.pi / 6, 6), round(math.pi / 2, 6))] == pytest.approx(-0.125, abs=1e-10)


def test_sweep_zero_visibility(capsys):
    code, out, _ = run(capsys, "sweep", "--theta-min", "pi/6", "--theta-max", "pi/4", "--theta-steps", "2",
                       "--xi-steps", "3", "--visibility", "0")
    assert code == 0
    assert np.allclose(serialize.parse_sweep(out).w, 0.5, atol=1e-12)


def test_sweep_row_order_and_count():
    grid = run_sweep(SweepConfig(theta_steps=3, xi_steps=4))
    assert len(grid) == 12
    assert list(grid.theta[:4]) == [0.0] * 4 and list(grid.xi[:4]) == list(np.linspace(0, math.pi, 4))


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(fmt):
    cfg = SweepConfig(theta_steps=13, xi_steps=11, visibility=0.9)
    grid = run_sweep(cfg)
    text = serialize.sweep_text(grid, fmt, cfg)
    back = serialize.parse_sweep(text)
    for got, want in ((back.theta, grid.theta), (back.xi, grid.xi), (back.w, grid.w)):
        assert [float(f"{v:.12g}") for v in want] == list(got)
    assert serialize.sweep_text(back, fmt, cfg) == text


def test_output_is_byte_identical(tmp_path, capsys, monkeypatch):
    paths = []
    for i, threads in enumerate(("1", "4")):
        monkeypatch.setenv("WIGNER_THREADS", threads)
        p = tmp_path / f"run{i}.csv"
        assert main(["sweep", "--theta-steps", "20", "--xi-steps", "15", "--out", str(p)]) == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r" not in paths[0].read_bytes()


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\ntheta-steps = 3\nxi_steps=2\nvisibility = 0\n", encoding="utf-8")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and len(data_lines(out)) == 1 + 6
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--theta-steps", "4")
    assert code == 0 and len(data_lines(out)) == 1 + 8
    assert np.allclose(serialize.parse_sweep(out).w, 0.5)


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ConfigError) as exc:
        read_config(cfg)
    assert exc.value.field == "colour"
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 2 and "colour" in err


@pytest.mark.parametrize("argv, field", [
    (["sweep", "--visibility", "2"], "visibility"),
    (["sweep", "--theta-steps", "1"], "theta_steps"),
    (["sweep", "--theta-min", "pi", "--theta-max", "0"], "theta_max"),
    (["sweep", "--xi-min", "banana"], "xi_min"),
    (["qkd", "--phase-steps", "1"], "phase_steps"),
])
def test_config_errors_exit_2(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert field in err


def test_unwritable_output_exit_4(tmp_path, capsys):
    code, _, err = run(capsys, "classical", "--out", str(tmp_path / "missing" / "out.csv"))
    assert code == 4 and "I/O" in err


def test_missing_verify_input_exit_4(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.csv"))
    assert code == 4


def test_verify_passes(tmp_path, capsys):
    p = tmp_path / "grid.json"
    assert main(["sweep", "--theta-steps", "30", "--xi-steps", "30", "--format", "json", "--out", str(p)]) == 0
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 0
    header, row = data_lines(out)
    summary = dict(zip(header.split(","), row.split(",")))
    assert summary["rows"] == "900" and summary["outside_envelope"] == "0" and summary["ok"] == "true"
    assert int(summary["below_classical"]) > 0 and int(summary["above_classical"]) > 0


def test_verify_rejects_tampered_grid(tmp_path, capsys):
    p = tmp_path / "grid.csv"
    assert main(["sweep", "--theta-steps", "5", "--xi-steps", "5", "--out", str(p)]) == 0
    lines = p.read_text().splitlines()
    t, x, _ = lines[3].split(",")
    lines[3] = f"{t},{x},1.5"
    p.write_text("\n".join(lines) + "\n")
    code, out, err = run(capsys, "verify", str(p), "--format", "json")
    assert code == 3
    assert json.loads(out)["outside_envelope"] == 1


def test_verify_malformed_input(tmp_path, capsys):
    p = tmp_path / "junk.csv"
    p.write_text("a,b,c\n1,2,3\n")
    code, _, _ = run(capsys, "verify", str(p))
    assert code == 2


def test_check_envelope_flags_values():
    grid = run_sweep(SweepConfig(theta_steps=4, xi_steps=4))
    assert check_envelope(grid).ok
    grid.w[5] = -0.5
    assert len(check_envelope(grid).outside) == 1


def test_qkd_small(capsys):
    code, out, _ = run(capsys, "qkd", "--theta-steps", "59", "--phase-steps", "16", "--format", "json")
    assert code == 0
    doc = json.loads(out)["assessments"]
    assert len(doc) == 8
    secure = {(a["setting"], a["family"]) for a in doc if a["secure"]}
    assert secure == {("(0,0)", "Gamma"), ("(0,0)", "Delta"), ("(-theta,theta)", "Gamma"), ("(-theta,theta)", "Delta")}
    delta00 = next(a for a in doc if a["setting"] == "(0,0)" and a["family"] == "Delta")
    assert delta00["best_lower_violation"]["w"] == pytest.approx(-0.125, abs=1e-8)
    # pi/6 and 5pi/6 tie; either may be reported as the best point
    theta = delta00["best_lower_violation"]["angles"][0]
    assert min(abs(theta - math.pi / 6), abs(theta - 5 * math.pi / 6)) < 1e-6


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "wigner_bounds", "classical"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("x1,x2,y2,y3,w\n")
