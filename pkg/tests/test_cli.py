"""Exit codes and output shapes of the command line front-end."""
import json
import math
import subprocess
import sys

import pytest

from udwmi.cli import main
from udwmi.sweep import COLUMNS

CHEAP_POINT = ["--gap-a", "0.5", "--accel", "0.1", "--radius", "1.0",
               "--sep", "1.0", "--dz", "0.5"]


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestResponseCommand:
    def test_boundary_point(self, capsys):
        rc, out, err = run_cli(capsys, [
            "response", "--gap", "0.5", "--accel", "0.1", "--radius", "1.0",
            "--dz", "0.5"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["converged"]
        assert payload["total"] > 0.0
        parts = (payload["term_bounded"] + payload["term_pv"]
                 + payload["term_inertial"] + payload["term_pole"])
        assert parts == pytest.approx(payload["total"], rel=1e-12)
        assert payload["pole_location"] > 0.0

    def test_free_space_point(self, capsys):
        rc, out, err = run_cli(capsys, [
            "response", "--gap", "0.5", "--accel", "0.1", "--radius", "1.0",
            "--free-space"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["term_pv"] == 0.0
        assert payload["term_pole"] == 0.0
        assert payload["pole_location"] is None

    def test_dz_and_free_space_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["response", "--gap", "0.5", "--dz", "0.5", "--free-space"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["response", "--gap", "0.5"])
        assert exc.value.code == 2

    def test_invalid_physics_is_config_error(self, capsys):
        rc, out, err = run_cli(capsys, [
            "response", "--gap", "0.5", "--radius", "-1.0", "--dz", "0.5"])
        assert rc == 1
        assert "config error" in err


class TestCorrelationCommand:
    def test_equal_kinematics_uses_reduced_method(self, capsys):
        rc, out, err = run_cli(capsys, ["correlation", *CHEAP_POINT])
        assert rc == 0
        payload = json.loads(out)
        assert payload["method"] == "reduced"
        assert payload["converged"]
        re_c, im_c = payload["c_total"]
        re_c1, _ = payload["c_free"]
        re_c2, _ = payload["c_boundary"]
        assert re_c == pytest.approx(re_c1 - re_c2, abs=1e-15)
        # equal gaps and kinematics force a real correlation
        assert abs(im_c) < 1e-12

    def test_detuned_pair(self, capsys):
        rc, out, err = run_cli(capsys, [
            "correlation", *CHEAP_POINT, "--gap-b", "0.75"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["method"] == "reduced"
        assert math.hypot(*payload["c_total"]) > 0.0


class TestMiCommand:
    def test_point_record(self, capsys):
        rc, out, err = run_cli(capsys, ["mi", *CHEAP_POINT])
        assert rc == 0
        payload = json.loads(out)
        assert set(payload) == {"P_A", "P_B", "ReC", "ImC", "absC",
                                "ReC1", "ImC1", "ReC2", "ImC2",
                                "Lplus", "Lminus", "I", "slack", "err"}
        assert payload["I"] >= 0.0
        assert payload["absC"] == pytest.approx(
            math.hypot(payload["ReC"], payload["ImC"]), rel=1e-14)
        assert payload["slack"] > 0.0

    def test_invalid_dz_is_config_error(self, capsys):
        rc, out, err = run_cli(capsys, [
            "mi", "--gap-a", "0.5", "--dz", "0"])
        assert rc == 1
        assert "config error" in err


class TestSweepCommand:
    @pytest.fixture()
    def config_path(self, tmp_path):
        cfg = {
            "name": "cli-tiny",
            "axis": {"name": "sep", "start": 0.5, "stop": 1.5, "points": 3},
            "gap_a": 0.5, "accel": 0.1, "radius": 1.0, "dz": 0.5,
        }
        p = tmp_path / "tiny.json"
        p.write_text(json.dumps(cfg))
        return p

    def test_csv_output(self, capsys, tmp_path, config_path):
        out_path = tmp_path / "out.csv"
        rc, out, err = run_cli(capsys, [
            "sweep", "--config", str(config_path), "--out", str(out_path),
            "--workers", "1"])
        assert rc == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == ",".join(COLUMNS)
        assert len(lines) == 4

    def test_json_output(self, capsys, tmp_path, config_path):
        out_path = tmp_path / "out.json"
        rc, out, err = run_cli(capsys, [
            "sweep", "--config", str(config_path), "--out", str(out_path),
            "--format", "json", "--workers", "1"])
        assert rc == 0
        payload = json.loads(out_path.read_text())
        assert len(payload) == 3
        assert all(row["status"] == "ok" for row in payload)

    def test_missing_preset_is_config_error(self, capsys, tmp_path):
        rc, out, err = run_cli(capsys, [
            "sweep", "--config", "no_such_preset",
            "--out", str(tmp_path / "x.csv")])
        assert rc == 1
        assert "config error" in err
        assert "fig2a" in err

    def test_unwritable_output_is_io_error(self, capsys, tmp_path,
                                           config_path):
        rc, out, err = run_cli(capsys, [
            "sweep", "--config", str(config_path),
            "--out", str(tmp_path / "missing-dir" / "x.csv"),
            "--workers", "1"])
        assert rc == 1
        assert "i/o error" in err

    def test_failing_points_exit_code(self, capsys, tmp_path, config_path,
                                      monkeypatch):
        from udwmi import sweep as sweep_mod

        def always_fail(pair, tol):
            raise RuntimeError("forced point failure")

        monkeypatch.setattr(sweep_mod, "mutual_information_point",
                            always_fail)
        out_path = tmp_path / "out.csv"
        rc, out, err = run_cli(capsys, [
            "sweep", "--config", str(config_path), "--out", str(out_path),
            "--workers", "1"])
        assert rc == 2
        assert "3 of 3 points failed" in err
        lines = out_path.read_text().splitlines()
        assert all("fail:RuntimeError" in line for line in lines[1:])


class TestVerifyCommand:
    @pytest.fixture()
    def grid_path(self, tmp_path):
        grid = {
            "response_points": [
                {"gap": 0.5, "accel": 0.1, "radius": 1.0, "dz": 0.5}],
            "correlation_points": [
                {"gap_a": 0.5, "gap_b": 0.5, "accel": 0.1, "radius": 1.0,
                 "sep": 1.0, "dz": 0.5}],
        }
        p = tmp_path / "grid.json"
        p.write_text(json.dumps(grid))
        return p

    def test_passing_grid(self, capsys, grid_path):
        rc, out, err = run_cli(capsys, [
            "verify", "--grid", str(grid_path), "--workers", "1"])
        assert rc == 0
        report = json.loads(out)
        assert report["ok"]
        assert report["response"]["max_rel_dev"] <= 1e-3
        assert report["correlation"]["max_rel_dev"] <= 1e-3

    def test_report_to_file(self, capsys, tmp_path, grid_path):
        out_path = tmp_path / "report.json"
        rc, out, err = run_cli(capsys, [
            "verify", "--grid", str(grid_path), "--out", str(out_path),
            "--workers", "1"])
        assert rc == 0
        assert out == ""
        assert json.loads(out_path.read_text())["ok"]

    def test_unattainable_tolerance_exits_3(self, capsys, tmp_path):
        grid = {
            "rel_tol": 1e-16,
            "response_points": [
                {"gap": 0.5, "accel": 0.1, "radius": 1.0, "dz": 0.5}],
        }
        p = tmp_path / "grid.json"
        p.write_text(json.dumps(grid))
        rc, out, err = run_cli(capsys, [
            "verify", "--grid", str(p), "--workers", "1"])
        assert rc == 3
        assert "oracle suite FAILED" in err

    def test_missing_grid_is_config_error(self, capsys):
        rc, out, err = run_cli(capsys, ["verify", "--grid", "nope"])
        assert rc == 1
        assert "config error" in err


class TestParserBasics:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["orbit"])
        assert exc.value.code == 2

    def test_no_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_console_script_help(self):
        proc = subprocess.run([sys.executable, "-m", "udwmi.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        for sub in ("response", "correlation", "mi", "sweep", "verify"):
            assert sub in proc.stdout
