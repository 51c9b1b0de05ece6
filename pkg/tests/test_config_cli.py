import json
import math

import numpy as np
import pytest

from lgqpd.cli import main
from lgqpd.config import (ConfigError, load_scan_config, parse_scan_config,
                          scan_config_from_mapping, scan_config_to_mapping)
from lgqpd.output import scan_csv_text, write_scan_outputs
from lgqpd.scan import ScanConfig, scan_plane

GOOD_CONFIG = """\
# displacement-plane scan
plane = x0p0
route = series
s1 = +1
s2 = -1
t1 = 0.0
r = 0.5          # squeeze magnitude
axis1_min = -1.0
axis1_max = 1.0
axis1_steps = 2
axis2_min = 0.5
axis2_max = 1.5
axis2_steps = 2
t2_coarse_steps = 60
t2_refine_iters = 10
n_max = 120
"""


class TestConfigParser:
    def test_good_file(self):
        cfg = parse_scan_config(GOOD_CONFIG)
        assert cfg.plane == "x0p0" and cfg.s1 == 1 and cfg.s2 == -1
        assert cfg.r == 0.5 and cfg.axis1_steps == 2

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError) as err:
            parse_scan_config("plane = x0p0\nroute = series\nbogus = 1\ns1=1\ns2=1\n")
        assert err.value.line == 3

    def test_bad_number_reports_position(self):
        with pytest.raises(ConfigError) as err:
            parse_scan_config("plane = x0p0\nroute = series\ns1 = 1\ns2 = 1\nt1 = abc\n")
        assert err.value.line == 5
        assert err.value.column > 0

    def test_missing_required(self):
        with pytest.raises(ConfigError, match="missing required"):
            parse_scan_config("plane = x0p0\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_scan_config("plane = x0p0\nplane = rL\n")

    def test_semantic_error_surfaces(self):
        text = GOOD_CONFIG.replace("route = series", "route = integral") + "n_th = 0.5\n"
        with pytest.raises(ConfigError, match="pure states"):
            parse_scan_config(text)

    def test_mapping_round_trip(self):
        cfg = parse_scan_config(GOOD_CONFIG)
        assert scan_config_from_mapping(scan_config_to_mapping(cfg)) == cfg


@pytest.fixture(scope="module")
def small_result():
    return scan_plane(parse_scan_config(GOOD_CONFIG))


class TestOutputs:

    def test_csv_shape_and_format(self, small_result):
        text = scan_csv_text(small_result)
        lines = text.strip().split("\n")
        assert lines[0] == "axis1,axis2,q_min,t2_argmin"
        assert len(lines) == 1 + 4
        first = lines[1].split(",")
        assert first[0] == "-1"
        assert "." in first[2] and "e" not in first[0]

    def test_seventeen_digit_round_trip(self, small_result):
        text = scan_csv_text(small_result)
        val = float(text.strip().split("\n")[1].split(",")[2])
        assert val == small_result.q_min[0, 0]

    def test_writer_and_manifest(self, small_result, tmp_path):
        csv_path, json_path = write_scan_outputs(small_result, tmp_path, "scanx", 1.25)
        payload = json.loads(json_path.read_text())
        manifest = payload["manifest"]
        import hashlib

        assert manifest["checksums"]["csv_sha256"] == hashlib.sha256(
            csv_path.read_bytes()).hexdigest()
        assert manifest["config"]["plane"] == "x0p0"
        assert manifest["n_failed"] == 0
        # the manifest's config reproduces the scan byte-for-byte
        cfg2 = scan_config_from_mapping(manifest["config"])
        assert scan_csv_text(scan_plane(cfg2)) == csv_path.read_text()


class TestCliEval:
    def test_same_time_half(self, capsys):
        code = main(["eval", "--route", "series", "--x0", "0", "--p0", "0",
                     "--r", "0", "--s1", "1", "--s2", "1", "--t1", "0", "--t2", "0"])
        out = capsys.readouterr().out
        assert code == 0
        assert "q = 0.5" in out

    def test_json_output(self, capsys):
        code = main(["eval", "--route", "integral", "--x0", "0.55", "--p0", "1.925",
                     "--r", "1", "--theta0", "1.0471975511965976", "--s1", "1",
                     "--s2", "-1", "--t1", "0", "--t2", "2.0", "--out", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["route"] == "integral"
        assert payload["diagnostics"]["converged"] is True
        assert abs(payload["q"]) < 1.0

    def test_integral_matches_series_at_benchmark_point(self, capsys):
        common = ["--x0", "0.55", "--p0", "1.925", "--r", "1",
                  "--theta0", "1.0471975511965976", "--s1", "1", "--s2", "-1",
                  "--t1", "0", "--t2", "3.0", "--out", "json"]
        assert main(["eval", "--route", "integral", *common]) == 0
        q_int = json.loads(capsys.readouterr().out)["q"]
        assert main(["eval", "--route", "series", "--nmax", "500", *common]) == 0
        q_ser = json.loads(capsys.readouterr().out)["q"]
        assert abs(q_int - q_ser) < 1e-3

    def test_plus_one_alias(self, capsys):
        code = main(["eval", "--route", "series", "--s1", "+1", "--s2", "-1",
                     "--t1", "0.0", "--t2", "0.0"])
        assert code == 0
        assert "q = 0" in capsys.readouterr().out

    def test_usage_errors_exit_2(self, capsys):
        assert main(["eval", "--route", "integral", "--projector", "window",
                     "--L", "1.0", "--s1", "1", "--s2", "1", "--t1", "0",
                     "--t2", "1"]) == 2
        assert main(["eval", "--route", "series", "--offset-amp", "1.0",
                     "--s1", "1", "--s2", "1", "--t1", "0", "--t2", "1"]) == 2
        assert main(["eval", "--route", "integral", "--temp-ratio", "1.0",
                     "--s1", "1", "--s2", "1", "--t1", "0", "--t2", "1"]) == 2
        assert main(["eval", "--route", "oracle", "--projector", "window",
                     "--s1", "1", "--s2", "1", "--t1", "0", "--t2", "1"]) == 2

    def test_bad_sign_flag(self):
        with pytest.raises(SystemExit) as err:
            main(["eval", "--route", "series", "--s1", "2", "--s2", "1",
                  "--t1", "0", "--t2", "1"])
        assert err.value.code == 2


class TestCliScan:
    def test_one_cell_scan_matches_eval(self, tmp_path, capsys):
        cfg_text = (
            "plane = x0p0\nroute = series\ns1 = 1\ns2 = -1\nt1 = 0.0\nr = 0.0\n"
            "axis1_min = 0.55\naxis1_steps = 1\naxis2_min = 1.93\naxis2_steps = 1\n"
            "t2_min = 1.0\nt2_max = 1.0000001\nt2_coarse_steps = 2\n"
            "t2_refine_iters = 0\nn_max = 200\n")
        cfg_file = tmp_path / "one.cfg"
        cfg_file.write_text(cfg_text)
        assert main(["scan", str(cfg_file), "--out-dir", str(tmp_path)]) == 0
        capsys.readouterr()
        rows = (tmp_path / "one.csv").read_text().strip().split("\n")
        assert len(rows) == 2
        q_scan = float(rows[1].split(",")[2])
        main(["eval", "--route", "series", "--x0", "0.55", "--p0", "1.93",
              "--s1", "1", "--s2", "-1", "--t1", "0", "--t2", "1.0",
              "--nmax", "200", "--out", "json"])
        q_eval = json.loads(capsys.readouterr().out)["q"]
        assert q_scan == pytest.approx(q_eval, abs=1e-12)

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        cfg_file = tmp_path / "grid.cfg"
        cfg_file.write_text(GOOD_CONFIG)
        assert main(["scan", str(cfg_file), "--out-dir", str(tmp_path),
                     "--basename", "a"]) == 0
        assert main(["scan", str(cfg_file), "--out-dir", str(tmp_path),
                     "--basename", "b", "--threads", "2"]) == 0
        capsys.readouterr()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_config_error_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("plane = x0p0\nroute = series\ns1 = maybe\ns2 = 1\n")
        assert main(["scan", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "line 3" in err

    def test_missing_file_exit_2(self, capsys):
        assert main(["scan", "/nonexistent/path.cfg"]) == 2


class TestCliVerify:
    def test_unknown_case_exit_2(self):
        with pytest.raises(SystemExit) as err:
            main(["verify", "nonsense"])
        assert err.value.code == 2

    def test_reduction_case_passes(self, capsys):
        assert main(["verify", "reduction"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
