# tests/test_cli.py
# Command-line surface: exit codes and machine-readable output

import json
import math

import pytest

from amalgam import __version__
from amalgam.core.exceptions import EX_USAGE
from amalgam.main import run_cli
from amalgam.models.grid import GridSpec
from amalgam.services.generator_service import generator_service
from amalgam.services.grid_service import grid_service


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestOracle:
    def test_holds_exits_zero(self, capsys):
        code, out, _ = run(capsys, "oracle", "--src", "M[p=1,q=1,s=0]", "--dst", "W[p=2,q=2]")
        record = json.loads(out)
        assert code == 0
        assert record["status"] == "Holds"
        assert record["theorem"] == "modulation-to-wiener"
        assert record["inputs"]["d"] == 1

    def test_fails_exits_one(self, capsys):
        code, out, _ = run(capsys, "oracle", "--src", "M[p=2,q=4,s=0]", "--dst", "W[p=2,q=2]")
        assert code == 1
        assert json.loads(out)["status"] == "Fails"

    def test_list_prints_catalogue(self, capsys):
        code, out, _ = run(capsys, "oracle", "--list")
        catalogue = json.loads(out)
        assert code == 0
        assert isinstance(catalogue, list) and catalogue

    def test_missing_dst_is_usage_error(self, capsys):
        code, out, err = run(capsys, "oracle", "--src", "M[p=1,q=1,s=0]")
        assert code == EX_USAGE
        assert out == ""
        assert json.loads(err.strip().splitlines()[-1])["exit_code"] == EX_USAGE

    def test_malformed_space_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "oracle", "--src", "M[p=1,q=1", "--dst", "W[p=2,q=2]")
        assert code == EX_USAGE


class TestParser:
    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == EX_USAGE

    def test_unknown_flag(self, capsys):
        assert run(capsys, "oracle", "--frobnicate")[0] == EX_USAGE

    def test_version(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0
        assert __version__ in out


class TestNorm:
    def test_generator_norm(self, capsys):
        code, out, _ = run(capsys, "norm", "--space", "L[r=2,s=0]", "--gen", "gaussian", "--grid", "d=1,N=4096,P=16")
        result = json.loads(out)
        assert code == 0
        assert result["value"] == pytest.approx(math.pi ** 0.25, rel=1e-10)
        assert result["grid"] == "d=1,N=4096,P=16"

    def test_wgf1_input(self, capsys, tmp_path):
        path = tmp_path / "gaussian.wgf"
        grid_service.write_wgf1(generator_service.gaussian(GridSpec.parse("d=1,N=4096,P=16")), path)
        code, out, _ = run(capsys, "norm", "--space", "L[r=2,s=0]", "--in", str(path))
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(math.pi ** 0.25, rel=1e-10)

    def test_grid_with_file_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "gaussian.wgf"
        grid_service.write_wgf1(generator_service.gaussian(GridSpec.parse("d=1,N=64,P=4")), path)
        code, _, _ = run(capsys, "norm", "--space", "L[r=2,s=0]", "--in", str(path), "--grid", "d=1,N=64,P=4")
        assert code == EX_USAGE

    def test_missing_file_is_usage_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "norm", "--space", "L[r=2,s=0]", "--in", str(tmp_path / "absent.wgf"))
        assert code == EX_USAGE


class TestRegion:
    def test_csv_on_stdout(self, capsys):
        code, out, _ = run(capsys, "region", "--theorem", "tau1", "--step", "1/4")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "u,v,label,boundary_flags"
        assert len(lines) == 82

    def test_svg_inferred_from_extension(self, capsys, tmp_path):
        path = tmp_path / "tau1.svg"
        code, out, _ = run(capsys, "region", "--theorem", "tau1", "--step", "1/4", "--out", str(path))
        assert code == 0
        assert out == ""
        assert "<svg" in path.read_text(encoding="utf-8")

    def test_unknown_extension_is_usage_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "region", "--theorem", "tau1", "--out", str(tmp_path / "tau1.png"))
        assert code == EX_USAGE

    def test_bad_step_is_usage_error(self, capsys):
        assert run(capsys, "region", "--theorem", "tau1", "--step", "2/3")[0] == EX_USAGE

    def test_unwritable_out_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "missing" / "tau1.csv"
        code, _, err = run(capsys, "region", "--theorem", "tau1", "--step", "1/4", "--out", str(path))
        assert code == EX_USAGE
        assert json.loads(err.strip().splitlines()[-1])["exit_code"] == EX_USAGE


class TestProbe:
    ARGS = (
        "probe", "--family", "ModulatedBump", "--src", "L[r=2,s=0]", "--dst", "W[p=2,q=2]",
        "--sweep", "1,2,4,8,16", "--grid", "d=1,N=4096,P=64",
    )

    def test_csv_table(self, capsys, tmp_path):
        path = tmp_path / "probe.csv"
        code, out, _ = run(capsys, *self.ARGS, "--csv", str(path))
        assert code == 0
        assert json.loads(out)["verdict_corroborated"]
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "parameter,src_norm,dst_norm,ratio"
        assert len(lines) == 6

    def test_unwritable_csv_is_usage_error(self, capsys, tmp_path):
        code, _, err = run(capsys, *self.ARGS, "--csv", str(tmp_path / "missing" / "probe.csv"))
        assert code == EX_USAGE
        assert json.loads(err.strip().splitlines()[-1])["exit_code"] == EX_USAGE


def test_selftest_summary(capsys):
    code, out, _ = run(capsys, "selftest", "--quick", "--only", "oracle-audit")
    summary = json.loads(out)
    assert summary["mode"] == "quick"
    assert summary["total"] == 1
    assert [check["name"] for check in summary["checks"]] == ["oracle-audit"]
    assert code == (0 if summary["passed"] else 1)
