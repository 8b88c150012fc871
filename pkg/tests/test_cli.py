from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from grw import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(cli.RunConfig.from_args(cli.build_parser().parse_args(list(argv))), out, err)
    return code, out.getvalue(), err.getvalue()


def test_structure_q12_p2():
    code, out, _ = run("structure", "--family", "q12", "--p", "2", "--k", "1", "--n", "1")
    assert code == 0
    assert out.strip().startswith("(C_2^5 x C_4) |x (C_1 x GL(2, F_2)), order 768")


def test_decompose_d12_p5_n5():
    code, out, _ = run("decompose", "--family", "d12", "--p", "5", "--n", "5")
    assert code == 0
    assert "F^4 + M(2, F)^2" in out and "radical_dim 48" in out


def test_decompose_json():
    code, out, _ = run("decompose", "--family", "cyclic", "--p", "5", "--n", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["case"]["family"] == "Trivial"


def test_verify_d12_p3():
    code, out, _ = run("verify", "--family", "d12", "--p", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    census = next(c for c in data["checks"] if c["check"] == "census")
    assert census["unit_count"] == census["predicted"] == 104976
    assert all(c["pass"] for c in data["checks"])


def test_verify_sampled_case():
    code, out, _ = run("verify", "--family", "q12", "--p", "5", "--samples", "20000")
    assert code == 0
    assert "[PASS] census" in out and "[PASS] radical" in out and "[PASS] split" in out


def test_census_text_and_exhaustive_flag():
    code, out, _ = run("census", "--family", "q12", "--p", "2")
    assert code == 0 and out.strip() == "768 units of 4096"
    code, _, err = run("census", "--family", "q12", "--p", "5", "--mode", "exhaustive")
    assert code == 2 and "SizeBound" in err


def test_identical_config_gives_identical_json():
    argv = ("census", "--family", "d12", "--p", "5", "--samples", "5000", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]
    argv = ("verify", "--family", "q12", "--p", "2", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]


def test_timings_only_when_requested():
    _, out, _ = run("census", "--family", "c4", "--p", "3", "--format", "json", "--timings")
    assert "elapsed" in json.loads(out)["census"]


@pytest.mark.parametrize("argv", [
    ("structure", "--family", "q12", "--p", "4"),
    ("structure", "--family", "q12", "--p", "2", "--n", "2"),
    ("census", "--family", "q12", "--p", "2", "--samples", "10"),
    ("structure", "--family", "q12", "--p", "3", "--n", "0"),
])
def test_invalid_input_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2 and out == "" and err.startswith("error: ")


def test_unsupported_case_is_verbatim():
    code, _, err = run("structure", "--family", "d12", "--p", "2", "--n", "4")
    assert code == 2 and "UnsupportedCase" in err


def test_verify_mismatch_exit_1(monkeypatch):
    from grw import unitstruct

    real = unitstruct.unit_structure

    def off_by_one(*a):
        us = real(*a)
        return unitstruct.UnitStructure(unitstruct.direct(us.descriptor, unitstruct.Cyclic(2)), us.v_part)

    monkeypatch.setattr(cli.unitstruct, "unit_structure", off_by_one)
    code, out, _ = run("verify", "--family", "q12", "--p", "2")
    assert code == 1 and "[FAIL] census" in out


def test_selftest_with_golden(tmp_path):
    code, out, _ = run("selftest", "--golden-dir", str(tmp_path), "--write-golden")
    assert code == 0 and "[PASS] golden" in out
    code, out, _ = run("selftest", "--golden-dir", str(tmp_path), "--format", "json")
    assert code == 0 and json.loads(out)["pass"]


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "grw", "structure", "--family", "q12"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grw", "structure", "--family", "d12", "--p", "7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "GL(2, F_7)" in proc.stdout
