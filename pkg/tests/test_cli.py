from __future__ import annotations

import io
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from hgverify.checks import ANCHORS
from hgverify.cli import run

README = Path(__file__).resolve().parents[1] / "README.md"


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _report(*argv):
    code, out, _ = _run(*argv)
    return code, json.loads(out)


def test_gamma_report():
    code, r = _report("gamma", "-18,-1,2,3,5,9")
    assert code == 0
    assert set(r) == {"command", "inputs", "results", "checks"}
    assert r["results"]["alpha0"] == "3125/940369969152"
    assert r["results"]["exponents"]["order"] == 8
    assert r["results"]["series"][1] == "12252240"
    assert all(set(c) == {"name", "paper_anchor", "status", "detail"} for c in r["checks"])


def test_gamma_flag_matches_positional():
    assert _run("gamma", "--gamma", "-9,1,3,5")[1] == _run("gamma", "-9,1,3,5")[1]
    assert _run("gamma", "-9,1,3,5", "--gamma", "-2,1,1")[0] == 2


def test_annihilation_skipped_without_zero_exponent():
    code, r = _report("gamma", "2,-1,-1")
    assert code == 0
    assert [c["status"] for c in r["checks"] if c["paper_anchor"] == "series"] == ["skipped"]


def test_operator_commands():
    code, r = _report("operator", "-2,1,1", "--which", "Htilde", "--derivative")
    assert code == 0 and r["results"]["order"] == 2
    code, r = _report("operator", "--which", "G")
    assert code == 0 and r["results"]["order"] == 11


def test_conic_analyze():
    code, r = _report("conic", "analyze", "--alpha", "1/1")
    res = r["results"]
    assert code == 0
    assert (res["genus"], res["genus_cover"]) == (3, 7)
    assert res["fixed_points"]["total"] == 4 and res["prym_rank"] == 8


def test_conic_analyze_at_alpha0_reports_singular():
    code, r = _report("conic", "analyze", "--alpha", "3125/940369969152")
    assert code == 0
    assert r["results"]["smoothness"]["delta"]["torus_smooth"] is False


def test_gkz_subcommands():
    assert _report("gkz", "build")[0] == 0
    code, r = _report("gkz", "restrict", "--gamma", "-2,1,1")
    assert code == 0 and r["results"]["restriction"]["unit"] == "4"
    code, r = _report("gkz", "count", "--p", "7", "--alpha", "3")
    assert code == 0 and set(r["results"]["counts"][0]) == {"alpha", "alternate", "reference"}
    code, r = _report("gkz", "count", "--p", "7", "--alpha", "3", "--model", "reference")
    assert set(r["results"]["counts"][0]) == {"alpha", "reference"}


def test_polytope_and_hodge():
    code, r = _report("polytope", "-9,1,3,5")
    assert code == 0 and r["results"]["dim"] == 2 and len(r["results"]["interior_points"]) == 3
    code, r = _report("hodge", "report")
    assert code == 0 and r["results"]["triple"] == [23, 18, 19]


def test_monodromy_exit_codes():
    assert _run("monodromy", "run", "-2,1,1")[0] == 0
    code, out, err = _run("monodromy", "run", "--bits", "64", "--tol", "1/1000000000000000000000000000000")
    assert code == 1 and "FAIL" in err


@pytest.mark.parametrize("argv", [["gamma", "1,2"], ["nope"], ["gkz"], ["conic", "analyze", "--alpha", "x"],
                                  ["gkz", "count"]])
def test_usage_errors_exit_2(argv):
    assert _run(*argv)[0] == 2


@pytest.mark.parametrize("argv", [["gkz", "count", "--p", "9"], ["conic", "analyze", "--alpha", "0"],
                                  ["polytope", "--dilate", "40", "--budget", "10"],
                                  ["gkz", "count", "--p", "31", "--budget", "1000"]])
def test_runtime_errors_exit_1(argv):
    code, out, err = _run(*argv)
    assert code == 1 and out == "" and err.startswith("hgverify: error:")


def test_json_flag_silences_stderr_and_global_flags_anywhere():
    a = _run("--json", "gamma", "-2,1,1")
    b = _run("gamma", "-2,1,1", "--json")
    assert a[0] == b[0] == 0 and a[2] == b[2] == "" and a[1] == b[1]


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "hgverify", "conic", "analyze", "--seed", "3"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]


def test_verify_all_subset():
    code, r = _report("verify-all", "--only", "2,4")
    assert code == 0 and set(r["results"]) == {"2", "4"}
    assert all(c["name"].startswith(("[2] ", "[4] ")) for c in r["checks"])
    assert _run("verify-all", "--only", "99")[0] == 1


def test_every_anchor_is_documented():
    text = README.read_text()
    keys = set(re.findall(r"^\| `([A-Za-z0-9-]+)` \|", text, re.M))
    assert keys == set(ANCHORS)


def _schema():
    text = README.read_text()
    block = text.split("### Report schema", 1)[1].split("```json", 1)[1].split("```", 1)[0]
    return json.loads(block)


@pytest.mark.parametrize("argv", [["gamma", "-2,1,1"], ["hodge", "report"], ["monodromy", "run", "-2,1,1"],
                                  ["verify-all", "--only", "3"]])
def test_reports_match_published_schema(argv):
    jsonschema = pytest.importorskip("jsonschema")
    _, r = _report(*argv)
    jsonschema.validate(r, _schema())
