import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from hyposhift.cli import InputError, main, parse_grid, parse_k_list


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_classify_068_pretty():
    code, out = run("classify", "--a2", "1/2", "--y2", "17/25", "--kmax", "4")
    assert code == 0
    lines = [ln.strip() for ln in out.splitlines() if ln.strip().startswith("k=")]
    assert [ln.split(":")[1].split()[0] for ln in lines] == ["pass", "pass", "pass", "fail"]


def test_classify_subnormal_label():
    code, out = run("classify", "--a2", "1/2", "--y2", "2/3", "--kmax", "6")
    assert code == 0 and "≤ subnormal bound" in out
    assert out.count(": pass") == 6


def test_classify_outside_range_warns(capsys):
    code, out = run("classify", "--a2", "3/4", "--y2", "1/2", "--kmax", "2", "--ubound", "3")
    assert code == 0 and "outside validated range" in out
    assert "outside the validated range" in capsys.readouterr().err


def test_classify_json_mirrors_csv():
    _, js = run("classify", "--a2", "1/2", "--y2", "0.72", "--kmax", "3", "--out", "json")
    _, cs = run("classify", "--a2", "1/2", "--y2", "0.72", "--kmax", "3", "--out", "csv")
    rows = json.loads(js)
    parsed = list(csv.DictReader(io.StringIO(cs)))
    assert [{k: str(v) for k, v in r.items()} for r in rows] == parsed
    assert [r["verdict"] for r in rows] == ["pass", "fail", "fail"]


@pytest.mark.parametrize("argv", [
    ["classify", "--a2", "abc", "--y2", "1/2"],
    ["classify", "--a2", "1/2", "--y2", "1/0"],
    ["classify", "--a2", "1/2", "--y2", "2"],
    ["classify", "--a2", "1/2", "--y2", "1/2", "--tol", "0"],
    ["classify", "--a2", "1/2", "--y2", "1/2", "--threads", "many"],
    ["threshold", "--a2", "1/2", "--k", "0"],
    ["sweep", "--a2", "1/2", "--y2", "0:1:0"],
])
def test_bad_input_exits_1(argv, capsys):
    code, _ = run(*argv)
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--a2", "1/2"])
    assert exc.value.code == 1


@pytest.mark.parametrize("a2,k,closed", [("1/2", "2", "9/13"), ("1/4", "2", "45/76"),
                                         ("1/2", "1", "20/23")])
def test_threshold(a2, k, closed):
    code, out = run("threshold", "--a2", a2, "--k", k, "--out", "json")
    rec = json.loads(out)
    assert code == 0 and rec["closed_form"] == closed and rec["agree"]
    assert abs(rec["bisected"] - float(F(closed))) < 1e-9


def test_threshold_pretty():
    code, out = run("threshold", "--a2", "1/2", "--k", "3")
    assert code == 0 and "32/47" in out and "agrees" in out


def test_sweep_header_and_frontier():
    code, out = run("sweep", "--a2", "1/2", "--y2", "3/5,2/3,7/10", "--k", "1-6", "--ubound", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a2,y2,k,verdict,witness_u,expected,agree"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(r["verdict"] == "pass" for r in rows if r["y2"] in ("3/5", "2/3"))
    assert any(r["verdict"] == "fail" for r in rows if r["y2"] == "7/10")


def test_sweep_is_byte_identical_across_threads():
    argv = ["sweep", "--a2", "1/10,3/10,1/2", "--y2", "1/10:1:10", "--k", "1-3", "--ubound", "3"]
    _, one = run(*argv, "--threads", "1")
    _, many = run(*argv, "--threads", "3")
    assert one == many


def test_verify_berger():
    code, out = run("verify-berger", "--y2", "1/3", "--a2", "1/2", "--out", "json")
    rec = json.loads(out)
    assert code == 0 and rec["berger_ok"] and rec["subnormal"] and rec["mass"] == "1"
    code, out = run("verify-berger", "--y2", "7/10", "--a2", "1/2")
    assert code == 0 and "condition iii" in out


def test_selftest():
    code, out = run("selftest")
    assert code == 0 and "FAIL" not in out and out.count("PASS") >= 10


def test_grid_and_k_parsing():
    assert parse_grid("0:1:5", "y2") == [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    assert parse_grid("1/2,0.25", "a2") == [F(1, 2), F(1, 4)]
    assert parse_k_list("1-3,5") == [1, 2, 3, 5]
    with pytest.raises(InputError):
        parse_k_list("0")


def test_module_entry_point():
    cmd = [sys.executable, "-m", "hyposhift", "threshold", "--a2", "1/2", "--k", "1"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0 and "20/23" in proc.stdout
