import json
import os
import subprocess
import sys

import pytest

from qfactor.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pass(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "--filter", "eq3.9", "--s", "1/2", "--beta", "1/2", "--n-max", "5", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["passed"] == 6


def test_verify_mutated_exits_one(capsys):
    code, out, _ = run(["verify", "--filter", "eq3.9", "--s", "1/2", "--n-max", "3", "--mutate"], capsys)
    assert code == 1
    assert json.loads(out)["summary"]["failed"] == 4


def test_no_timing_is_byte_stable(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(["verify", "--filter", "eq3.*", "--s", "1/3", "--beta", "0,7/8", "--n-max", "4", "--no-timing", "--out", str(p)], capsys)
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--filter", "no-such-check"],
        ["verify", "--s", "1/2", "--q", "1/4"],
        ["verify", "--s", "abc"],
        ["table", "eigenvalues", "--q", "1/2"],
        ["eval", "gegenbauer", "2"],
        ["eval", "ultraspherical", "-1", "--s", "1/2"],
        ["bogus"],
        ["verify", "--out", "/nonexistent/dir/report.json", "--filter", "eigenvalue-identity", "--s", "1/2"],
    ],
)
def test_usage_errors(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2
    assert "qfactor: error:" in err


def test_list(capsys):
    code, out, _ = run(["verify", "--list"], capsys)
    assert code == 0
    assert "eq3.9\texact" in out


def test_table_eigenvalues_csv(capsys):
    code, out, _ = run(["table", "eigenvalues", "--s", "1/2", "--beta", "1/2", "--n-max", "3"], capsys)
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[0] == ["n", "mu_n", "lambda_n", "weightfree_eigenvalue"]
    assert [r[1] for r in rows[1:]] == ["3/2", "9/4", "33/8", "129/16"]


def test_eval_eigenvalue(capsys):
    code, out, _ = run(["eval", "ultraspherical", "1", "--q", "1/4", "--beta", "1/2", "--operator", "dx_beta_q", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["eigenvalue"] == "9/4"
    assert doc["x_coefficients"] == ["0", "4/3"]


def test_eval_gegenbauer(capsys):
    code, out, _ = run(["eval", "gegenbauer", "1", "--gamma", "3/2"], capsys)
    assert code == 0
    assert "z_form: 3/2*z + 3/2*z^-1" in out


def test_series(capsys):
    code, out, _ = run(["series", "--q", "1/4", "--beta", "1/2", "--t-order", "4"], capsys)
    assert code == 0
    assert out.startswith("t^0: 1\n")
    assert "MISMATCH" not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qfactor", "verify", "--list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "eq3.9" in proc.stdout


def test_threads_env(tmp_path):
    args = [sys.executable, "-m", "qfactor", "verify", "--filter", "eq3.9,eq1.*", "--s", "1/2,1/3", "--n-max", "4", "--no-timing"]
    seq = subprocess.run(args, capture_output=True, text=True, env={**os.environ, "QFACTOR_THREADS": "1"})
    par = subprocess.run(args, capture_output=True, text=True, env={**os.environ, "QFACTOR_THREADS": "2"})
    assert seq.returncode == par.returncode == 0
    assert seq.stdout == par.stdout
