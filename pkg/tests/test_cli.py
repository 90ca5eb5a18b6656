import io
import json
import subprocess
import sys

import pytest

from betaflow import Params
from betaflow.cli import UsageError, parse_alpha, parse_beta, run
from betaflow.numerics import format_poly


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def call_json(*argv):
    status, out, _ = call(*argv)
    assert status == 0
    return json.loads(out)


# ----------------------------------------------------------------- parsing

def test_parse_beta_forms():
    beta = parse_beta("poly:1,1,-2,-1,-1,1")
    assert format_poly(beta.minpoly) == "x^5 - x^4 - x^3 - 2*x^2 + x + 1"
    # leading-coefficient-first lists are accepted when the other order has no root in (1, 2)
    assert format_poly(parse_beta("poly:1,0,-1,-1,-1").minpoly) == "x^3 - x^2 - 1"
    assert str(parse_beta("rat:3/2")) == "3/2"
    assert str(parse_beta("7/4")) == "7/4"
    assert abs(float(parse_beta("dec:1.61803398875")) - 1.61803398875) < 1e-15
    assert abs(float(parse_beta("poly:-2,0,1@1:1.5")) - 2 ** 0.5) < 1e-12


@pytest.mark.parametrize("text", ["poly:", "poly:1,x", "poly:1,1,1", "rat:", "dec:abc", "twelve", "poly:-2,0,1@2:3"])
def test_parse_beta_rejects(text):
    with pytest.raises(UsageError):
        parse_beta(text)


def test_parse_alpha_expressions():
    beta = Params(parse_beta("poly:-1,-1,1"), 0).beta
    value = parse_alpha("expr:1-b^2/(b+1)", beta)
    assert abs(float(value) - (1 - 1.6180339887 ** 2 / 2.6180339887)) < 1e-9
    assert parse_alpha("1/3", beta) == __import__("fractions").Fraction(1, 3)
    for bad in ["expr:__import__('os')", "expr:b**0.5", "expr:x+1", "expr:b(2)"]:
        with pytest.raises(UsageError):
            parse_alpha(bad, beta)


# -------------------------------------------------------------- exit codes

def test_delta_violation_is_a_usage_error():
    status, out, err = call("expand", "--beta", "1.5", "--alpha", "0.7")
    assert status == 2 and out == ""
    assert "alpha must lie in [0, 2 - beta]" in err


def test_domain_errors_exit_one_with_module_code():
    status, _, err = call("sft", "--beta", "3/2")
    assert status == 1 and err.startswith("betaflow sft: sft.NOT-SFT:")


def test_unknown_subcommand_and_missing_flags():
    assert call("frobnicate")[0] == 2
    assert call("kneading")[0] == 2
    assert call("oracle", "language", "--beta", "poly:-1,-1,1", "-n", "21")[0] == 2


def test_precision_env(monkeypatch):
    monkeypatch.setenv("BETAFLOW_PRECISION", "8")
    assert call("kneading", "--beta", "dec:1.7")[0] == 2
    monkeypatch.setenv("BETAFLOW_PRECISION", "128")
    out = call_json("kneading", "--beta", "dec:1.7")
    # float mode certifies nothing periodic, only a decided prefix
    assert out["is_sft"] is None and out["valid"] is None
    assert out["tau_minus_of_1"].startswith("1100010110")


# ----------------------------------------------------------- subcommands

def test_quintic_kneading():
    out = call_json("kneading", "--beta", "poly:1,1,-2,-1,-1,1")
    assert out["tau_minus_of_1"] == "11(100)"
    assert out["is_sft"] is False and out["valid"] == "VALID"


def test_solve_quartic_pair():
    out = call_json("solve", "--lower", "0(10)", "--upper", "1(0001)")
    assert out["markov_polynomial"] == "x^4 - x^2 - x - 1"
    assert out["beta"]["minpoly"] == "x^3 - x^2 - 1"
    assert abs(out["beta"]["decimal"] - 1.4656) < 5e-4
    assert abs(out["alpha"]["decimal"] - 0.1288) < 5e-4


def test_solve_invalid_pair():
    status, out, _ = call("solve", "--lower", "(01)", "--upper", "(1)")
    assert status == 1 and json.loads(out)["validation"] == "INVALID(COND2)"


def test_solve_parry():
    out = call_json("solve", "--parry", "(10)")
    assert out["beta"]["minpoly"] == "x^2 - x - 1"


def test_sft_emitters():
    status, csv, _ = call("sft", "--beta", "poly:-1,-1,1", "--emit", "csv")
    assert status == 0 and csv.splitlines() == ["cell,c0,c1", "c0,1,1", "c1,1,0"]
    status, dot, _ = call("sft", "--beta", "poly:-1,-1,1", "--emit", "dot")
    assert status == 0 and dot.startswith("digraph")


def test_expand_and_bifurcation():
    status, out, _ = call("expand", "--beta", "poly:-1,-1,1", "--x", "1", "--variant", "lower")
    assert status == 0 and out == "(10)\n"
    out = call_json("bifurcation", "--beta", "poly:-1,-1,1", "--t", "expr:1/b^2", "--variant", "lower",
                    "--critical")
    assert out["status"] == "YES" and out["word"] == "0(01)"
    assert out["critical_hole"]["exact"] == "2 - b"


def test_winning_report_via_cli():
    out = call_json("winning", "--beta", "poly:-1,-1,1", "--xi", "0", "--depth", "6")
    assert out["passed"] is True
    assert call("winning", "--beta", "poly:-1,-1,1", "--gamma", "1")[0] == 2


def test_oracle_language_csv():
    status, out, _ = call("oracle", "language", "--beta", "poly:-1,-1,1", "-n", "6")
    assert status == 0
    assert out.splitlines() == ["n,count", "1,2", "2,3", "3,5", "4,8", "5,13", "6,21"]


def test_sweep_files_are_byte_identical(tmp_path):
    paths = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.csv"
        script = tmp_path / f"{name}.py"
        status, _, _ = call("sweep", "--beta", "poly:1,0,-1,-1,-1", "--alpha", "expr:(4-b-b^2)/3",
                            "--samples", "9", "--depth", "20", "--out", str(path), "--plot-script", str(script))
        assert status == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = paths[0].read_text().splitlines()
    assert rows[0] == "t,eta_kneading,eta_counting,beta2_minpoly,alpha2,plateau" and len(rows) == 10
    assert "matplotlib" in (tmp_path / "a.py").read_text()


def test_escape_is_byte_identical():
    argv = ("oracle", "escape", "--beta", "poly:-1,-1,1", "--t", "0.01", "--samples", "5000",
            "--steps", "200", "--seed", "11")
    assert call(*argv)[1] == call(*argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "betaflow", "kneading", "--beta", "poly:-1,-1,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["tau_minus_of_1"] == "(10)"
