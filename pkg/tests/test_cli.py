from __future__ import annotations

import json
from fractions import Fraction

import pytest

from aara.cli import EXIT_FRONTEND, EXIT_INFEASIBLE, EXIT_OK, EXIT_VIOLATION, main
from aara.report import report


def test_analyze(capsys):
    assert main(["analyze", "snoc", "--basis", "binomial"]) == EXIT_OK
    assert "bound: n + 1" in capsys.readouterr().out


def test_analyze_json(capsys):
    assert main(["analyze", "subsetSum", "--basis", "stirling", "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["status"] == "optimal" and d["functions"][0]["q"] == "1"


@pytest.mark.parametrize("k", ["1", "2", "3"])
def test_polynomial_basis_infeasible(k, capsys):
    assert main(["analyze", "subsetSum", "--basis", "binomial", "--poly-degree", k]) == EXIT_INFEASIBLE
    assert "LP infeasible" in capsys.readouterr().out


def test_eval(capsys):
    assert main(["eval", "subsetSum", "--input", "([1,2], 3)"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "value: true" in out and "q: 10" in out


def test_eval_out_of_fuel(capsys):
    assert main(["eval", "loop", "--input", "0", "--fuel", "100"]) == EXIT_OK
    assert "fuel exhausted after 100 steps" in capsys.readouterr().out


def test_check_bound(capsys):
    argv = ["check-bound", "snoc", "--basis", "binomial", "--max-size", "4", "--values", "1"]
    assert main(argv) == EXIT_OK
    assert "0 violations" in capsys.readouterr().out


def test_check_bound_violation(monkeypatch, capsys):
    import aara.cli

    def understated(*args):
        r = report(*args)
        r.functions[-1].q = Fraction(0)
        return r

    monkeypatch.setattr(aara.cli, "report", understated)
    argv = ["check-bound", "snoc", "--basis", "binomial", "--max-size", "2", "--values", "0"]
    assert main(argv) == EXIT_VIOLATION
    assert "violation on (0, [])" in capsys.readouterr().out


def test_dump_lp(capsys):
    assert main(["dump-lp", "subsetSum", "--basis", "stirling"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("min: ") and "// subsetSum:" in out


def test_frontend_error(tmp_path, capsys):
    bad = tmp_path / "bad.aex"
    bad.write_text("let f x = x +\n")
    assert main(["analyze", str(bad), "--basis", "stirling"]) == EXIT_FRONTEND
    assert "2:1: error" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["analyze", "missing.aex", "--basis", "stirling"]) == EXIT_FRONTEND
    assert main(["eval", "snoc", "--input", "[1,"]) == EXIT_FRONTEND
    assert main(["analyze", "snoc", "--basis", "mixed", "--demotion", "--poly-degree", "0"]) == EXIT_FRONTEND


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_FRONTEND, EXIT_INFEASIBLE, EXIT_VIOLATION}) == 4
