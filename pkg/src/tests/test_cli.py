"""Tests for the command-line interface."""
import json
import pytest
from src.cli import (
    EXIT_COUNTEREXAMPLE, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_USAGE, exit_code_for, main, render,
)

@pytest.fixture(autouse=True)
def small_budget(monkeypatch):
    monkeypatch.setenv("META_MAX_NODES", "3000")
    monkeypatch.setenv("META_MAX_DEPTH", "100")
    monkeypatch.setenv("META_CORPUS_WORKERS", "1")

def test_run(test_data_dir, capsys):
    """Test running a terminating query."""
    assert main(["run", str(test_data_dir / "ex12.pl"), "-q", "l(0)"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("status: terminates")
    assert "  l(0)" in out

def test_encode(test_data_dir, capsys):
    """Test that the clause encoding prints one fact per clause."""
    assert main(["encode", str(test_data_dir / "ex31.pl"), "--kind", "ce"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["clause(p(X), q(X)).", "clause(q(b), true).", "clause(s, (r, t))."]

def test_compare_counterexample(test_data_dir, tmp_path, capsys):
    """Test that an improvement counterexample exits with its own code and writes a report."""
    report_path = tmp_path / "compare.json"
    code = main(["compare", str(test_data_dir / "ex32.pl"), "--interp", "m3", "-q", "p",
                 "--json", str(report_path)])
    assert code == EXIT_COUNTEREXAMPLE
    assert "verdict: improvement_counterexample" in capsys.readouterr().out
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["command"] == "compare"
    assert report["result"]["verdict"] == "improvement_counterexample"
    assert set(report) == {"command", "inputs", "budgets", "result", "truncated"}

def test_analyze(test_data_dir, capsys):
    """Test a successful ordering search."""
    assert main(["analyze", str(test_data_dir / "ex12.pl"), "-q", "l(0)", "-q", "l(f(0))",
                 "--strategy", "linear:3"]) == EXIT_OK
    assert "found: " in capsys.readouterr().out

def test_analyze_answered(test_data_dir, tmp_path):
    """Test the answered flag on the composed successor program."""
    report_path = tmp_path / "analyze.json"
    assert main(["analyze", str(test_data_dir / "ex12.pl"), "-q", "l(f(0))", "-q", "l(f(f(0)))", "--interp", "m0",
                 "--strategy", "rpo", "--answered", "--json", str(report_path)]) == EXIT_OK
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["inputs"]["answered"] is True
    assert report["result"]["found"] is True

def test_parse_error(test_data_dir):
    """Test that a malformed program exits with the parse code."""
    (test_data_dir / "broken.pl").write_text("p(a")
    assert main(["run", str(test_data_dir / "broken.pl"), "-q", "p(X)"]) == EXIT_PARSE

def test_precondition_error(test_data_dir, tmp_path):
    """Test that an encoding violation exits with the precondition code."""
    path = tmp_path / "clash.pl"
    path.write_text("clause(a, b).\n")
    assert main(["encode", str(path)]) == EXIT_PRECONDITION

@pytest.mark.parametrize("argv", [[], ["run"], ["compare", "x.pl", "-q", "p"], ["bogus"]])
def test_usage_errors(argv):
    """Test missing commands and arguments."""
    assert main(argv) == EXIT_USAGE

def test_missing_file():
    """Test a program file that does not exist."""
    assert main(["run", "/invalid/path.pl", "-q", "p"]) == EXIT_USAGE

def test_corpus_csv(tmp_path, capsys):
    """Test a corpus run with a CSV summary."""
    csv_path = tmp_path / "corpus.csv"
    assert main(["corpus", "--suite", "normal", "--csv", str(csv_path)]) == EXIT_OK
    assert "normal_flounder" in capsys.readouterr().out
    assert csv_path.read_text(encoding="utf-8").startswith("case,interpreter,")

def test_render_and_exit_code():
    """Test rendering a report without a dedicated renderer."""
    report = {"command": "interpreters", "result": {"interpreters": []}, "truncated": False}
    assert json.loads(render(report)) == {"interpreters": []}
    assert exit_code_for(report) == EXIT_OK
    assert exit_code_for({"result": {"claim_violations": ["x"]}}) == EXIT_COUNTEREXAMPLE
