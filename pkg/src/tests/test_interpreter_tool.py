"""Tests for interpreter tool."""
import pytest
from src.services.listings import M2_SOURCE

@pytest.mark.asyncio
async def test_classify_catalog_interpreter(mock_context, interpreter_tool):
    """Test classifying a catalog interpreter by name."""
    result = await interpreter_tool.classify_interpreter(mock_context, interpreter="four_port")

    assert result["command"] == "classify"
    assert result["result"]["class"] == "restricted"
    assert result["result"]["restricted"] == "yes"
    assert result["result"]["as_expected"] is True
    assert len(result["result"]["reduced_clauses"]) == 3
    assert mock_context.info.called

@pytest.mark.asyncio
async def test_classify_interpreter_file(mock_context, interpreter_tool, tmp_path):
    """Test classifying an interpreter program file with a non-failing override."""
    path = tmp_path / "depth.pl"
    path.write_text(M2_SOURCE)

    result = await interpreter_tool.classify_interpreter(mock_context, path=str(path), non_failing=["max/3"])

    assert result["result"]["interpreter"] == "depth"
    assert result["result"]["restricted"] == "yes"
    assert result["result"]["solve_arity"] == 2

@pytest.mark.asyncio
async def test_classify_unknown_interpreter(mock_context, interpreter_tool):
    """Test classifying an unknown interpreter name."""
    result = await interpreter_tool.classify_interpreter(mock_context, interpreter="m9")

    assert "error" in result
    assert mock_context.error.called

@pytest.mark.asyncio
async def test_compare_preservation(mock_context, interpreter_tool, test_data_dir):
    """Test a preserved termination comparison."""
    result = await interpreter_tool.compare_preservation(
        mock_context, path=str(test_data_dir / "ex12.pl"), interpreter="m0", query="l(0)"
    )

    assert result["result"]["verdict"] == "preserved_termination"
    assert result["result"]["counterexample"] is False
    assert result["result"]["claim"] == "preserves"
    assert result["inputs"]["extra"] == "fresh"

@pytest.mark.asyncio
async def test_compare_preservation_counterexample(mock_context, interpreter_tool, test_data_dir):
    """Test that an improvement counterexample raises a warning."""
    result = await interpreter_tool.compare_preservation(
        mock_context, path=str(test_data_dir / "ex32.pl"), interpreter="m3", query="p"
    )

    assert result["result"]["verdict"] == "improvement_counterexample"
    assert result["result"]["counterexample"] is True
    assert mock_context.warning.called

@pytest.mark.asyncio
async def test_compare_preservation_given_extra(mock_context, interpreter_tool, test_data_dir):
    """Test a ground extra argument for the proof tree interpreter."""
    result = await interpreter_tool.compare_preservation(
        mock_context, path=str(test_data_dir / "ex12.pl"), interpreter="proof_tree", query="l(0)", extra="a"
    )

    assert result["result"]["restricted_query"] is False
    assert result["result"]["claim"] is None

@pytest.mark.asyncio
async def test_compare_preservation_invalid_path(mock_context, interpreter_tool):
    """Test comparing against a missing program."""
    result = await interpreter_tool.compare_preservation(
        mock_context, path="/invalid/path.pl", interpreter="m0", query="p"
    )

    assert "error" in result

def test_meta_report(interpreter_tool, test_data_dir):
    """Test a meta run through the depth interpreter."""
    report = interpreter_tool.meta_report(str(test_data_dir / "ex31.pl"), "m2", "p(X)")

    assert report["result"]["meta_query"]["query"].startswith("solve(p(X), ")
    assert report["result"]["meta_query"]["restricted"] is True
    assert report["result"]["answers"] == ["solve(p(b), s(s(0)))"]
    assert report["truncated"] is False

def test_catalog_report(interpreter_tool):
    """Test the interpreter catalog listing."""
    report = interpreter_tool.catalog_report()

    names = [entry["name"] for entry in report["result"]["interpreters"]]
    assert names[:2] == ["m0", "m1"]
    assert "idemo" in names

def test_corpus_report(interpreter_tool):
    """Test a corpus run report."""
    report = interpreter_tool.corpus_report("counterexamples")

    assert len(report["result"]["rows"]) == 2
    assert report["result"]["unexpected"] == []
    assert report["result"]["claim_violations"] == []
