"""Tests for analysis tool."""
import pytest

@pytest.mark.asyncio
async def test_analyze_termination_search(mock_context, analysis_tool, test_data_dir):
    """Test a linear ordering search on the object successor program."""
    result = await analysis_tool.analyze_termination(
        mock_context, path=str(test_data_dir / "ex12.pl"), seeds=["l(0)", "l(f(0))"]
    )

    assert result["command"] == "analyze"
    assert result["result"]["mode"] == "search"
    assert result["result"]["found"] is True
    assert "p(f(0)) > p(0)" in result["result"]["obligations"]
    assert result["truncated"] is False

@pytest.mark.asyncio
async def test_analyze_termination_answered(mock_context, analysis_tool, test_data_dir):
    """Test that the vanilla successor program needs answered obligations for a path ordering."""
    arguments = dict(path=str(test_data_dir / "ex12.pl"), seeds=["l(0)", "l(f(0))", "l(f(f(0)))"],
                     strategy="rpo", interpreter="m0")
    raw = await analysis_tool.analyze_termination(mock_context, **arguments)
    answered = await analysis_tool.analyze_termination(mock_context, answered=True, **arguments)

    assert raw["result"]["found"] is False
    assert answered["result"]["found"] is True
    assert answered["inputs"]["answered"] is True
    assert answered["truncated"] is False

@pytest.mark.asyncio
async def test_analyze_termination_given_mapping(mock_context, analysis_tool, test_data_dir):
    """Test checking a recorded mapping on the composed meta-program."""
    result = await analysis_tool.analyze_termination(
        mock_context,
        path=str(test_data_dir / "ex13.pl"),
        seeds=["p([a, b, c])"],
        interpreter="m0",
        given_mapping=str(test_data_dir / "ex13_mapping.json")
    )

    assert result["result"]["mode"] == "check"
    assert result["result"]["check"]["verdict"] == "acceptable_on_sample"
    assert result["result"]["counterexample"] is False

@pytest.mark.asyncio
async def test_analyze_termination_missing_mapping(mock_context, analysis_tool, test_data_dir):
    """Test a missing mapping file."""
    result = await analysis_tool.analyze_termination(
        mock_context, path=str(test_data_dir / "ex13.pl"), seeds=["p([a])"], given_mapping="/invalid/map.json"
    )

    assert "error" in result
    assert mock_context.error.called

@pytest.mark.asyncio
async def test_analyze_termination_bad_strategy(mock_context, analysis_tool, test_data_dir):
    """Test an unknown strategy."""
    result = await analysis_tool.analyze_termination(
        mock_context, path=str(test_data_dir / "ex13.pl"), seeds=["p([a])"], strategy="kbo"
    )

    assert "error" in result

@pytest.mark.asyncio
async def test_compute_semantics(mock_context, analysis_tool, test_data_dir):
    """Test the fixpoint and computed answers of the three clause program."""
    result = await analysis_tool.compute_semantics(mock_context, path=str(test_data_dir / "ex31.pl"), answers=True)

    assert result["result"]["stable"] is True
    assert result["result"]["atoms"] == ["p(b)", "q(b)"]
    assert result["result"]["agrees"] is True

@pytest.mark.asyncio
async def test_compute_semantics_normal_program(mock_context, analysis_tool, test_data_dir):
    """Test that normal programs are rejected."""
    result = await analysis_tool.compute_semantics(mock_context, path=str(test_data_dir / "normal.pl"))

    assert "error" in result

def test_semantics_report_fixed_power(analysis_tool, test_data_dir):
    """Test a fixed number of powers."""
    report = analysis_tool.semantics_report(str(test_data_dir / "ex31.pl"), powers=1)

    assert report["result"]["atoms"] == ["q(b)"]
    assert report["result"]["stable"] is None
