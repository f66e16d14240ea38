import shutil
from pathlib import Path
import pytest
from unittest.mock import Mock, AsyncMock
from fastmcp import Context
from src.config import MetaTerminationConfig
from src.program_tool import ProgramTool
from src.interpreter_tool import InterpreterTool
from src.analysis_tool import AnalysisTool

REPO_TEST_DATA = Path(__file__).resolve().parents[2] / "test_data"

@pytest.fixture
def test_config():
    """Test configuration fixture."""
    return MetaTerminationConfig(
        max_nodes=3000,
        max_depth=100,
        coefficient_bound=3,
        search_node_limit=2000,
        tpi_powers=6,
        tpi_atom_limit=500,
        corpus_workers=1
    )

@pytest.fixture
def mock_context():
    """Mock FastMCP context fixture."""
    context = Mock(spec=Context)
    context.info = AsyncMock()
    context.error = AsyncMock()
    context.warning = AsyncMock()
    return context

@pytest.fixture
def test_data_dir(tmp_path):
    """Copy the example programs into a temporary test data directory."""
    data_dir = tmp_path / "test_data"
    shutil.copytree(REPO_TEST_DATA, data_dir)
    return data_dir

@pytest.fixture
def program_tool(test_config):
    return ProgramTool(test_config)

@pytest.fixture
def interpreter_tool(test_config):
    return InterpreterTool(test_config)

@pytest.fixture
def analysis_tool(test_config):
    return AnalysisTool(test_config)
