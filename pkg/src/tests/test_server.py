"""Tests for Meta-Termination MCP server."""
import pytest
from src.server import MetaTerminationMCPServer
from src.config import MetaTerminationConfig

def test_server_initialization(test_config):
    """Test server initialization with config."""
    server = MetaTerminationMCPServer()
    assert server.initialize(test_config) == True
    assert server.config == test_config
    assert server.program_tool is not None
    assert server.interpreter_tool is not None
    assert server.analysis_tool is not None

def test_server_initialization_failure(test_config):
    """Test server initialization failure handling."""
    server = MetaTerminationMCPServer()
    test_config.max_nodes = 0
    assert server.initialize(test_config) == False
    assert server.program_tool is None

def test_server_reset_tools():
    """Test resetting server tools."""
    server = MetaTerminationMCPServer()
    server._reset_tools()
    assert server.program_tool is None
    assert server.interpreter_tool is None
    assert server.analysis_tool is None

def test_tool_methods(test_config):
    """Test the methods each tool exposes."""
    server = MetaTerminationMCPServer()
    server.initialize(test_config)
    names = [method.__name__ for tool in (server.program_tool, server.interpreter_tool, server.analysis_tool)
             for method in tool.tool_methods()]
    assert names == ["check_program", "run_query", "encode_program", "classify_interpreter",
                     "compare_preservation", "analyze_termination", "compute_semantics"]

def test_config_from_env(monkeypatch):
    """Test loading limits from the environment."""
    monkeypatch.setenv("META_MAX_NODES", "500")
    monkeypatch.setenv("LOG_LEVEL", "debug")
    config = MetaTerminationConfig.load_from_env()
    assert config.max_nodes == 500
    assert config.log_level == "DEBUG"
    assert config.budget().max_nodes == 500

def test_config_rejects_non_positive(monkeypatch):
    """Test that invalid limits are rejected."""
    monkeypatch.setenv("META_MAX_DEPTH", "-3")
    with pytest.raises(ValueError):
        MetaTerminationConfig.load_from_env()
