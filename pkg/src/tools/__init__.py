"""Tool modules for the Meta-Termination MCP."""
from .base_tool import BaseTool, TOOL_ERRORS

__all__ = ['BaseTool', 'TOOL_ERRORS']
