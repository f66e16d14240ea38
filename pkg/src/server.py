"""FastMCP server implementation for termination analysis of meta-programs."""
import logging
from typing import Optional
from fastmcp import FastMCP
from .config import MetaTerminationConfig
from .program_tool import ProgramTool
from .interpreter_tool import InterpreterTool
from .analysis_tool import AnalysisTool

logger = logging.getLogger(__name__)


class MetaTerminationMCPServer:
    """
    FastMCP server for running, encoding and analysing logic programs and
    their meta-interpreted counterparts.
    Manages initialization, configuration, and server lifecycle.
    """

    def __init__(self):
        """Initialize server components."""
        self.mcp = FastMCP(
            name="MetaTerminationLab",
            instructions=(
                "Provides tools to run logic programs under bounded LD/LDNF resolution, encode them for "
                "meta-interpreters, classify meta-interpreters, compare termination of object and meta "
                "queries, and search for orderings that prove termination."
            )
        )
        self.config: Optional[MetaTerminationConfig] = None
        self._reset_tools()

    def _reset_tools(self) -> None:
        """Reset all tool instances to None."""
        self.program_tool: Optional[ProgramTool] = None
        self.interpreter_tool: Optional[InterpreterTool] = None
        self.analysis_tool: Optional[AnalysisTool] = None

    def initialize(self, config: MetaTerminationConfig) -> bool:
        """
        Initialize server with configuration.

        Args:
            config: Meta-termination configuration.

        Returns:
            True if initialization successful, False otherwise.
        """
        self.config = config
        try:
            self._initialize_tools()
            self._register_tools()
            logger.info("MetaTerminationMCPServer initialized successfully.")
            return True
        except Exception as e:
            logger.critical(f"Failed to initialize server: {e}", exc_info=True)
            self._reset_tools()
            return False

    def _initialize_tools(self) -> None:
        """Initialize all tools."""
        if self.config is None:
            raise ValueError("Configuration is required")
        self.config.budget()  # rejects non-positive limits
        self.program_tool = ProgramTool(self.config)
        self.interpreter_tool = InterpreterTool(self.config)
        self.analysis_tool = AnalysisTool(self.config)

    def _register_tools(self) -> None:
        """Register all tools with the MCP."""
        for tool in (self.program_tool, self.interpreter_tool, self.analysis_tool):
            for method in tool.tool_methods():
                self.mcp.tool()(method)
                logger.debug(f"Registered tool {method.__name__}")

    def run(self) -> None:
        """Run the MCP server."""
        logger.info(f"Starting FastMCP server '{self.mcp.name}'...")
        try:
            self.mcp.run()
        except Exception as e:
            logger.critical(f"FastMCP server '{self.mcp.name}' encountered a fatal error: {e}", exc_info=True)
        finally:
            logger.info(f"FastMCP server '{self.mcp.name}' stopped.")
