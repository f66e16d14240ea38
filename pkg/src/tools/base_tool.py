"""Base class for MCP tools."""
import asyncio
import logging
import os
from typing import Callable, Dict, List, Any, Optional, Sequence, Tuple
from abc import ABC, abstractmethod
from fastmcp import Context
from ..config import MetaTerminationConfig
from ..core.parser import ParseError, parse_program, parse_query, parse_term
from ..core.program import Program, ProgramError, QuerySeq, conjunction_to_list
from ..core.terms import Term, Variable, VarSupply
from ..services.catalog import CatalogError, InterpreterSpec, get_interpreter
from ..services.encodings import EncodingError
from ..services.engine import Budget, EngineError
from ..services.harness import HarnessError
from ..services.orderings import OrderingError
from ..services.semantics import SemanticsError
from ..utils.file_utils import read_program_text

logger = logging.getLogger(__name__)

# Failures a tool reports to the client instead of raising
TOOL_ERRORS = (
    ParseError, ProgramError, EngineError, EncodingError, CatalogError, OrderingError, SemanticsError,
    HarnessError, FileNotFoundError, ValueError,
)


class BaseTool(ABC):
    """Base class for MCP tools with common functionality."""

    def __init__(self, config: MetaTerminationConfig):
        self.config = config

    async def validate_path(self, ctx: Context, path: str) -> Optional[str]:
        """Validate that a file or directory exists.

        Returns:
            Error message if validation fails, None otherwise
        """
        if not os.path.exists(path):
            error_msg = f"Path not found: {path}"
            await ctx.error(error_msg)
            return error_msg
        return None

    def budget(self, max_nodes: Optional[int] = None, max_depth: Optional[int] = None) -> Budget:
        """The configured budget with per-call overrides."""
        return Budget(max_nodes or self.config.max_nodes, max_depth or self.config.max_depth)

    def load_program(self, path: str, supply: Optional[VarSupply] = None) -> Program:
        return parse_program(read_program_text(path), supply)

    def parse_goals(self, query: str, extras: Optional[str] = None,
                    supply: Optional[VarSupply] = None) -> Tuple[QuerySeq, List[Term]]:
        """Parse a query and optional comma-separated extra arguments sharing its variables."""
        variables: Dict[str, Variable] = {}
        parsed = parse_query(query, supply, variables)
        if extras is None:
            return parsed, []
        return parsed, conjunction_to_list(parse_term(extras, supply, variables))

    def parse_seeds(self, seeds: Sequence[str], supply: Optional[VarSupply] = None) -> List[QuerySeq]:
        if not seeds:
            raise ValueError("At least one seed query is required")
        return [parse_query(seed, supply) for seed in seeds]

    def resolve_interpreter(self, name: Optional[str] = None, path: Optional[str] = None) -> InterpreterSpec:
        """A catalog interpreter by name, or a user interpreter read from a file."""
        if path:
            return InterpreterSpec.from_source(os.path.splitext(os.path.basename(path))[0],
                                               read_program_text(path))
        if not name:
            raise CatalogError("An interpreter name or file is required")
        return get_interpreter(name)

    async def run_blocking(self, ctx: Context, label: str, fn: Callable[..., Dict[str, Any]],
                           *args: Any, **kwargs: Any) -> Dict[str, Any]:
        """Run a report builder off the event loop, turning expected failures into error responses."""
        await ctx.info(f"Running {label}")
        try:
            report = await asyncio.to_thread(fn, *args, **kwargs)
        except TOOL_ERRORS as e:
            error_msg = f"Error in {label}: {e}"
            logger.exception(error_msg)
            await ctx.error(error_msg)
            return self.build_error_response(str(e))
        if report.get("truncated"):
            await ctx.warning(f"{label} hit its budget; results are partial")
        await ctx.info(f"{label} completed")
        return report

    def build_error_response(self, error: str) -> Dict[str, Any]:
        """Build a standard error response."""
        return {"error": error}

    @abstractmethod
    def tool_methods(self) -> List[Callable]:
        """The async methods this tool exposes over MCP."""
        pass
