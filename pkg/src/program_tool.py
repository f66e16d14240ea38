"""Tools for checking, running and encoding object programs."""
import logging
import os
from typing import Dict, List, Any, Callable, Optional
from fastmcp import Context
from .core.parser import ParseError, pretty_print
from .core.program import Program, dependency_relations, is_builtin
from .core.terms import VarSupply, format_term, key_label
from .services.encodings import FRESH_VARS, EncodingError, clause_encode, clause_encode_extended, ground_encode
from .services.engine import TerminationKind, computed_answers, call_set, derive, dump_tree, status_of
from .tools.base_tool import BaseTool
from .utils.file_utils import PROGRAM_EXTENSIONS, build_report, scan_directory_for_files

logger = logging.getLogger(__name__)


class ProgramTool(BaseTool):
    """Tool for parsing, executing and encoding object programs."""

    def tool_methods(self) -> List[Callable]:
        return [self.check_program, self.run_query, self.encode_program]

    async def check_program(self, ctx: Context, *, path: str) -> Dict[str, Any]:
        """Parse a program file, or every .pl file in a directory, and summarise its predicates."""
        error = await self.validate_path(ctx, path)
        if error:
            return self.build_error_response(error)
        return await self.run_blocking(ctx, f"check of {path}", self.check_report, path)

    async def run_query(
        self,
        ctx: Context,
        *,
        path: str,
        query: str,
        max_nodes: Optional[int] = None,
        max_depth: Optional[int] = None
    ) -> Dict[str, Any]:
        """Run a query under bounded LD/LDNF resolution and report answers and termination status."""
        error = await self.validate_path(ctx, path)
        if error:
            return self.build_error_response(error)
        return await self.run_blocking(ctx, f"query {query}", self.run_report, path, query, max_nodes, max_depth)

    async def encode_program(self, ctx: Context, *, path: str, kind: str = "ce") -> Dict[str, Any]:
        """Encode a program as clause facts (ce, ced:K) or as ground terms (ground)."""
        error = await self.validate_path(ctx, path)
        if error:
            return self.build_error_response(error)
        return await self.run_blocking(ctx, f"{kind} encoding of {path}", self.encode_report, path, kind)

    def _summary(self, program: Program) -> Dict[str, Any]:
        graph = dependency_relations(program)
        defined = set(program.predicates)
        undefined = sorted(key for key in program.referenced_predicates()
                           if key not in defined and not is_builtin(key))
        return {
            "clauses": len(program),
            "predicates": [key_label(key) for key in program.predicates],
            "definite": program.is_definite,
            "recursive": [sorted(key_label(key) for key in members) for members in graph.recursion_classes()],
            "undefined": [key_label(key) for key in undefined],
            "text": pretty_print(program),
        }

    def check_report(self, path: str) -> Dict[str, Any]:
        if not os.path.isdir(path):
            result = self._summary(self.load_program(path))
            return build_report("check", {"path": path}, {}, result, False)

        files = [f for ext in PROGRAM_EXTENSIONS for f in scan_directory_for_files(path, ext)[ext]]
        programs: Dict[str, Any] = {}
        for file_path in sorted(files):
            name = os.path.basename(file_path)
            try:
                programs[name] = self._summary(self.load_program(file_path))
            except ParseError as e:
                logger.warning(f"Cannot parse {file_path}: {e}")
                programs[name] = self.build_error_response(str(e))
        return build_report("check", {"path": path}, {}, {"programs": programs}, False)

    def run_report(self, path: str, query: str, max_nodes: Optional[int] = None,
                   max_depth: Optional[int] = None) -> Dict[str, Any]:
        budget = self.budget(max_nodes, max_depth)
        supply = VarSupply()
        program = self.load_program(path, supply)
        goals, _ = self.parse_goals(query, supply=supply)
        forest = derive(program, goals, budget, supply)
        status = status_of(forest)
        answers = computed_answers(forest)
        result = {
            "answers": [str(answer) for answer in answers.items],
            "complete": answers.complete,
            "status": status.to_dict(),
            "floundered": forest.floundered,
            "calls": len(call_set(forest)),
        }
        return build_report("run", {"path": path, "query": query}, budget.to_dict(), result,
                            status.kind is not TerminationKind.TERMINATES)

    def tree_report(self, path: str, query: str, max_nodes: Optional[int] = None,
                    max_depth: Optional[int] = None) -> Dict[str, Any]:
        budget = self.budget(max_nodes, max_depth)
        supply = VarSupply()
        program = self.load_program(path, supply)
        goals, _ = self.parse_goals(query, supply=supply)
        forest = derive(program, goals, budget, supply)
        result = {"nodes": forest.node_count, "trees": len(forest.trees), "dump": dump_tree(forest)}
        return build_report("tree", {"path": path, "query": query}, budget.to_dict(), result, not forest.complete)

    def encode_report(self, path: str, kind: str = "ce") -> Dict[str, Any]:
        """Raises EncodingError on an unknown kind or an amalgamation violation."""
        supply = VarSupply()
        program = self.load_program(path, supply)
        name, _, extra = kind.partition(":")
        if name == "ground" and not extra:
            encoded, table = ground_encode(program)
            result = {"kind": "ground", "clauses": [format_term(t) for t in encoded], "symbols": table.to_dict()}
        elif name == "ce" and not extra:
            result = {"kind": "ce", "clauses": [c.format() for c in clause_encode(program)]}
        elif name == "ced" and extra.isdigit():
            facts = clause_encode_extended(program, int(extra), FRESH_VARS, supply)
            result = {"kind": kind, "clauses": [c.format() for c in facts]}
        else:
            raise EncodingError(f"Unknown encoding kind '{kind}'; expected ce, ced:K or ground")
        return build_report("encode", {"path": path, "kind": kind}, {}, result, False)
