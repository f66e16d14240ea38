"""Tools for termination analysis and fixpoint semantics."""
import logging
from typing import Dict, List, Any, Callable, Optional, Sequence
from fastmcp import Context
from .core.terms import VarSupply
from .services.catalog import compose_meta_program, make_meta_query
from .services.engine import decrease_obligations
from .services.orderings import ObligationVerdict, check_obligations, ordering_from_dict
from .services.ordering_search import Found, parse_strategy, search_ordering
from .services.semantics import o_semantics_approx, tpi_fixpoint, tpi_power
from .tools.base_tool import BaseTool
from .utils.file_utils import build_report, read_json_file

logger = logging.getLogger(__name__)


class AnalysisTool(BaseTool):
    """Tool for harvesting decrease obligations, searching orderings and computing semantics."""

    def tool_methods(self) -> List[Callable]:
        return [self.analyze_termination, self.compute_semantics]

    async def analyze_termination(
        self,
        ctx: Context,
        *,
        path: str,
        seeds: List[str],
        strategy: str = "linear:3",
        interpreter: Optional[str] = None,
        given_mapping: Optional[str] = None,
        answered: bool = False
    ) -> Dict[str, Any]:
        """Harvest decrease obligations from seed queries and search for (or check) an ordering.

        With an interpreter, seeds are object queries run through the composed meta-program.
        With answered, obligations are taken under the bindings of the successful branches below them.
        """
        for candidate in filter(None, (path, given_mapping)):
            error = await self.validate_path(ctx, candidate)
            if error:
                return self.build_error_response(error)
        return await self.run_blocking(ctx, f"{strategy} analysis of {path}", self.analyze_report,
                                       path, seeds, strategy, interpreter, given_mapping,
                                       answered=answered)

    async def compute_semantics(
        self,
        ctx: Context,
        *,
        path: str,
        powers: Optional[int] = None,
        answers: bool = False
    ) -> Dict[str, Any]:
        """Iterate the non-ground consequence operator, optionally comparing it with computed answers."""
        error = await self.validate_path(ctx, path)
        if error:
            return self.build_error_response(error)
        return await self.run_blocking(ctx, f"semantics of {path}", self.semantics_report, path, powers, answers)

    def analyze_report(self, path: str, seeds: Sequence[str], strategy: str = "linear:3",
                       interpreter: Optional[str] = None, given_mapping: Optional[str] = None,
                       max_nodes: Optional[int] = None, max_depth: Optional[int] = None,
                       node_limit: Optional[int] = None, answered: bool = False) -> Dict[str, Any]:
        """Raises OrderingError on a malformed strategy or mapping file."""
        budget = self.budget(max_nodes, max_depth)
        supply = VarSupply()
        program = self.load_program(path, supply)
        queries = self.parse_seeds(seeds, supply)
        if interpreter:
            spec = self.resolve_interpreter(name=interpreter)
            supply = VarSupply.after(program, [q.terms() for q in queries], spec.program)
            program = compose_meta_program(spec, program, supply).program
            queries = [make_meta_query(spec, q, supply=supply).query for q in queries]
        obligations = decrease_obligations(program, queries, budget, answered)

        result: Dict[str, Any] = {"obligations": [str(o) for o in obligations], "complete": obligations.complete}
        if given_mapping:
            ordering = ordering_from_dict(read_json_file(given_mapping))
            check = check_obligations(ordering, obligations)
            result.update({"mode": "check", "ordering": ordering.to_dict(), "check": check.to_dict(),
                           "counterexample": check.verdict is ObligationVerdict.COUNTEREXAMPLE})
        else:
            name, bound = parse_strategy(strategy)
            if ":" not in strategy:
                bound = self.config.coefficient_bound
            found = search_ordering(obligations, name, bound,
                                    node_limit or self.config.search_node_limit)
            result.update({"mode": "search", "strategy": strategy, "search": found.to_dict(),
                           "found": isinstance(found, Found), "counterexample": False})
        inputs = {"path": path, "seeds": list(seeds), "strategy": strategy, "interpreter": interpreter,
                  "given_mapping": given_mapping, "answered": answered}
        budgets = {**budget.to_dict(), "search_node_limit": node_limit or self.config.search_node_limit}
        return build_report("analyze", inputs, budgets, result, not obligations.complete)

    def semantics_report(self, path: str, powers: Optional[int] = None, answers: bool = False,
                         atom_limit: Optional[int] = None, max_nodes: Optional[int] = None,
                         max_depth: Optional[int] = None) -> Dict[str, Any]:
        """A fixed power when powers is given, else iterate until stable within the configured powers."""
        limit = atom_limit or self.config.tpi_atom_limit
        supply = VarSupply()
        program = self.load_program(path, supply)
        if powers is not None:
            interpretation = tpi_power(program, powers, supply, limit)
            result: Dict[str, Any] = {"powers": powers, "stable": None}
        else:
            stabilization = tpi_fixpoint(program, self.config.tpi_powers, supply, limit)
            interpretation = stabilization.interpretation
            result = {"powers": stabilization.powers, "stable": stabilization.stable}
        result.update({"size": len(interpretation), "atoms": interpretation.to_list()})
        budgets: Dict[str, Any] = {"atom_limit": limit, "max_powers": powers or self.config.tpi_powers}
        truncated = interpretation.truncated
        if answers:
            budget = self.budget(max_nodes, max_depth)
            approx = o_semantics_approx(program, budget, supply)
            result.update({"answers": approx.to_list(), "agrees": approx.same_as(interpretation)})
            budgets.update(budget.to_dict())
            truncated = truncated or approx.truncated
        return build_report("semantics", {"path": path, "powers": powers, "answers": answers}, budgets,
                            result, truncated)
