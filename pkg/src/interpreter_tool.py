"""Tools for classifying meta-interpreters and comparing them against object programs."""
import logging
from typing import Dict, List, Any, Callable, Optional, Sequence
from fastmcp import Context
from .core.terms import VarSupply
from .services.catalog import ExtraMode, compose_meta_program, interpreter_names, make_meta_query
from .services.classifier import classify_interpreter
from .services.corpus import corpus_frame, run_corpus
from .services.engine import TerminationKind, computed_answers, derive, status_of
from .services.harness import preservation_report
from .services.orderings import parse_symbol
from .tools.base_tool import BaseTool
from .utils.file_utils import build_report, frame_to_records

logger = logging.getLogger(__name__)

FRESH = "fresh"


class InterpreterTool(BaseTool):
    """Tool for meta-interpreter classification, meta runs and preservation checks."""

    def tool_methods(self) -> List[Callable]:
        return [self.classify_interpreter, self.compare_preservation]

    async def classify_interpreter(
        self,
        ctx: Context,
        *,
        interpreter: Optional[str] = None,
        path: Optional[str] = None,
        non_failing: Optional[List[str]] = None
    ) -> Dict[str, Any]:
        """Classify a catalog interpreter by name, or an interpreter program file.

        non_failing lists predicates (name/arity) the non-failure analysis should trust.
        """
        if path:
            error = await self.validate_path(ctx, path)
            if error:
                return self.build_error_response(error)
        return await self.run_blocking(ctx, "interpreter classification", self.classify_report,
                                       interpreter, path, non_failing or [])

    async def compare_preservation(
        self,
        ctx: Context,
        *,
        path: str,
        interpreter: str,
        query: str,
        extra: str = FRESH,
        max_nodes: Optional[int] = None,
        max_depth: Optional[int] = None
    ) -> Dict[str, Any]:
        """Run an object query and its meta query side by side and report the preservation verdict."""
        error = await self.validate_path(ctx, path)
        if error:
            return self.build_error_response(error)
        report = await self.run_blocking(ctx, f"{interpreter} comparison on {query}", self.compare_report,
                                         path, interpreter, query, extra, max_nodes, max_depth)
        if report.get("result", {}).get("counterexample"):
            await ctx.warning(f"Counterexample: {report['result']['verdict']}")
        return report

    def classify_report(self, interpreter: Optional[str] = None, path: Optional[str] = None,
                        non_failing: Sequence[str] = ()) -> Dict[str, Any]:
        overrides = [parse_symbol(label) for label in non_failing]
        if path:
            spec = self.resolve_interpreter(path=path)
            report = classify_interpreter(spec.program, overrides)
            result = {"interpreter": spec.name, **report.to_dict()}
        else:
            spec = self.resolve_interpreter(name=interpreter)
            report = classify_interpreter(spec.program, list(spec.non_failing) + overrides)
            result = {"interpreter": spec.name, **report.to_dict(), "expected_class": spec.expected_class.value,
                      "expected_restricted": spec.expected_restricted}
            result["as_expected"] = (report.interpreter_class is spec.expected_class and
                                     (spec.expected_restricted is None
                                      or str(report.restricted) == spec.expected_restricted))
        result["reduced_clauses"] = [clause.format() for clause in report.reduced_clauses]
        inputs = {"interpreter": interpreter, "path": path, "non_failing": list(non_failing)}
        return build_report("classify", inputs, {}, result, False)

    def catalog_report(self) -> Dict[str, Any]:
        entries = [self.resolve_interpreter(name=name).to_dict() for name in interpreter_names()]
        return build_report("catalog", {}, {}, {"interpreters": entries}, False)

    def _extra_mode(self, extra: str) -> Optional[str]:
        return None if extra == FRESH else extra

    def meta_report(self, path: str, interpreter: str, query: str, extra: str = FRESH,
                    max_nodes: Optional[int] = None, max_depth: Optional[int] = None,
                    interpreter_path: Optional[str] = None) -> Dict[str, Any]:
        """Run solve(query, extras) against the interpreter composed with the program."""
        budget = self.budget(max_nodes, max_depth)
        spec = self.resolve_interpreter(interpreter, interpreter_path)
        supply = VarSupply()
        program = self.load_program(path, supply)
        goals, given = self.parse_goals(query, self._extra_mode(extra), supply)
        mode = ExtraMode.FRESH_VARS if extra == FRESH else ExtraMode.GIVEN
        supply = VarSupply.after(program, goals.terms(), given, spec.program)
        meta = compose_meta_program(spec, program, supply)
        meta_query = make_meta_query(spec, goals, mode, given, supply)
        forest = derive(meta.program, meta_query.query, budget, supply)
        status = status_of(forest)
        answers = computed_answers(forest)
        result = {
            "interpreter": spec.name,
            "meta_query": meta_query.to_dict(),
            "answers": [str(answer) for answer in answers.items],
            "complete": answers.complete,
            "status": status.to_dict(),
            "floundered": forest.floundered,
        }
        inputs = {"path": path, "interpreter": spec.name, "query": query, "extra": extra}
        return build_report("meta", inputs, budget.to_dict(), result, status.kind is not TerminationKind.TERMINATES)

    def compare_report(self, path: str, interpreter: str, query: str, extra: str = FRESH,
                       max_nodes: Optional[int] = None, max_depth: Optional[int] = None,
                       interpreter_path: Optional[str] = None) -> Dict[str, Any]:
        budget = self.budget(max_nodes, max_depth)
        spec = self.resolve_interpreter(interpreter, interpreter_path)
        supply = VarSupply()
        program = self.load_program(path, supply)
        goals, given = self.parse_goals(query, self._extra_mode(extra), supply)
        mode = ExtraMode.FRESH_VARS if extra == FRESH else ExtraMode.GIVEN
        report = preservation_report(spec, program, goals, mode, given, budget)
        result = {**report.to_dict(), "counterexample": report.is_counterexample}
        inputs = {"path": path, "interpreter": spec.name, "query": query, "extra": extra}
        return build_report("compare", inputs, budget.to_dict(), result, report.truncated)

    def corpus_report(self, suite: str = "all", max_nodes: Optional[int] = None,
                      max_depth: Optional[int] = None, workers: Optional[int] = None) -> Dict[str, Any]:
        budget = self.budget(max_nodes, max_depth)
        results = run_corpus(suite, budget, workers or self.config.corpus_workers)
        frame = corpus_frame(results)
        result = {
            "rows": frame_to_records(frame),
            "unexpected": [r.case.name for r in results if not r.as_expected],
            "claim_violations": [r.case.name for r in results if r.claim_violated],
            "cases": [r.to_dict() for r in results],
        }
        truncated = any(not (r.report.object_status.definite and r.report.meta_status.definite)
                        for r in results if r.report is not None)
        return build_report("corpus", {"suite": suite}, budget.to_dict(), result, truncated)
