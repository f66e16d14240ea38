"""Example programs and the preservation corpora run through the harness."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from ..core.parser import ParseError, parse_program, parse_query, parse_term
from ..core.program import Program, ProgramError
from ..core.terms import VarSupply
from .catalog import CatalogError, ExtraMode, get_interpreter
from .encodings import EncodingError
from .engine import Budget, EngineError
from .harness import HarnessError, PreservationReport, PreservationVerdict, preservation_report

logger = logging.getLogger(__name__)

CORPUS_COLUMNS = ["case", "interpreter", "object_status", "meta_status", "sound", "complete", "calls", "verdict"]


class CorpusError(Exception):
    """Custom exception for corpus operations."""
    pass


# --- Example programs ---

EX12 = """
l(X) :- p(X), r(X).
p(X) :- q(X, Y), p(Y).
r(f(X)) :- s(Y), r(X).
q(f(Z), Z).
p(0).
r(0).
s(0).
"""

EX13 = """
p([X, Y|T]) :- p([Y|T]), p(T).
"""

EX31 = """
p(X) :- q(X).
q(b).
s :- r, t.
"""

EX32 = """
p :- q, r.
q :- q.
"""

AP0 = """
q :- p(X), r.
p(f(X)) :- p(X).
p(0).
r.
"""

# The second head argument is the two-element list [El, T]
PERMUTE = """
permute(L, [El, T]) :- delete(El, L, L1), permute(L1, T).
permute([], []).
delete(X, [X|T], T).
delete(X, [H|T], [H|R]) :- delete(X, T, R).
"""

NORMAL = """
q(a).
q(b).
r(a).
p(X) :- q(X), \\+ r(X).
s(X) :- \\+ r(X).
w :- w.
"""

PROGRAMS: Dict[str, str] = {
    "ex12": EX12,
    "ex13": EX13,
    "ex31": EX31,
    "ex32": EX32,
    "ap0": AP0,
    "permute": PERMUTE,
    "normal": NORMAL,
}


def program_names() -> List[str]:
    return list(PROGRAMS)


def load_program(name: str, supply: Optional[VarSupply] = None) -> Program:
    """Parse one of the example programs.

    Raises:
        CorpusError: If no example program has this name.
    """
    text = PROGRAMS.get(name)
    if text is None:
        raise CorpusError(f"Unknown example program '{name}'; known: {', '.join(PROGRAMS)}")
    return parse_program(text, supply)


# --- Suites ---

@dataclass(frozen=True)
class CorpusCase:
    """One (interpreter, program, query) triple with the verdict it is expected to produce."""
    name: str
    interpreter: str
    program: str
    query: str
    expected: PreservationVerdict
    mode: ExtraMode = ExtraMode.FRESH_VARS
    given: Tuple[str, ...] = ()


_TERMINATES = PreservationVerdict.PRESERVED_TERMINATION
_LOOPS = PreservationVerdict.PRESERVED_NONTERMINATION
_IMPROVES = PreservationVerdict.IMPROVEMENT_COUNTEREXAMPLE


def _shared_cases(interpreter: str) -> Tuple[CorpusCase, ...]:
    return (
        CorpusCase("ex12_l0", interpreter, "ex12", "l(0)", _TERMINATES),
        CorpusCase("ex12_lf0", interpreter, "ex12", "l(f(0))", _TERMINATES),
        CorpusCase("ex12_p", interpreter, "ex12", "p(X)", _LOOPS),
        CorpusCase("ex13_abc", interpreter, "ex13", "p([a, b, c])", _TERMINATES),
        CorpusCase("ex31_p", interpreter, "ex31", "p(X)", _TERMINATES),
        CorpusCase("ex32_p", interpreter, "ex32", "p", _LOOPS),
    )


SUITES: Dict[str, Tuple[CorpusCase, ...]] = {
    "vanilla": _shared_cases("m0") + (
        CorpusCase("ex12_lff0", "m0", "ex12", "l(f(f(0)))", _TERMINATES),
        CorpusCase("ap0_q", "m0", "ap0", "q", _LOOPS),
    ),
    "restricted": _shared_cases("proof_tree"),
    "normal": (
        CorpusCase("normal_p", "m4", "normal", "p(X)", _TERMINATES),
        CorpusCase("normal_flounder", "m4", "normal", "s(X)", _TERMINATES),
        CorpusCase("normal_neg", "m4", "normal", "\\+ q(c)", _TERMINATES),
        CorpusCase("normal_loop", "m4", "normal", "\\+ w", _LOOPS),
    ),
    "ground": (
        CorpusCase("ground_ex31", "idemo", "ex31", "p(X)", _TERMINATES),
        CorpusCase("ground_ex12", "idemo", "ex12", "l(0)", _TERMINATES),
        CorpusCase("ground_normal", "idemo", "normal", "p(X)", _TERMINATES),
    ),
    "counterexamples": (
        CorpusCase("m3_ex32", "m3", "ex32", "p", _IMPROVES),
        CorpusCase("ap0_improves", "ap0", "ap0", "q", _IMPROVES),
    ),
}


def suite_names() -> List[str]:
    return list(SUITES)


def get_suite(name: str) -> Tuple[CorpusCase, ...]:
    """Cases of a named suite; "all" concatenates every suite.

    Raises:
        CorpusError: If the suite name is unknown.
    """
    if name == "all":
        return tuple(case for cases in SUITES.values() for case in cases)
    cases = SUITES.get(name)
    if cases is None:
        raise CorpusError(f"Unknown suite '{name}'; known: all, {', '.join(SUITES)}")
    return cases


# --- Running ---

@dataclass
class CaseResult:
    case: CorpusCase
    report: Optional[PreservationReport] = None
    error: Optional[str] = None

    @property
    def as_expected(self) -> bool:
        return self.report is not None and self.report.verdict is self.case.expected

    @property
    def claim_violated(self) -> bool:
        """A counterexample on a case whose interpreter and query are covered by a preservation claim."""
        return self.report is not None and self.report.claim == "preserves" and self.report.is_counterexample

    def to_row(self) -> Dict[str, Any]:
        if self.report is None:
            return {"case": self.case.name, "interpreter": self.case.interpreter, "object_status": "error",
                    "meta_status": "error", "sound": "", "complete": "", "calls": "", "verdict": self.error}
        report = self.report
        return {
            "case": self.case.name,
            "interpreter": report.interpreter,
            "object_status": report.object_status.kind.value,
            "meta_status": report.meta_status.kind.value,
            "sound": report.answer_check.sound.value,
            "complete": report.answer_check.complete.value,
            "calls": report.call_check.verdict.value if report.call_check else "",
            "verdict": report.verdict.value,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case.name,
            "program": self.case.program,
            "query": self.case.query,
            "expected": self.case.expected.value,
            "as_expected": self.as_expected,
            "report": self.report.to_dict() if self.report else None,
            "error": self.error,
        }


def run_case(case: CorpusCase, budget: Budget = Budget()) -> CaseResult:
    """Run one case; failures of the case itself are captured in the result."""
    supply = VarSupply()
    try:
        spec = get_interpreter(case.interpreter)
        program = load_program(case.program, supply)
        query = parse_query(case.query, supply)
        given = [parse_term(text, supply) for text in case.given]
        report = preservation_report(spec, program, query, case.mode, given, budget)
    except (ParseError, ProgramError, CatalogError, EncodingError, EngineError, HarnessError) as e:
        logger.error(f"Corpus case {case.name} failed: {e}")
        return CaseResult(case, error=str(e))
    if report.verdict is not case.expected:
        logger.warning(f"Corpus case {case.name}: expected {case.expected.value}, got {report.verdict.value}")
    return CaseResult(case, report)


def run_corpus(suite: str = "all", budget: Budget = Budget(), workers: int = 4) -> List[CaseResult]:
    """Run every case of a suite, fanning cases out over a thread pool.

    Results keep the suite order.
    """
    cases = get_suite(suite)
    logger.info(f"Running {len(cases)} corpus cases from suite '{suite}' with {workers} workers")
    if workers <= 1:
        return [run_case(case, budget) for case in cases]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda case: run_case(case, budget), cases))


def corpus_frame(results: List[CaseResult]) -> pd.DataFrame:
    """One summary row per case."""
    return pd.DataFrame([result.to_row() for result in results], columns=CORPUS_COLUMNS)
