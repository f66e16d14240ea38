"""Built-in meta-interpreters, meta-program composition and meta queries."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from ..core.parser import parse_program
from ..core.program import PredicateKey, Program, QuerySeq
from ..core.terms import Compound, Term, VarSupply, format_term, is_linear_fresh_sequence, variable_ids
from . import listings
from .classifier import ClassificationReport, InterpreterClass, Verdict, classify_interpreter
from .encodings import (
    EncodingError, SymbolTable, clause_encode, clause_encode_extended, ground_encode, ground_program_term,
)

logger = logging.getLogger(__name__)


class CatalogError(Exception):
    """Custom exception for meta-interpreter catalog operations."""
    pass


class Encoding(str, Enum):
    CE = "ce"
    CED = "ced"
    GROUND = "ground"


@dataclass(frozen=True)
class InterpreterSpec:
    name: str
    program: Program
    solve_arity: int
    encoding: Encoding = Encoding.CE
    extra_arity: int = 0
    expected_class: InterpreterClass = InterpreterClass.OTHER
    expected_restricted: Optional[str] = None
    notes: str = ""
    source: str = ""
    non_failing: FrozenSet[PredicateKey] = frozenset()

    @classmethod
    def from_source(cls, name: str, source: str, encoding: Encoding = Encoding.CE, extra_arity: int = 0,
                    non_failing: Sequence[PredicateKey] = (), notes: str = "") -> "InterpreterSpec":
        """Build a user interpreter from program text; solve arity is read off the clauses."""
        program = parse_program(source)
        arities = {clause.head.arity for clause in program if clause.head.functor == "solve"}
        if len(arities) > 1:
            raise CatalogError(f"Interpreter {name} defines solve with several arities {sorted(arities)}")
        solve_arity = arities.pop() if arities else 0
        report = classify_interpreter(program, non_failing)
        return cls(name, program, solve_arity, encoding, extra_arity, report.interpreter_class,
                   str(report.restricted), notes, source, frozenset(non_failing))

    def classify(self) -> ClassificationReport:
        return classify_interpreter(self.program, self.non_failing)

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "solve_arity": self.solve_arity,
            "encoding": self.encoding.value if self.encoding is not Encoding.CED else f"ced:{self.extra_arity}",
            "expected_class": self.expected_class.value,
            "expected_restricted": self.expected_restricted,
            "clauses": len(self.program),
            "notes": self.notes,
        }


@dataclass(frozen=True)
class _Entry:
    source: str
    solve_arity: int
    expected_class: InterpreterClass
    expected_restricted: Optional[str]
    notes: str
    encoding: Encoding = Encoding.CE
    extra_arity: int = 0
    non_failing: Tuple[PredicateKey, ...] = ()


_CATALOG: Dict[str, _Entry] = {
    "m0": _Entry(listings.M0_SOURCE, 1, InterpreterClass.VANILLA, "yes", "vanilla meta-interpreter"),
    "m1": _Entry(listings.M1_SOURCE, 1, InterpreterClass.OTHER, None, "sound, not complete"),
    "m2": _Entry(listings.M2_SOURCE, 2, InterpreterClass.RESTRICTED, "yes", "proof depth in the second argument",
                 non_failing=(("max", 3),)),
    "m3": _Entry(listings.M3_SOURCE, 1, InterpreterClass.OTHER, None, "check/1 calls clause; improves termination"),
    "m4": _Entry(listings.M4_SOURCE, 1, InterpreterClass.NORMAL, None, "vanilla with negation as failure"),
    "four_port": _Entry(listings.FOUR_PORT_SOURCE, 1, InterpreterClass.RESTRICTED, "yes", "four port tracer"),
    "proof_tree": _Entry(listings.PROOF_TREE_SOURCE, 2, InterpreterClass.RESTRICTED, "yes", "proof tree builder",
                         encoding=Encoding.CED, extra_arity=0),
    "ex43": _Entry(listings.EX43_SOURCE, 1, InterpreterClass.DOUBLE_EXTENDED, "no(meta_variable_binding)",
                   "instantiates the clause body"),
    "meta_ab": _Entry(listings.META_AB_SOURCE, 2, InterpreterClass.DOUBLE_EXTENDED, "no(argument_sequences)",
                      "extra argument fixed to a"),
    "fail_body": _Entry(listings.FAIL_BODY_SOURCE, 1, InterpreterClass.DOUBLE_EXTENDED, "no(non_failure)",
                        "fail before the clause lookup"),
    "fail_true": _Entry(listings.FAIL_TRUE_SOURCE, 1, InterpreterClass.DOUBLE_EXTENDED, "no(non_failure)",
                        "solve(true) fails"),
    "ap0": _Entry(listings.AP0_SOURCE, 1, InterpreterClass.DOUBLE_EXTENDED, "no(meta_variable_binding)",
                  "binds the first conjunct to p(0)"),
    "loop_guard": _Entry(listings.LOOP_GUARD_SOURCE, 1, InterpreterClass.DOUBLE_EXTENDED, "no(non_failure)",
                         "fail and a looping guard"),
    "foo_variant": _Entry(listings.FOO_VARIANT_SOURCE, 2, InterpreterClass.DOUBLE_EXTENDED,
                          "unknown(argument_sequences)", "restricted, not provable syntactically"),
    "idemo": _Entry(listings.IDEMO_SOURCE, 0, InterpreterClass.GROUND_REP, None,
                    "ground representation interpreter", encoding=Encoding.GROUND),
}


def interpreter_names() -> List[str]:
    return list(_CATALOG)


def get_interpreter(name: str) -> InterpreterSpec:
    """Look up a catalog interpreter by name.

    Raises:
        CatalogError: If the name is not in the catalog.
    """
    entry = _CATALOG.get(name)
    if entry is None:
        raise CatalogError(f"Unknown interpreter '{name}'; known: {', '.join(_CATALOG)}")
    program = parse_program(entry.source)
    return InterpreterSpec(
        name=name, program=program, solve_arity=entry.solve_arity, encoding=entry.encoding,
        extra_arity=entry.extra_arity, expected_class=entry.expected_class,
        expected_restricted=entry.expected_restricted, notes=entry.notes, source=entry.source,
        non_failing=frozenset(entry.non_failing),
    )


@dataclass
class MetaProgram:
    """Interpreter plus encoded object program; ground encodings keep the program as a term."""
    program: Program
    encoded: Optional[Term] = None
    table: Optional[SymbolTable] = None


def compose_meta_program(spec: InterpreterSpec, program: Program,
                         supply: Optional[VarSupply] = None) -> MetaProgram:
    """Interpreter clauses plus the encoded program for clause encodings, or the interpreter plus the program term.

    Raises:
        CatalogError: If the object program violates the amalgamation restriction.
    """
    try:
        if spec.encoding is Encoding.GROUND:
            encoded, table = ground_encode(program)
            return MetaProgram(spec.program, ground_program_term(encoded), table)
        if spec.encoding is Encoding.CED:
            facts = clause_encode_extended(program, spec.extra_arity, supply=supply)
        else:
            facts = clause_encode(program)
    except EncodingError as e:
        raise CatalogError(f"Cannot compose {spec.name} with the object program: {e}") from e
    logger.debug(f"Composed {spec.name} with {len(facts)} encoded clauses")
    return MetaProgram(spec.program + facts)


class ExtraMode(str, Enum):
    FRESH_VARS = "fresh_vars"
    GIVEN = "given"


@dataclass(frozen=True)
class MetaQuery:
    query: QuerySeq
    restricted: bool
    reason: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {"query": str(self.query), "restricted": self.restricted, "reason": self.reason}


def _object_term(query: Union[Term, QuerySeq]) -> Term:
    if isinstance(query, QuerySeq):
        return query.as_term()
    return query


def make_meta_query(spec: InterpreterSpec, query: Union[Term, QuerySeq],
                    mode: ExtraMode = ExtraMode.FRESH_VARS, given: Sequence[Term] = (),
                    supply: Optional[VarSupply] = None,
                    report: Optional[ClassificationReport] = None) -> MetaQuery:
    """solve(q, v1, ..., vn) for a clause-encoding interpreter.

    A query is restricted when the interpreter is restricted and either the
    extra arguments are distinct fresh variables not occurring in q, or the
    interpreter's head argument sequences are themselves free.

    Raises:
        CatalogError: If the given extra arguments do not match the solve arity.
    """
    if spec.encoding is Encoding.GROUND:
        raise CatalogError(f"{spec.name} takes ground-represented queries; use the harness instead")
    q = _object_term(query)
    count = spec.solve_arity - 1
    if mode is ExtraMode.FRESH_VARS:
        supply = supply or VarSupply.after(q, spec.program)
        extras: List[Term] = list(supply.fresh_sequence(count, prefix="V"))
    else:
        extras = list(given)
        if len(extras) != count:
            raise CatalogError(f"{spec.name} expects {count} extra arguments, got {len(extras)}")
    meta = QuerySeq.of(Compound("solve", (q,) + tuple(extras)))

    report = report or spec.classify()
    if report.restricted.status is not Verdict.YES:
        return MetaQuery(meta, False, f"interpreter is not restricted: {report.restricted}")
    if is_linear_fresh_sequence(extras, variable_ids(q)):
        return MetaQuery(meta, True)
    if report.head_sequences_free:
        return MetaQuery(meta, True, "interpreter heads leave extra arguments free")
    shown = ", ".join(format_term(t) for t in extras)
    return MetaQuery(meta, False, f"extra arguments ({shown}) are not distinct fresh variables")
