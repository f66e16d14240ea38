"""Empirical checks of answer, call and termination correspondence between
an object program and its meta-program."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..core.program import NEGATION, Program, QuerySeq, conjunction_to_list, forms_partition, is_builtin
from ..core.terms import (
    TRUE, Compound, Term, Variable, VarSupply, VariantSet, canonical, format_term, is_instance, is_variant,
)
from .catalog import (
    Encoding, ExtraMode, InterpreterSpec, MetaQuery, compose_meta_program, get_interpreter, make_meta_query,
)
from .classifier import InterpreterClass
from .encodings import EncodingError, ground_decode, ground_encode_query
from .engine import (
    Budget, LDNFForest, TerminationKind, TerminationStatus, call_set, computed_answers, derive, status_of,
)

logger = logging.getLogger(__name__)


class HarnessError(Exception):
    """Custom exception for preservation harness operations."""
    pass


class CheckVerdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class CallMode(str, Enum):
    VARIANT_BIJECTION = "variant_bijection"
    INSTANCE_COVER = "instance_cover"
    PARTITION = "partition"


class PreservationVerdict(str, Enum):
    PRESERVED_TERMINATION = "preserved_termination"
    PRESERVED_NONTERMINATION = "preserved_nontermination"
    VIOLATION_COUNTEREXAMPLE = "violation_counterexample"
    IMPROVEMENT_COUNTEREXAMPLE = "improvement_counterexample"
    INCONCLUSIVE = "inconclusive"


def _labels(terms: Sequence[Term]) -> Tuple[str, ...]:
    return tuple(format_term(t) for t in terms)


@dataclass(frozen=True)
class AnswerCheck:
    sound: CheckVerdict
    complete: CheckVerdict
    object_answers: Tuple[str, ...] = ()
    meta_answers: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {"sound": self.sound.value, "complete": self.complete.value,
                "object_answers": list(self.object_answers), "meta_answers": list(self.meta_answers)}


@dataclass(frozen=True)
class CallCheck:
    mode: CallMode
    verdict: CheckVerdict
    unmatched_meta: Tuple[str, ...] = ()
    unmatched_object: Tuple[str, ...] = ()
    non_variant: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {"mode": self.mode.value, "verdict": self.verdict.value,
                "unmatched_meta": list(self.unmatched_meta), "unmatched_object": list(self.unmatched_object),
                "non_variant": list(self.non_variant)}


@dataclass
class PreservationReport:
    interpreter: str
    object_query: str
    meta_query: str
    object_status: TerminationStatus
    meta_status: TerminationStatus
    answer_check: AnswerCheck
    verdict: PreservationVerdict
    budget: Budget
    call_check: Optional[CallCheck] = None
    claim: Optional[str] = None
    restricted_query: Optional[bool] = None
    restriction_note: str = ""
    object_floundered: bool = False
    meta_floundered: bool = False

    @property
    def is_counterexample(self) -> bool:
        return self.verdict in (PreservationVerdict.VIOLATION_COUNTEREXAMPLE,
                                PreservationVerdict.IMPROVEMENT_COUNTEREXAMPLE)

    @property
    def truncated(self) -> bool:
        """True unless both derivations completed within budget."""
        return any(status.kind is not TerminationKind.TERMINATES
                   for status in (self.object_status, self.meta_status))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "interpreter": self.interpreter,
            "object_query": self.object_query,
            "meta_query": self.meta_query,
            "object_status": self.object_status.to_dict(),
            "meta_status": self.meta_status.to_dict(),
            "answer_check": self.answer_check.to_dict(),
            "call_check": self.call_check.to_dict() if self.call_check else None,
            "verdict": self.verdict.value,
            "claim": self.claim,
            "restricted_query": self.restricted_query,
            "restriction_note": self.restriction_note,
            "object_floundered": self.object_floundered,
            "meta_floundered": self.meta_floundered,
            "budget": self.budget.to_dict(),
        }


@dataclass
class _Side:
    forest: LDNFForest
    status: TerminationStatus


def _run(program: Program, query: QuerySeq, budget: Budget, supply: Optional[VarSupply] = None) -> _Side:
    forest = derive(program, query, budget, supply)
    return _Side(forest, status_of(forest))


def _compare_answers(object_terms: Sequence[Term], meta_terms: Sequence[Term], complete: bool) -> AnswerCheck:
    """Meta answers must be instances of object answers (sound) and cover them (complete)."""
    if not complete:
        verdicts = (CheckVerdict.INCONCLUSIVE, CheckVerdict.INCONCLUSIVE)
    else:
        sound = all(any(is_instance(m, o) for o in object_terms) for m in meta_terms)
        covered = all(any(is_instance(o, m) for m in meta_terms) for o in object_terms)
        verdicts = (CheckVerdict.PASS if sound else CheckVerdict.FAIL,
                    CheckVerdict.PASS if covered else CheckVerdict.FAIL)
    return AnswerCheck(verdicts[0], verdicts[1], _labels(object_terms), _labels(meta_terms))


def _first_arguments(answers: Sequence[Term]) -> List[Term]:
    return [a.args[0] for a in answers if isinstance(a, Compound) and a.functor == "solve" and a.args]


def _object_goal(t: Term) -> bool:
    """solve arguments that stand for object calls."""
    if isinstance(t, Variable) or t == TRUE:
        return False
    return not (t.key in ((",", 2), (NEGATION, 1)) or is_builtin(t.key))


def _solve_calls(forest: LDNFForest) -> List[Compound]:
    calls = [a for a in call_set(forest).atoms if isinstance(a, Compound) and a.functor == "solve" and a.args]
    return [a for a in calls if _object_goal(a.args[0])]


def _meta_setup(spec: InterpreterSpec, program: Program, query: QuerySeq, mode: ExtraMode,
                given: Sequence[Term], supply: VarSupply) -> Tuple[Program, MetaQuery]:
    meta = compose_meta_program(spec, program, supply)
    return meta.program, make_meta_query(spec, query, mode, given, supply)


def answer_correspondence(spec: InterpreterSpec, program: Program, query: QuerySeq,
                          budget: Budget = Budget(), mode: ExtraMode = ExtraMode.FRESH_VARS,
                          given: Sequence[Term] = ()) -> AnswerCheck:
    """Compare object computed answers with the first solve argument of meta answers."""
    supply = VarSupply.after(program, query.terms(), spec.program)
    if spec.encoding is Encoding.GROUND:
        return _ground_run(spec, program, query, budget, supply)[2]
    object_side = _run(program, query, budget, supply)
    meta_program, meta_query = _meta_setup(spec, program, query, mode, given, supply)
    meta_side = _run(meta_program, meta_query.query, budget, supply)
    return _answer_check(object_side, meta_side)


def _answer_check(object_side: _Side, meta_side: _Side) -> AnswerCheck:
    object_answers = computed_answers(object_side.forest)
    meta_answers = computed_answers(meta_side.forest)
    return _compare_answers(object_answers.terms(), _first_arguments(meta_answers.terms()),
                            object_answers.complete and meta_answers.complete)


def _variant_bijection(object_side: _Side, meta_side: _Side) -> CallCheck:
    complete = object_side.forest.complete and meta_side.forest.complete
    object_calls = VariantSet(call_set(object_side.forest).atoms)
    meta_calls = VariantSet(call.args[0] for call in _solve_calls(meta_side.forest))
    unmatched_meta = [t for t in meta_calls if t not in object_calls]
    unmatched_object = [t for t in object_calls if t not in meta_calls]
    if not complete:
        verdict = CheckVerdict.INCONCLUSIVE
    else:
        verdict = CheckVerdict.PASS if not unmatched_meta and not unmatched_object else CheckVerdict.FAIL
    return CallCheck(CallMode.VARIANT_BIJECTION, verdict, _labels(unmatched_meta), _labels(unmatched_object))


def _instance_cover(reference: _Side, meta_side: _Side) -> CallCheck:
    complete = reference.forest.complete and meta_side.forest.complete
    reference_args = [call.args[0] for call in _solve_calls(reference.forest)]
    meta_calls = _solve_calls(meta_side.forest)
    uncovered = [c for c in meta_calls if not any(is_instance(c.args[0], r) for r in reference_args)]
    non_variant = [c for c in meta_calls if not any(is_variant(c.args[0], r) for r in reference_args)]
    if not complete:
        verdict = CheckVerdict.INCONCLUSIVE
    else:
        verdict = CheckVerdict.PASS if not uncovered else CheckVerdict.FAIL
    return CallCheck(CallMode.INSTANCE_COVER, verdict, _labels(uncovered), (), _labels(non_variant))


def _partition(object_side: _Side, meta_side: _Side) -> CallCheck:
    """Every object query is, up to renaming, split over the solve goals of some meta query."""
    complete = object_side.forest.complete and meta_side.forest.complete
    meta_keys: Dict[Term, Tuple[int, ...]] = {}
    for tree in meta_side.forest.trees:
        for node in tree.nodes:
            atoms = [goal.literal.atom for goal in node.goals]
            if not atoms or not all(goal.literal.positive for goal in node.goals):
                continue
            if not all(isinstance(a, Compound) and a.key == ("solve", 1) for a in atoms):
                continue
            parts = [[t for t in conjunction_to_list(a.args[0]) if t != TRUE] for a in atoms]
            parts = [part for part in parts if part]
            if not parts or len(parts[0]) != 1:
                continue
            flat = [t for part in parts for t in part]
            meta_keys.setdefault(canonical(Compound("$q", tuple(flat))), tuple(len(p) for p in parts))

    unmatched: List[str] = []
    for tree in object_side.forest.trees:
        for node in tree.nodes:
            if not node.goals or not node.query.is_definite:
                continue
            whole = canonical(Compound("$q", tuple(node.query.terms())))
            sizes = meta_keys.get(whole)
            if sizes is None:
                unmatched.append(str(node.query))
                continue
            items, parts, start = list(whole.args), [], 0
            for size in sizes:
                parts.append(items[start:start + size])
                start += size
            if not forms_partition(parts, items):
                unmatched.append(str(node.query))
    if not complete:
        verdict = CheckVerdict.INCONCLUSIVE
    else:
        verdict = CheckVerdict.PASS if not unmatched else CheckVerdict.FAIL
    return CallCheck(CallMode.PARTITION, verdict, (), tuple(unmatched))


def _default_call_mode(spec: InterpreterSpec) -> Optional[CallMode]:
    if spec.expected_class in (InterpreterClass.VANILLA, InterpreterClass.NORMAL):
        return CallMode.VARIANT_BIJECTION
    if spec.expected_class in (InterpreterClass.RESTRICTED, InterpreterClass.DOUBLE_EXTENDED):
        return CallMode.INSTANCE_COVER
    return None


def _call_check(spec: InterpreterSpec, program: Program, query: QuerySeq, budget: Budget,
                object_side: _Side, meta_side: _Side, mode: CallMode, supply: VarSupply) -> CallCheck:
    if mode is CallMode.VARIANT_BIJECTION:
        return _variant_bijection(object_side, meta_side)
    if mode is CallMode.PARTITION:
        if not (program.is_definite and query.is_definite):
            raise HarnessError("The partition check covers definite programs and queries only")
        return _partition(object_side, meta_side)
    reference_spec = get_interpreter("m0")
    reference_program, reference_query = _meta_setup(reference_spec, program, query, ExtraMode.FRESH_VARS,
                                                     (), supply)
    reference = _run(reference_program, reference_query.query, budget, supply)
    return _instance_cover(reference, meta_side)


def call_correspondence(spec: InterpreterSpec, program: Program, query: QuerySeq, budget: Budget = Budget(),
                        mode: Optional[CallMode] = None) -> CallCheck:
    """Relate the solve calls of the meta-program to the object calls.

    variant_bijection compares stripped solve calls with object calls up to
    variance; instance_cover requires every meta solve call to be an instance
    of a call made under the vanilla interpreter; partition checks that object
    queries are split over the solve goals of vanilla meta queries.

    Raises:
        HarnessError: For ground-representation interpreters or unsupported modes.
    """
    if spec.encoding is Encoding.GROUND:
        raise HarnessError("Call correspondence is defined for clause encodings only")
    mode = mode or _default_call_mode(spec) or CallMode.INSTANCE_COVER
    supply = VarSupply.after(program, query.terms(), spec.program)
    object_side = _run(program, query, budget, supply)
    meta_program, meta_query = _meta_setup(spec, program, query, ExtraMode.FRESH_VARS, (), supply)
    meta_side = _run(meta_program, meta_query.query, budget, supply)
    return _call_check(spec, program, query, budget, object_side, meta_side, mode, supply)


def _ground_run(spec: InterpreterSpec, program: Program, query: QuerySeq, budget: Budget,
                supply: VarSupply) -> Tuple[_Side, _Side, AnswerCheck, str]:
    meta = compose_meta_program(spec, program, supply)
    encoded_query = ground_encode_query(query, meta.table)
    result = supply.fresh("Y")
    meta_query = QuerySeq.of(Compound("idemo", (meta.encoded, encoded_query, result)))
    object_side = _run(program, query, budget, supply)
    meta_side = _run(meta.program, meta_query, budget, supply)

    object_answers = computed_answers(object_side.forest)
    meta_answers = computed_answers(meta_side.forest)
    decoded: List[Term] = []
    try:
        for answer in meta_answers.terms():
            decoded.append(ground_decode(answer.args[2], meta.table, supply))
    except EncodingError as e:
        raise HarnessError(f"Cannot decode an answer of {spec.name}: {e}") from e
    check = _compare_answers(object_answers.terms(), decoded, object_answers.complete and meta_answers.complete)
    shown = f"idemo(<{len(program)} clauses>, {format_term(encoded_query)}, Y)"
    return object_side, meta_side, check, shown


def _preservation_verdict(object_status: TerminationStatus, meta_status: TerminationStatus) -> PreservationVerdict:
    terminates, loops = TerminationKind.TERMINATES, TerminationKind.LOOP_DETECTED
    pair = (object_status.kind, meta_status.kind)
    if pair == (terminates, terminates):
        return PreservationVerdict.PRESERVED_TERMINATION
    if pair == (loops, loops):
        return PreservationVerdict.PRESERVED_NONTERMINATION
    if pair == (terminates, loops):
        return PreservationVerdict.VIOLATION_COUNTEREXAMPLE
    if pair == (loops, terminates):
        return PreservationVerdict.IMPROVEMENT_COUNTEREXAMPLE
    return PreservationVerdict.INCONCLUSIVE


def preservation_report(spec: InterpreterSpec, program: Program, query: QuerySeq,
                        mode: ExtraMode = ExtraMode.FRESH_VARS, given: Sequence[Term] = (),
                        budget: Budget = Budget(), call_mode: Optional[CallMode] = None) -> PreservationReport:
    """Run the object query and its meta counterpart and cross-check them.

    A counterexample needs a detected loop on one side and termination on the
    other; an exhausted budget on either side gives inconclusive.
    """
    supply = VarSupply.after(program, query.terms(), spec.program)
    claim: Optional[str] = None
    restricted: Optional[bool] = None
    note = ""
    call_check: Optional[CallCheck] = None

    if spec.encoding is Encoding.GROUND:
        object_side, meta_side, answer_check, shown = _ground_run(spec, program, query, budget, supply)
        claim = "preserves"
    else:
        object_side = _run(program, query, budget, supply)
        meta_program, meta_query = _meta_setup(spec, program, query, mode, given, supply)
        meta_side = _run(meta_program, meta_query.query, budget, supply)
        answer_check = _answer_check(object_side, meta_side)
        shown = str(meta_query.query)
        report = spec.classify()
        restricted, note = meta_query.restricted, meta_query.reason
        if report.interpreter_class in (InterpreterClass.VANILLA, InterpreterClass.NORMAL):
            claim = "preserves"
        elif report.interpreter_class is InterpreterClass.RESTRICTED and meta_query.restricted:
            claim = "preserves"
        selected = call_mode or _default_call_mode(spec)
        if selected is not None:
            call_check = _call_check(spec, program, query, budget, object_side, meta_side, selected, supply)

    verdict = _preservation_verdict(object_side.status, meta_side.status)
    result = PreservationReport(
        interpreter=spec.name, object_query=str(query), meta_query=shown,
        object_status=object_side.status, meta_status=meta_side.status, answer_check=answer_check,
        verdict=verdict, budget=budget, call_check=call_check, claim=claim, restricted_query=restricted,
        restriction_note=note, object_floundered=object_side.forest.floundered,
        meta_floundered=meta_side.forest.floundered,
    )
    if result.is_counterexample:
        logger.warning(f"{verdict.value} for {spec.name} on {query}: object {object_side.status.kind.value}, "
                       f"meta {meta_side.status.kind.value}")
    else:
        logger.info(f"{spec.name} on {query}: {verdict.value}")
    return result
