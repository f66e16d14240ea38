"""Structural classification of meta-interpreters.

Recognises the vanilla interpreter, its negation extension, double extended
interpreters and ground-representation interpreters, and decides the
restricted conditions through syntactic rules. Conditions that the rules
cannot discharge are reported as unknown instead of being guessed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..core.program import (
    NEGATION, Clause, DependencyGraph, Literal, PredicateKey, Program, dependency_relations, is_builtin,
)
from ..core.terms import TRUE, Compound, Term, Variable, format_term, is_linear_fresh_sequence, variable_ids

logger = logging.getLogger(__name__)

SOLVE = "solve"
CLAUSE = "clause"


class InterpreterClass(str, Enum):
    VANILLA = "vanilla"
    RESTRICTED = "restricted"
    DOUBLE_EXTENDED = "double_extended"
    NORMAL = "normal"
    GROUND_REP = "ground_rep"
    OTHER = "other"


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class NonFailure(str, Enum):
    SAFE = "safe"
    MUST_FAIL = "must_fail"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RestrictedVerdict:
    status: Verdict
    condition: Optional[str] = None
    reasons: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if self.status is Verdict.YES:
            return "yes"
        return f"{self.status.value}({self.condition})"


@dataclass(frozen=True)
class _Check:
    status: Verdict
    condition: Optional[str] = None
    reason: str = ""


@dataclass
class DoubleExtendedShape:
    """The three solve clauses and where the designated literals sit in them."""
    solve_arity: int
    clause_arity: int
    true_clause: Clause
    conj_clause: Clause
    clause_clause: Clause
    conj_solves: Tuple[int, int]
    clause_atom: int
    clause_solve: int

    @property
    def extra_arity(self) -> int:
        return self.clause_arity - 2

    @property
    def conj_vars(self) -> Tuple[Variable, Variable]:
        a, b = self.conj_clause.head.args[0].args
        return a, b

    @property
    def clause_vars(self) -> Tuple[Variable, Variable]:
        atom = self.clause_clause.body[self.clause_atom].atom
        return atom.args[0], atom.args[1]

    def extra_goals(self) -> List[Tuple[str, Clause, int, Literal]]:
        """(slot, clause, position, literal) for every C/D goal."""
        goals = []
        for position, literal in enumerate(self.true_clause.body):
            goals.append(("C1", self.true_clause, position, literal))
        first, second = self.conj_solves
        for position, literal in enumerate(self.conj_clause.body):
            if position in (first, second):
                continue
            slot = "D1" if position < first else "D2" if position < second else "C2"
            goals.append((slot, self.conj_clause, position, literal))
        for position, literal in enumerate(self.clause_clause.body):
            if position in (self.clause_atom, self.clause_solve):
                continue
            slot = "D3" if position < self.clause_atom else "D4" if position < self.clause_solve else "C3"
            goals.append((slot, self.clause_clause, position, literal))
        return goals


@dataclass
class ClassificationReport:
    interpreter_class: InterpreterClass
    is_double_extended: bool
    restricted: RestrictedVerdict
    findings: List[str] = field(default_factory=list)
    shape: Optional[DoubleExtendedShape] = None
    head_sequences_free: bool = False
    non_failure: Dict[PredicateKey, NonFailure] = field(default_factory=dict)

    @property
    def is_restricted(self) -> bool:
        return self.restricted.status is Verdict.YES

    @property
    def reduced_clauses(self) -> List[Clause]:
        """The solve clauses with every extra goal and argument removed."""
        if self.shape is None:
            return []
        a, b = self.shape.conj_vars
        ca, cb = self.shape.clause_vars
        return [
            Clause(Compound(SOLVE, (TRUE,))),
            Clause(Compound(SOLVE, (Compound(",", (a, b)),)),
                   (Literal(Compound(SOLVE, (a,))), Literal(Compound(SOLVE, (b,))))),
            Clause(Compound(SOLVE, (ca,)),
                   (Literal(Compound(CLAUSE, (ca, cb))), Literal(Compound(SOLVE, (cb,))))),
        ]

    def to_dict(self) -> Dict[str, object]:
        return {
            "class": self.interpreter_class.value,
            "double_extended": self.is_double_extended,
            "restricted": str(self.restricted),
            "restricted_reasons": list(self.restricted.reasons),
            "solve_arity": self.shape.solve_arity if self.shape else None,
            "extra_clause_arguments": self.shape.extra_arity if self.shape else None,
            "findings": list(self.findings),
            "non_failure": {f"{name}/{arity}": status.value for (name, arity), status in self.non_failure.items()},
        }


def _first_arg_role(head: Compound) -> str:
    if not head.args:
        return "other"
    first = head.args[0]
    if first == TRUE:
        return "true"
    if isinstance(first, Variable):
        return "clause"
    if first.key == (",", 2) and all(isinstance(arg, Variable) for arg in first.args) \
            and first.args[0] != first.args[1]:
        return "conjunction"
    if first.key == (NEGATION, 1) and isinstance(first.args[0], Variable):
        return "negation"
    return "other"


def _solve_clauses(program: Program) -> List[Clause]:
    return [clause for clause in program if clause.head.functor == SOLVE]


def _is_solve(literal: Literal, arity: int) -> bool:
    return isinstance(literal.atom, Compound) and literal.atom.key == (SOLVE, arity)


def _depends_on_meta(graph: DependencyGraph, key: PredicateKey) -> bool:
    reached = graph.depends_on.get(key, set())
    return any(name in (SOLVE, CLAUSE) for name, _ in reached)


def _match_shape(program: Program, graph: DependencyGraph, findings: List[str]) -> Optional[DoubleExtendedShape]:
    clauses = _solve_clauses(program)
    if not clauses:
        findings.append("no solve clauses")
        return None
    arities = {clause.head.arity for clause in clauses}
    if len(arities) != 1:
        findings.append(f"solve is defined with several arities {sorted(arities)}")
        return None
    arity = arities.pop()
    roles: Dict[str, List[Clause]] = {}
    for clause in clauses:
        roles.setdefault(_first_arg_role(clause.head), []).append(clause)
    for role in ("true", "conjunction", "clause"):
        if len(roles.get(role, [])) != 1:
            findings.append(f"expected exactly one {role} clause for solve, found {len(roles.get(role, []))}")
    for role in ("negation", "other"):
        if roles.get(role):
            findings.append(f"unexpected solve clause: {roles[role][0]}")
    if any(len(roles.get(role, [])) != 1 for role in ("true", "conjunction", "clause")) \
            or roles.get("negation") or roles.get("other"):
        return None

    true_clause, conj_clause, clause_clause = roles["true"][0], roles["conjunction"][0], roles["clause"][0]
    for clause in (true_clause, conj_clause, clause_clause):
        if not clause.is_definite:
            findings.append(f"negative literal in {clause}")
            return None

    if any(_is_solve(literal, arity) or literal.key and literal.key[0] == CLAUSE for literal in true_clause.body):
        findings.append("the true clause calls solve or clause")
        return None

    a, b = conj_clause.head.args[0].args
    solves = [i for i, literal in enumerate(conj_clause.body) if _is_solve(literal, arity)]
    if len(solves) != 2 or conj_clause.body[solves[0]].atom.args[0] != a \
            or conj_clause.body[solves[1]].atom.args[0] != b:
        findings.append("the conjunction clause must call solve on A and then on B")
        return None

    meta = clause_clause.head.args[0]
    lookups = [i for i, literal in enumerate(clause_clause.body) if literal.key and literal.key[0] == CLAUSE]
    if len(lookups) != 1:
        findings.append(f"the clause clause must call clause exactly once, found {len(lookups)}")
        return None
    lookup = clause_clause.body[lookups[0]].atom
    if lookup.arity < 2 or lookup.args[0] != meta or not isinstance(lookup.args[1], Variable) \
            or lookup.args[1] == meta:
        findings.append(f"unexpected clause lookup {format_term(lookup)}")
        return None
    body_var = lookup.args[1]
    inner = [i for i, literal in enumerate(clause_clause.body) if _is_solve(literal, arity)]
    if len(inner) != 1 or inner[0] < lookups[0] or clause_clause.body[inner[0]].atom.args[0] != body_var:
        findings.append("the clause clause must call solve on the body after the lookup")
        return None

    clause_arities = {key[1] for key in program.referenced_predicates() if key[0] == CLAUSE}
    if len(clause_arities) > 1:
        findings.append(f"clause is used with several arities {sorted(clause_arities)}")
        return None

    shape = DoubleExtendedShape(
        solve_arity=arity, clause_arity=lookup.arity, true_clause=true_clause, conj_clause=conj_clause,
        clause_clause=clause_clause, conj_solves=(solves[0], solves[1]),
        clause_atom=lookups[0], clause_solve=inner[0],
    )
    for slot, clause, _, literal in shape.extra_goals():
        key = literal.key
        if key is None:
            findings.append(f"variable goal in slot {slot}")
            return None
        if key[0] in (SOLVE, CLAUSE) or _depends_on_meta(graph, key):
            findings.append(f"{key[0]}/{key[1]} in slot {slot} depends on solve or clause")
            return None
    return shape


def _is_normal_vanilla(program: Program) -> bool:
    clauses = _solve_clauses(program)
    if len(clauses) != 4 or any(clause.head.arity != 1 for clause in clauses):
        return False
    roles = {_first_arg_role(clause.head): clause for clause in clauses}
    if set(roles) != {"true", "conjunction", "negation", "clause"}:
        return False
    if roles["true"].body:
        return False
    a, b = roles["conjunction"].head.args[0].args
    if roles["conjunction"].body != (Literal(Compound(SOLVE, (a,))), Literal(Compound(SOLVE, (b,)))):
        return False
    negated = roles["negation"].head.args[0].args[0]
    if roles["negation"].body != (Literal(Compound(SOLVE, (negated,)), positive=False),):
        return False
    meta = roles["clause"].head.args[0]
    body = roles["clause"].body
    return (len(body) == 2 and body[0].key == (CLAUSE, 2) and body[0].atom.args[0] == meta
            and isinstance(body[0].atom.args[1], Variable) and body[1].atom == Compound(SOLVE, (body[0].atom.args[1],)))


def _looks_ground_representation(program: Program) -> bool:
    if any(key[0] in (SOLVE, CLAUSE) for key in program.referenced_predicates()):
        return False
    functors: Set[Tuple[str, int]] = set()
    for clause in program:
        for term in clause.terms():
            stack = [term]
            while stack:
                current = stack.pop()
                if isinstance(current, Compound):
                    functors.add(current.key)
                    stack.extend(current.args)
    return ("atom", 2) in functors and ("if", 2) in functors


def _linear_head(clause: Clause) -> bool:
    return is_linear_fresh_sequence(clause.head.args)


def _blocked(clause: Clause, must_fail: Set[PredicateKey]) -> bool:
    return any(literal.positive and (literal.key == ("fail", 0) or literal.key in must_fail)
               for literal in clause.body)


def _atom_rule(literal: Literal, seen: Set[int], meta_vars: Set[int],
               analysis: Dict[PredicateKey, NonFailure]) -> _Check:
    atom = literal.atom
    label = literal.format()
    if not literal.positive or isinstance(atom, Variable):
        return _Check(Verdict.UNKNOWN, "non_failure", f"{label} is not covered by the syntactic rules")
    key = atom.key
    if key in (("true", 0), ("write", 1), ("nl", 0)):
        return _Check(Verdict.YES)
    if key == ("fail", 0):
        return _Check(Verdict.NO, "non_failure", f"{label} always fails")
    if key == ("=", 2):
        left, right = atom.args
        if isinstance(left, Variable) and left.id not in seen:
            fresh, other = left, right
        elif isinstance(right, Variable) and right.id not in seen:
            fresh, other = right, left
        else:
            if any(isinstance(side, Variable) and side.id in meta_vars for side in (left, right)):
                return _Check(Verdict.NO, "meta_variable_binding", f"{label} binds a meta-variable")
            return _Check(Verdict.UNKNOWN, "non_failure", f"{label} may fail")
        if variable_ids(other) & meta_vars:
            return _Check(Verdict.UNKNOWN, "meta_variable_binding",
                          f"{label} shares a meta-variable with {format_term(fresh)}")
        return _Check(Verdict.YES)
    if is_builtin(key):
        return _Check(Verdict.UNKNOWN, "non_failure", f"{label} may fail")
    status = analysis.get(key, NonFailure.MUST_FAIL)
    if status is NonFailure.SAFE:
        return _Check(Verdict.YES)
    if status is NonFailure.MUST_FAIL:
        return _Check(Verdict.NO, "non_failure", f"{key[0]}/{key[1]} cannot succeed")
    return _Check(Verdict.UNKNOWN, "non_failure", f"non-failure of {key[0]}/{key[1]} is not decided")


def _body_is_safe(clause: Clause, analysis: Dict[PredicateKey, NonFailure]) -> bool:
    seen = variable_ids(clause.head)
    for literal in clause.body:
        if _atom_rule(literal, seen, set(), analysis).status is not Verdict.YES:
            return False
        seen |= variable_ids(literal.atom)
    return True


def non_failure_analysis(program: Program, overrides: Iterable[PredicateKey] = ()) -> Dict[PredicateKey, NonFailure]:
    """Three-valued non-failure of every user predicate the program mentions.

    safe: some clause can succeed, and every clause that can succeed has
    pairwise distinct variables as head arguments and a body of safe atoms.
    must_fail: undefined, or every clause calls fail or a must_fail predicate.
    Overrides are taken as safe.
    """
    keys = {key for key in program.referenced_predicates() if not is_builtin(key)}
    forced = set(overrides)
    must_fail = {key for key in keys if not program.defines(key) and key not in forced}
    changed = True
    while changed:
        changed = False
        for key in keys - must_fail - forced:
            if all(_blocked(clause, must_fail) for clause in program.clauses_for(key)):
                must_fail.add(key)
                changed = True

    analysis: Dict[PredicateKey, NonFailure] = {key: NonFailure.UNKNOWN for key in keys}
    analysis.update({key: NonFailure.MUST_FAIL for key in must_fail})
    analysis.update({key: NonFailure.SAFE for key in forced})
    changed = True
    while changed:
        changed = False
        for key in keys:
            if analysis[key] is not NonFailure.UNKNOWN:
                continue
            open_clauses = [c for c in program.clauses_for(key) if not _blocked(c, must_fail)]
            if open_clauses and all(_linear_head(c) and _body_is_safe(c, analysis) for c in open_clauses):
                analysis[key] = NonFailure.SAFE
                changed = True
    return analysis


def _sequence_check(name: str, terms: Sequence[Term], preceding: Set[int]) -> _Check:
    if not is_linear_fresh_sequence(terms):
        return _Check(Verdict.NO, "argument_sequences", f"{name} is not a linear sequence of variables")
    if any(term.id in preceding for term in terms):
        return _Check(Verdict.UNKNOWN, "argument_sequences", f"{name} shares variables with a preceding subgoal")
    return _Check(Verdict.YES)


def _vars_before(clause: Clause, position: int) -> Set[int]:
    result: Set[int] = set()
    for literal in clause.body[:position]:
        result |= variable_ids(literal.atom)
    return result


def _aggregate(checks: Sequence[_Check]) -> _Check:
    for status in (Verdict.NO, Verdict.UNKNOWN):
        for check in checks:
            if check.status is status:
                return check
    return _Check(Verdict.YES)


def _argument_sequences(shape: DoubleExtendedShape) -> Tuple[_Check, bool]:
    first, second = shape.conj_solves
    conj, lookup = shape.conj_clause, shape.clause_clause
    body_alternative = _aggregate([
        _sequence_check("the first conjunct's extra arguments", conj.body[first].atom.args[1:], _vars_before(conj, first)),
        _sequence_check("the second conjunct's extra arguments", conj.body[second].atom.args[1:], _vars_before(conj, second)),
        _sequence_check("the body call's extra arguments", lookup.body[shape.clause_solve].atom.args[1:],
                        _vars_before(lookup, shape.clause_solve)),
        _sequence_check("the clause lookup's extra arguments", lookup.body[shape.clause_atom].atom.args[2:],
                        _vars_before(lookup, shape.clause_atom)),
    ])
    head_free = all(
        is_linear_fresh_sequence(clause.head.args[1:])
        for clause in (shape.true_clause, shape.conj_clause, shape.clause_clause)
    )
    if body_alternative.status is Verdict.YES or head_free:
        return _Check(Verdict.YES), head_free
    if body_alternative.status is Verdict.UNKNOWN:
        return body_alternative, head_free
    return _Check(Verdict.NO, "argument_sequences", body_alternative.reason), head_free


def _restricted_verdict(shape: DoubleExtendedShape, analysis: Dict[PredicateKey, NonFailure]) -> Tuple[RestrictedVerdict, bool]:
    checks: List[_Check] = []
    sequences, head_free = _argument_sequences(shape)
    checks.append(sequences)

    meta_vars = {clause: set() for clause in (shape.true_clause, shape.conj_clause, shape.clause_clause)}
    meta_vars[shape.conj_clause] = {v.id for v in shape.conj_vars}
    meta_vars[shape.clause_clause] = {v.id for v in shape.clause_vars}
    for slot, clause, position, literal in shape.extra_goals():
        seen = variable_ids(clause.head) | _vars_before(clause, position)
        check = _atom_rule(literal, seen, meta_vars[clause], analysis)
        if check.status is not Verdict.YES:
            check = _Check(check.status, check.condition, f"{slot}: {check.reason}")
        checks.append(check)

    verdict = _aggregate(checks)
    reasons = tuple(check.reason for check in checks if check.status is not Verdict.YES)
    return RestrictedVerdict(verdict.status, verdict.condition, reasons), head_free


def classify_interpreter(program: Program, non_failing: Iterable[PredicateKey] = ()) -> ClassificationReport:
    """Classify an interpreter program.

    Args:
        program: The interpreter clauses (without any encoded object program).
        non_failing: Predicates to treat as non-failing regardless of the analysis.

    Returns:
        A ClassificationReport; restricted is yes only for double extended programs.
    """
    graph = dependency_relations(program)
    findings: List[str] = []
    analysis = non_failure_analysis(program, non_failing)

    if _is_normal_vanilla(program):
        findings.append("vanilla interpreter extended with negation")
        report = ClassificationReport(InterpreterClass.NORMAL, False,
                                      RestrictedVerdict(Verdict.NO, "double_extended"), findings,
                                      non_failure=analysis)
        logger.info(f"Classified interpreter as {report.interpreter_class.value}")
        return report

    shape = _match_shape(program, graph, findings)
    if shape is None:
        kind = InterpreterClass.GROUND_REP if _looks_ground_representation(program) else InterpreterClass.OTHER
        report = ClassificationReport(kind, False, RestrictedVerdict(Verdict.NO, "double_extended", tuple(findings)),
                                      findings, non_failure=analysis)
        logger.info(f"Classified interpreter as {kind.value}")
        return report

    restricted, head_free = _restricted_verdict(shape, analysis)
    plain = (shape.solve_arity == 1 and shape.clause_arity == 2 and not shape.extra_goals())
    if plain:
        kind = InterpreterClass.VANILLA
    elif restricted.status is Verdict.YES:
        kind = InterpreterClass.RESTRICTED
    else:
        kind = InterpreterClass.DOUBLE_EXTENDED
    report = ClassificationReport(kind, True, restricted, findings, shape, head_free, analysis)
    logger.info(f"Classified interpreter as {kind.value}, restricted: {restricted}")
    return report
