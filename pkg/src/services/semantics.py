"""Non-ground immediate consequence operator and computed answer semantics."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from ..core.program import Clause, Literal, PredicateKey, Program, QuerySeq, is_builtin
from ..core.terms import (
    Compound, Substitution, Term, VarSupply, VariantSet, format_term, rename_apart, unify,
)
from .engine import Budget, computed_answers, derive

logger = logging.getLogger(__name__)

DEFAULT_POWERS = 12
DEFAULT_ATOM_LIMIT = 2000


class SemanticsError(Exception):
    """Custom exception for fixpoint semantics operations."""
    pass


@dataclass
class PiInterpretation:
    """A set of possibly non-ground atoms kept up to variance."""
    atoms: VariantSet = field(default_factory=VariantSet)
    truncated: bool = False

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def __iter__(self) -> Iterator[Term]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def same_as(self, other: "PiInterpretation") -> bool:
        return self.atoms.same_as(other.atoms)

    def issubset(self, other: "PiInterpretation") -> bool:
        return self.atoms.issubset(other.atoms)

    def by_predicate(self) -> Dict[PredicateKey, List[Term]]:
        index: Dict[PredicateKey, List[Term]] = {}
        for atom in self.atoms:
            if isinstance(atom, Compound):
                index.setdefault(atom.key, []).append(atom)
        return index

    def to_list(self) -> List[str]:
        return sorted(format_term(atom) for atom in self.atoms)


def _builtin(atom: Compound, s: Substitution) -> List[Substitution]:
    key = atom.key
    if key in (("true", 0), ("write", 1), ("nl", 0)):
        return [s]
    if key == ("fail", 0):
        return []
    if key == ("=", 2):
        result = unify(atom.args[0], atom.args[1], s)
        return [result] if result is not None else []
    if key == ("\\=", 2):
        return [s] if unify(atom.args[0], atom.args[1], s) is None else []
    raise SemanticsError(f"Unknown built-in {atom.functor}/{atom.arity}")


def _body_solutions(body: Tuple[Literal, ...], index: Dict[PredicateKey, List[Term]],
                    supply: VarSupply) -> Iterator[Substitution]:
    """Unify body atoms left to right against renamed members, accumulating the mgu."""
    states: List[Substitution] = [Substitution()]
    for literal in body:
        if not literal.positive:
            raise SemanticsError("The consequence operator is defined for positive programs only")
        atom = literal.atom
        if not isinstance(atom, Compound):
            raise SemanticsError("Variable body atom")
        next_states: List[Substitution] = []
        for s in states:
            if is_builtin(atom.key):
                next_states.extend(_builtin(atom, s))
                continue
            for member in index.get(atom.key, ()):
                renamed = rename_apart(member, supply)
                result = unify(atom, renamed, s)
                if result is not None:
                    next_states.append(result)
        states = next_states
        if not states:
            return
    yield from states


def tpi_step(program: Program, interpretation: PiInterpretation, supply: Optional[VarSupply] = None,
             atom_limit: int = DEFAULT_ATOM_LIMIT) -> PiInterpretation:
    """One application of the operator: head instances of clauses whose bodies unify with members."""
    if not program.is_definite:
        raise SemanticsError("The consequence operator is defined for positive programs only")
    supply = supply or VarSupply.after(program, list(interpretation))
    index = interpretation.by_predicate()
    result = PiInterpretation(truncated=interpretation.truncated)
    for clause in program:
        renamed: Clause = rename_apart(clause, supply)
        for s in _body_solutions(renamed.body, index, supply):
            if len(result) >= atom_limit:
                result.truncated = True
                logger.debug(f"Interpretation truncated at {atom_limit} atoms")
                return result
            result.atoms.add(s.apply(renamed.head))
    return result


def tpi_power(program: Program, n: int, supply: Optional[VarSupply] = None,
              atom_limit: int = DEFAULT_ATOM_LIMIT) -> PiInterpretation:
    """n-fold application starting from the empty interpretation."""
    if n < 0:
        raise SemanticsError(f"Power must be non-negative, got {n}")
    supply = supply or VarSupply.after(program)
    current = PiInterpretation()
    for _ in range(n):
        current = tpi_step(program, current, supply, atom_limit)
    return current


@dataclass(frozen=True)
class Stabilization:
    interpretation: PiInterpretation
    powers: int
    stable: bool


def tpi_fixpoint(program: Program, max_powers: int = DEFAULT_POWERS, supply: Optional[VarSupply] = None,
                 atom_limit: int = DEFAULT_ATOM_LIMIT) -> Stabilization:
    """Iterate until two consecutive powers agree up to variance, or max_powers is reached.

    A truncated power stops the iteration and is reported as the last power reached.
    """
    supply = supply or VarSupply.after(program)
    current = PiInterpretation()
    for power in range(1, max_powers + 1):
        following = tpi_step(program, current, supply, atom_limit)
        if following.same_as(current) and not following.truncated:
            logger.info(f"Consequence operator stable after {power - 1} powers with {len(current)} atoms")
            return Stabilization(current, power - 1, True)
        current = following
        if current.truncated:
            logger.info(f"Consequence operator truncated at power {power} with {len(current)} atoms")
            return Stabilization(current, power, False)
    logger.info(f"Consequence operator not stable within {max_powers} powers")
    return Stabilization(current, max_powers, False)


def o_semantics_approx(program: Program, budget: Budget = Budget(),
                       supply: Optional[VarSupply] = None) -> PiInterpretation:
    """Computed answers of p(X1, ..., Xn) for every defined predicate, up to variance.

    The result is marked truncated when any run hit the budget.
    """
    if not program.is_definite:
        raise SemanticsError("Computed answer semantics is approximated for definite programs only")
    supply = supply or VarSupply.after(program)
    result = PiInterpretation()
    for name, arity in program.predicates:
        query = QuerySeq.of(Compound(name, tuple(supply.fresh_sequence(arity, prefix="X"))))
        answers = computed_answers(derive(program, query, budget, supply))
        result.truncated = result.truncated or not answers.complete
        for answer in answers.terms():
            result.atoms.add(answer)
    return result
