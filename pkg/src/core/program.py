"""Clauses, programs, queries and predicate dependencies."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .terms import CONJUNCTION, TRUE, Compound, Term, VarNaming, format_term

logger = logging.getLogger(__name__)

PredicateKey = Tuple[str, int]

NEGATION = "\\+"
BUILTINS: FrozenSet[PredicateKey] = frozenset({
    ("true", 0), ("fail", 0), ("=", 2), ("\\=", 2), ("write", 1), ("nl", 0),
})


class ProgramError(Exception):
    """Custom exception for program construction operations."""
    pass


def is_builtin(key: PredicateKey) -> bool:
    return key in BUILTINS


@dataclass(frozen=True)
class Literal:
    """A body or query literal; negative literals only occur in normal programs."""
    atom: Term
    positive: bool = True

    def map_terms(self, fn: Callable[[Term], Term]) -> "Literal":
        return Literal(fn(self.atom), self.positive)

    @property
    def key(self) -> Optional[PredicateKey]:
        return self.atom.key if isinstance(self.atom, Compound) else None

    def as_term(self) -> Term:
        """The literal as a term, negation written as the \\+ functor."""
        return self.atom if self.positive else Compound(NEGATION, (self.atom,))

    def format(self, naming: Optional[VarNaming] = None) -> str:
        return format_term(self.as_term(), naming, 999)


@dataclass(frozen=True)
class Clause:
    head: Compound
    body: Tuple[Literal, ...] = ()

    def __post_init__(self):
        if not isinstance(self.head, Compound):
            raise ProgramError(f"Clause head must be an atom, got {format_term(self.head)}")

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def key(self) -> PredicateKey:
        return self.head.key

    @property
    def is_definite(self) -> bool:
        return all(literal.positive for literal in self.body)

    def map_terms(self, fn: Callable[[Term], Term]) -> "Clause":
        return Clause(fn(self.head), tuple(literal.map_terms(fn) for literal in self.body))

    def terms(self) -> List[Term]:
        return [self.head] + [literal.atom for literal in self.body]

    def as_term(self) -> Term:
        if not self.body:
            return self.head
        return Compound(":-", (self.head, list_to_conjunction([lit.as_term() for lit in self.body])))

    def format(self) -> str:
        naming = VarNaming()
        head = format_term(self.head, naming, 1199)
        if not self.body:
            return f"{head}."
        body = ", ".join(literal.format(naming) for literal in self.body)
        return f"{head} :- {body}."

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class QuerySeq:
    literals: Tuple[Literal, ...] = ()

    @classmethod
    def of(cls, *atoms: Term) -> "QuerySeq":
        return cls(tuple(Literal(atom) for atom in atoms))

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_definite(self) -> bool:
        return all(literal.positive for literal in self.literals)

    def map_terms(self, fn: Callable[[Term], Term]) -> "QuerySeq":
        return QuerySeq(tuple(literal.map_terms(fn) for literal in self.literals))

    def terms(self) -> List[Term]:
        return [literal.atom for literal in self.literals]

    def as_term(self) -> Term:
        """The query as one term: a right-nested conjunction, true when empty."""
        return list_to_conjunction([literal.as_term() for literal in self.literals])

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        naming = VarNaming()
        return ", ".join(literal.format(naming) for literal in self.literals) or "true"


class Program:
    """An ordered clause sequence with a predicate table."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.clauses: Tuple[Clause, ...] = tuple(clauses)
        table: Dict[PredicateKey, List[int]] = defaultdict(list)
        for index, clause in enumerate(self.clauses):
            table[clause.key].append(index)
        self._table = {key: tuple(indices) for key, indices in table.items()}

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.clauses == other.clauses

    def __hash__(self) -> int:
        return hash(self.clauses)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.clauses + other.clauses)

    def clause_indices(self, key: PredicateKey) -> Tuple[int, ...]:
        return self._table.get(key, ())

    def clauses_for(self, key: PredicateKey) -> List[Clause]:
        return [self.clauses[i] for i in self._table.get(key, ())]

    def defines(self, key: PredicateKey) -> bool:
        return key in self._table

    @property
    def predicates(self) -> List[PredicateKey]:
        return list(self._table)

    @property
    def is_definite(self) -> bool:
        return all(clause.is_definite for clause in self.clauses)

    def referenced_predicates(self) -> Set[PredicateKey]:
        keys = set(self._table)
        for clause in self.clauses:
            for literal in clause.body:
                if literal.key is not None:
                    keys.add(literal.key)
        return keys

    def terms(self) -> List[Term]:
        return [term for clause in self.clauses for term in clause.terms()]

    def format(self) -> str:
        return "\n".join(clause.format() for clause in self.clauses)


@dataclass
class DependencyGraph:
    """Refers-to edges and their transitive (not reflexive) closure."""
    refers_to: Dict[PredicateKey, Set[PredicateKey]] = field(default_factory=dict)
    depends_on: Dict[PredicateKey, Set[PredicateKey]] = field(default_factory=dict)

    @property
    def nodes(self) -> Set[PredicateKey]:
        return set(self.refers_to)

    def depends(self, p: PredicateKey, q: PredicateKey) -> bool:
        return q in self.depends_on.get(p, set())

    def mutually_recursive(self, p: PredicateKey, q: PredicateKey) -> bool:
        return self.depends(p, q) and self.depends(q, p)

    def is_recursive(self, p: PredicateKey) -> bool:
        return self.mutually_recursive(p, p)

    def strictly_depends(self, p: PredicateKey, q: PredicateKey) -> bool:
        """p depends on q but not vice versa."""
        return self.depends(p, q) and not self.depends(q, p)

    def recursion_classes(self) -> List[FrozenSet[PredicateKey]]:
        classes: List[FrozenSet[PredicateKey]] = []
        placed: Set[PredicateKey] = set()
        for node in sorted(self.refers_to):
            if node in placed or not self.is_recursive(node):
                continue
            members = frozenset(q for q in self.refers_to if self.mutually_recursive(node, q))
            placed |= members
            classes.append(members)
        return classes


def dependency_relations(program: Program) -> DependencyGraph:
    """Build the refers-to graph of a program and its transitive closure."""
    refers: Dict[PredicateKey, Set[PredicateKey]] = {key: set() for key in program.referenced_predicates()}
    for clause in program:
        for literal in clause.body:
            if literal.key is not None:
                refers[clause.key].add(literal.key)

    closure: Dict[PredicateKey, Set[PredicateKey]] = {}
    for start in refers:
        reached: Set[PredicateKey] = set()
        frontier = list(refers[start])
        while frontier:
            node = frontier.pop()
            if node in reached:
                continue
            reached.add(node)
            frontier.extend(refers.get(node, ()))
        closure[start] = reached
    return DependencyGraph(refers_to=refers, depends_on=closure)


def forms_partition(parts: Sequence[Sequence[Term]], whole: Sequence[Term]) -> bool:
    """True iff the non-empty parts, read in order, are exactly whole."""
    if not whole:
        return len(parts) == 0
    if any(len(part) == 0 for part in parts):
        return False
    flat = [item for part in parts for item in part]
    return flat == list(whole)


def conjunction_to_list(t: Term) -> List[Term]:
    """Split a right-nested ','-term into its conjuncts."""
    items: List[Term] = []
    current = t
    while isinstance(current, Compound) and current.functor == CONJUNCTION and len(current.args) == 2:
        items.append(current.args[0])
        current = current.args[1]
    items.append(current)
    return items


def list_to_conjunction(ts: Sequence[Term]) -> Term:
    """Right-nested ','-term of ts; true for the empty list."""
    if not ts:
        return TRUE
    result = ts[-1]
    for item in reversed(ts[:-1]):
        result = Compound(CONJUNCTION, (item, result))
    return result


def literal_from_term(t: Term) -> Literal:
    if isinstance(t, Compound) and t.functor == NEGATION and len(t.args) == 1:
        return Literal(t.args[0], positive=False)
    return Literal(t)


def query_from_term(t: Term) -> QuerySeq:
    """Read a conjunction term as a query; true alone is the empty query."""
    if t == TRUE:
        return QuerySeq()
    return QuerySeq(tuple(literal_from_term(item) for item in conjunction_to_list(t)))
