"""Clause encodings of object programs and the numbered ground representation."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..core.program import (
    Clause, Literal, PredicateKey, Program, QuerySeq, list_to_conjunction,
)
from ..core.terms import NIL, TRUE, Compound, Term, Variable, VarSupply, format_term, make_list

logger = logging.getLogger(__name__)

CLAUSE = "clause"


class EncodingError(Exception):
    """Custom exception for program encoding operations."""
    pass


@dataclass(frozen=True)
class FreshVars:
    """Filler policy: every encoded fact gets its own linear tail of fresh variables."""


FRESH_VARS = FreshVars()

FillerEntry = Union[Term, Sequence[Term], str, float, int]
Filler = Union[FreshVars, Sequence[FillerEntry]]


def check_amalgamation(program: Program) -> None:
    """Reject programs whose language mentions clause/n or ','/2.

    Raises:
        EncodingError: If the program defines or calls such a predicate.
    """
    for key in sorted(program.referenced_predicates()):
        if key[0] == CLAUSE:
            raise EncodingError(f"Object program uses reserved predicate {key[0]}/{key[1]}")
        if key == (",", 2):
            raise EncodingError("Object program uses ','/2 as a predicate")


def body_term(clause: Clause) -> Term:
    return list_to_conjunction([literal.as_term() for literal in clause.body])


def clause_encode(program: Program) -> Program:
    """One clause(Head, Body) fact per clause, in source order."""
    check_amalgamation(program)
    facts = [Clause(Compound(CLAUSE, (clause.head, body_term(clause)))) for clause in program]
    logger.debug(f"Encoded {len(facts)} clauses as clause/2 facts")
    return Program(facts)


def _as_term(value: FillerEntry) -> Term:
    if isinstance(value, (Variable, Compound)):
        return value
    if isinstance(value, (str, int, float)):
        return Compound(str(value))
    raise EncodingError(f"Cannot use {value!r} as an encoding argument")


def _filler_terms(entry: FillerEntry, k: int, index: int) -> Tuple[Term, ...]:
    if k == 1 and not isinstance(entry, (list, tuple)):
        return (_as_term(entry),)
    if not isinstance(entry, (list, tuple)):
        raise EncodingError(f"Filler for clause {index} must list {k} terms")
    terms = tuple(_as_term(item) for item in entry)
    if len(terms) != k:
        raise EncodingError(f"Filler for clause {index} has {len(terms)} terms, expected {k}")
    return terms


def clause_encode_extended(program: Program, k: int, filler: Filler = FRESH_VARS,
                           supply: Optional[VarSupply] = None) -> Program:
    """clause(H, B, s1, ..., sk) facts; k = 0 is plain clause_encode.

    Args:
        program: The object program.
        k: Number of extra arguments per fact.
        filler: FRESH_VARS, or one entry per clause (a bare term is accepted when k = 1).
        supply: Variable supply for fresh tails.

    Raises:
        EncodingError: On amalgamation violations or filler mismatches.
    """
    if k < 0:
        raise EncodingError(f"Extra arity must be non-negative, got {k}")
    if k == 0:
        return clause_encode(program)
    check_amalgamation(program)
    if not isinstance(filler, FreshVars) and len(filler) != len(program):
        raise EncodingError(f"Filler has {len(filler)} entries for {len(program)} clauses")
    supply = supply or VarSupply.after(program)

    facts = []
    for index, clause in enumerate(program):
        if isinstance(filler, FreshVars):
            extra = tuple(supply.fresh_sequence(k, prefix="S"))
        else:
            extra = _filler_terms(filler[index], k, index)
        facts.append(Clause(Compound(CLAUSE, (clause.head, body_term(clause)) + extra)))
    return Program(facts)


@dataclass
class SymbolTable:
    """Numbering of predicates p(i), functors f(i) and constants c(i).

    Indices are dense and assigned on first occurrence. Variable numbering
    restarts for every clause and query; the names used are kept per clause
    for display.
    """
    predicates: Dict[PredicateKey, int] = field(default_factory=dict)
    functors: Dict[Tuple[str, int], int] = field(default_factory=dict)
    constants: Dict[str, int] = field(default_factory=dict)
    variables: List[List[str]] = field(default_factory=list)

    @staticmethod
    def _number(table: Dict, key) -> int:
        if key not in table:
            table[key] = len(table)
        return table[key]

    def predicate_code(self, key: PredicateKey) -> Term:
        return Compound("p", (Compound(str(self._number(self.predicates, key))),))

    def functor_code(self, key: Tuple[str, int]) -> Term:
        return Compound("f", (Compound(str(self._number(self.functors, key))),))

    def constant_code(self, name: str) -> Term:
        return Compound("c", (Compound(str(self._number(self.constants, name))),))

    @staticmethod
    def _lookup(table: Dict, index: int, kind: str):
        for key, value in table.items():
            if value == index:
                return key
        raise EncodingError(f"No {kind} numbered {index}")

    def predicate_of(self, index: int) -> PredicateKey:
        return self._lookup(self.predicates, index, "predicate")

    def functor_of(self, index: int) -> Tuple[str, int]:
        return self._lookup(self.functors, index, "functor")

    def constant_of(self, index: int) -> str:
        return self._lookup(self.constants, index, "constant")

    def to_dict(self) -> Dict[str, Dict[str, str]]:
        return {
            "predicates": {f"p({i})": f"{name}/{arity}" for (name, arity), i in self.predicates.items()},
            "functors": {f"f({i})": f"{name}/{arity}" for (name, arity), i in self.functors.items()},
            "constants": {f"c({i})": name for name, i in self.constants.items()},
            "variables": {f"clause {n}": {f"v({i})": name for i, name in enumerate(names)}
                          for n, names in enumerate(self.variables)},
        }


class _GroundEncoder:
    def __init__(self, table: SymbolTable):
        self.table = table
        self.variables: Dict[int, int] = {}
        self.names: List[str] = []

    def variable(self, var: Variable) -> Term:
        if var.id not in self.variables:
            self.variables[var.id] = len(self.variables)
            self.names.append(var.name)
        return Compound("v", (Compound(str(self.variables[var.id])),))

    def term(self, t: Term) -> Term:
        if isinstance(t, Variable):
            return self.variable(t)
        if not t.args:
            return self.table.constant_code(t.functor)
        code = self.table.functor_code(t.key)
        return Compound("term", (code, make_list([self.term(arg) for arg in t.args])))

    def atom(self, atom: Term) -> Term:
        if isinstance(atom, Variable):
            raise EncodingError("Cannot encode a variable goal in the ground representation")
        code = self.table.predicate_code(atom.key)
        return Compound("atom", (code, make_list([self.term(arg) for arg in atom.args])))

    def literal(self, literal: Literal) -> Term:
        encoded = self.atom(literal.atom)
        return encoded if literal.positive else Compound("not", (encoded,))

    def body(self, literals: Sequence[Literal]) -> Term:
        if not literals:
            return TRUE
        encoded = [self.literal(literal) for literal in literals]
        result = encoded[-1]
        for item in reversed(encoded[:-1]):
            result = Compound("and", (item, result))
        return result

    def clause(self, clause: Clause) -> Term:
        head = self.atom(clause.head)
        return Compound("if", (head, self.body(clause.body)))


def ground_encode(program: Program, table: Optional[SymbolTable] = None) -> Tuple[List[Term], SymbolTable]:
    """Encode every clause as a ground if(atom(...), Body) term."""
    table = table if table is not None else SymbolTable()
    encoded = []
    for clause in program:
        encoder = _GroundEncoder(table)
        encoded.append(encoder.clause(clause))
        table.variables.append(encoder.names)
    logger.debug(f"Ground-encoded {len(encoded)} clauses over {len(table.predicates)} predicates")
    return encoded, table


def ground_encode_query(query: QuerySeq, table: SymbolTable) -> Term:
    """Encode a query as and/not/atom/true; new symbols extend the table."""
    return _GroundEncoder(table).body(query.literals)


def ground_program_term(encoded: Sequence[Term]) -> Term:
    """The encoded clauses as one list term."""
    return make_list(list(encoded))


def _index(code: Term, kind: str) -> int:
    if not (isinstance(code, Compound) and code.functor == kind and len(code.args) == 1):
        raise EncodingError(f"Expected {kind}(N), got {format_term(code)}")
    number = code.args[0]
    if not (isinstance(number, Compound) and not number.args and number.functor.isdigit()):
        raise EncodingError(f"Malformed index in {format_term(code)}")
    return int(number.functor)


def _items(t: Term) -> List[Term]:
    items = []
    while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    if t != NIL:
        raise EncodingError(f"Expected a proper argument list, got tail {format_term(t)}")
    return items


class _GroundDecoder:
    def __init__(self, table: SymbolTable, supply: VarSupply, variables: Dict[int, Variable]):
        self.table = table
        self.supply = supply
        self.variables = variables

    def term(self, t: Term) -> Term:
        if isinstance(t, Variable):
            return t
        if t.functor == "v" and len(t.args) == 1:
            index = _index(t, "v")
            if index not in self.variables:
                self.variables[index] = self.supply.fresh(f"X{index}")
            return self.variables[index]
        if t.functor == "c" and len(t.args) == 1:
            return Compound(self.table.constant_of(_index(t, "c")))
        if t.functor == "term" and len(t.args) == 2:
            name, arity = self.table.functor_of(_index(t.args[0], "f"))
            args = tuple(self.term(arg) for arg in _items(t.args[1]))
            if len(args) != arity:
                raise EncodingError(f"Functor {name}/{arity} applied to {len(args)} arguments")
            return Compound(name, args)
        raise EncodingError(f"Malformed term representation {format_term(t)}")

    def atom(self, t: Term) -> Compound:
        if not (isinstance(t, Compound) and t.functor == "atom" and len(t.args) == 2):
            raise EncodingError(f"Malformed atom representation {format_term(t)}")
        name, arity = self.table.predicate_of(_index(t.args[0], "p"))
        args = tuple(self.term(arg) for arg in _items(t.args[1]))
        if len(args) != arity:
            raise EncodingError(f"Predicate {name}/{arity} applied to {len(args)} arguments")
        return Compound(name, args)

    def literals(self, t: Term) -> List[Literal]:
        if t == TRUE:
            return []
        if isinstance(t, Compound) and t.functor == "and" and len(t.args) == 2:
            return self.literals(t.args[0]) + self.literals(t.args[1])
        if isinstance(t, Compound) and t.functor == "not" and len(t.args) == 1:
            return [Literal(self.atom(t.args[0]), positive=False)]
        return [Literal(self.atom(t))]


def ground_decode(t: Term, table: SymbolTable, supply: Optional[VarSupply] = None,
                  variables: Optional[Dict[int, Variable]] = None) -> Union[Clause, Term]:
    """Invert ground_encode up to variable renaming.

    if/2 decodes to a Clause; formulas decode to an object query term; atom/term
    representations decode to atoms and terms. Real variables standing in for
    v(i) are kept, so partially instantiated answers decode too.

    Raises:
        EncodingError: On a malformed representation.
    """
    supply = supply or VarSupply.after(t)
    decoder = _GroundDecoder(table, supply, variables if variables is not None else {})
    if isinstance(t, Compound) and t.functor == "if" and len(t.args) == 2:
        head = decoder.atom(t.args[0])
        return Clause(head, tuple(decoder.literals(t.args[1])))
    if isinstance(t, Compound) and t.functor in ("atom", "and", "not", "true"):
        literals = decoder.literals(t)
        return list_to_conjunction([literal.as_term() for literal in literals])
    return decoder.term(t)


def decode_query(t: Term, table: SymbolTable, supply: Optional[VarSupply] = None) -> QuerySeq:
    decoder = _GroundDecoder(table, supply or VarSupply.after(t), {})
    return QuerySeq(tuple(decoder.literals(t)))


def ground_decode_program(encoded: Sequence[Term], table: SymbolTable,
                          supply: Optional[VarSupply] = None) -> Program:
    supply = supply or VarSupply.after(list(encoded))
    clauses = []
    for item in encoded:
        decoded = ground_decode(item, table, supply)
        if not isinstance(decoded, Clause):
            raise EncodingError(f"Expected an if/2 clause, got {format_term(item)}")
        clauses.append(decoded)
    return Program(clauses)
