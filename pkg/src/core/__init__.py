"""Terms, programs and the program text format."""
from .terms import Compound, Substitution, Term, Variable, VarSupply, format_term, unify
from .program import Clause, Literal, Program, ProgramError, QuerySeq
from .parser import ParseError, parse_program, parse_query, parse_term, pretty_print

__all__ = [
    'Compound',
    'Substitution',
    'Term',
    'Variable',
    'VarSupply',
    'format_term',
    'unify',
    'Clause',
    'Literal',
    'Program',
    'ProgramError',
    'QuerySeq',
    'ParseError',
    'parse_program',
    'parse_query',
    'parse_term',
    'pretty_print'
]
