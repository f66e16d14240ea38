"""Tests for the program text parser."""
import pytest
from src.core.parser import ParseError, parse_program, parse_query, parse_term, pretty_print
from src.core.terms import Variable, VarSupply, format_term, make_list, mk


EX31 = "p(X) :- q(X).\nq(b).\ns :- r, t.\n"


def test_parse_program_clauses():
    """Test parsing a small program clause by clause."""
    program = parse_program(EX31, VarSupply())
    assert len(program) == 3
    assert program.predicates == [("p", 1), ("q", 1), ("s", 0)]
    assert program.clauses[1].is_fact
    assert [literal.atom for literal in program.clauses[2].body] == [mk("r"), mk("t")]


def test_clause_variables_are_shared():
    """Test that a variable name denotes one variable within a clause."""
    program = parse_program("p(X, Y) :- q(Y, X).", VarSupply())
    clause = program.clauses[0]
    assert clause.head.args[0] == clause.body[0].atom.args[1]
    assert clause.head.args[0] != clause.head.args[1]


def test_clauses_do_not_share_variables():
    """Test that equal names in different clauses are different variables."""
    program = parse_program("p(X).\nq(X).", VarSupply())
    assert program.clauses[0].head.args[0] != program.clauses[1].head.args[0]


def test_anonymous_variables_are_distinct():
    """Test that each underscore is a fresh variable."""
    term = parse_term("f(_, _)", VarSupply())
    assert isinstance(term.args[0], Variable)
    assert term.args[0] != term.args[1]


def test_parse_lists_and_comments():
    """Test list syntax and comment lines."""
    program = parse_program("% lists\np([a, b|T]) :- p(T).\np([]).", VarSupply())
    head = program.clauses[0].head
    tail = program.clauses[0].body[0].atom.args[0]
    assert head.args[0] == make_list([mk("a"), mk("b")], tail)
    assert program.clauses[1].head == mk("p", make_list([]))


def test_parse_negation():
    """Test negative body literals."""
    program = parse_program("p(X) :- q(X), \\+ r(X).", VarSupply())
    body = program.clauses[0].body
    assert body[0].positive
    assert not body[1].positive
    assert body[1].atom.functor == "r"
    assert not program.is_definite


def test_parse_query():
    """Test queries with several literals."""
    query = parse_query("p(X), \\+ q(X)", VarSupply())
    assert len(query) == 2
    assert not query.is_definite
    assert str(query) == "p(X), \\+ q(X)"


def test_parse_query_shares_variables_dict():
    """Test that a shared variable table links separate parses."""
    variables = {}
    supply = VarSupply()
    first = parse_term("p(X)", supply, variables)
    second = parse_term("q(X)", supply, variables)
    assert first.args[0] == second.args[0]


def test_pretty_print_round_trip():
    """Test that printed programs parse back to the same text."""
    program = parse_program(EX31, VarSupply())
    printed = pretty_print(program)
    assert printed == EX31
    assert pretty_print(parse_program(printed, VarSupply())) == printed


def test_quoted_atoms_print_quoted():
    """Test quoting of atoms that need it."""
    term = parse_term("f('Hello world', [])", VarSupply())
    assert format_term(term) == "f('Hello world', [])"


@pytest.mark.parametrize("text", [
    "p :- !.",
    "p :- q ; r.",
    "p(X) :- X.",
    "p(X) :- Y is X + 1.",
    ":- dynamic(p).",
    "p(a",
    "p(a) q(b).",
])
def test_unsupported_or_malformed_text(text):
    """Test that unsupported constructs and syntax errors raise ParseError."""
    with pytest.raises(ParseError):
        parse_program(text, VarSupply())


def test_parse_error_position():
    """Test that parse errors carry a line number."""
    with pytest.raises(ParseError) as excinfo:
        parse_program("p.\nq :- !.", VarSupply())
    assert excinfo.value.line == 2
