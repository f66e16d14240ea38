"""Tests for clause encodings and the ground representation."""
import pytest
from src.core.parser import parse_program, parse_query
from src.core.program import Program
from src.core.terms import Variable, VarSupply, format_term, is_variant, mk, term_variables
from src.services.encodings import (
    EncodingError, clause_encode, clause_encode_extended, decode_query, ground_decode, ground_decode_program,
    ground_encode, ground_encode_query,
)

PERMUTE_FIRST = (
    "if(atom(p(0), [v(0), term(f(0), [v(1), term(f(0), [v(2), c(0)])])]), "
    "and(atom(p(1), [v(1), v(0), v(3)]), atom(p(0), [v(3), v(2)])))"
)


def _load(path) -> Program:
    return parse_program(path.read_text(encoding="utf-8"), VarSupply())


def test_clause_encode_facts(test_data_dir):
    """Test one clause/2 fact per clause in source order."""
    encoded = clause_encode(_load(test_data_dir / "ex31.pl"))
    assert [c.format() for c in encoded] == [
        "clause(p(X), q(X)).",
        "clause(q(b), true).",
        "clause(s, (r, t)).",
    ]
    assert all(c.is_fact for c in encoded)


def test_clause_encode_negation():
    """Test that negative literals are encoded with the negation functor."""
    encoded = clause_encode(parse_program("p(X) :- q(X), \\+ r(X).", VarSupply()))
    body = encoded.clauses[0].head.args[1]
    assert format_term(body) == "q(X), \\+ r(X)"


@pytest.mark.parametrize("text", ["clause(a, b).", "p :- clause(a, b, c)."])
def test_amalgamation_violations(text):
    """Test that object programs may not mention the encoding predicates."""
    with pytest.raises(EncodingError):
        clause_encode(parse_program(text, VarSupply()))


def test_extended_encoding_fresh_tails(test_data_dir):
    """Test that each extended fact gets distinct fresh extra arguments."""
    program = _load(test_data_dir / "ex31.pl")
    encoded = clause_encode_extended(program, 2)
    extras = [arg for c in encoded for arg in c.head.args[2:]]
    assert all(c.head.arity == 4 for c in encoded)
    assert all(isinstance(arg, Variable) for arg in extras)
    assert len({arg.id for arg in extras}) == len(extras)
    program_ids = {v.id for t in program.terms() for v in term_variables(t)}
    assert not program_ids & {arg.id for arg in extras}


def test_extended_encoding_given_filler(test_data_dir):
    """Test extended facts with caller-supplied extra arguments."""
    encoded = clause_encode_extended(_load(test_data_dir / "ex31.pl"), 1, filler=["a", "b", mk("c")])
    assert [format_term(c.head.args[2]) for c in encoded] == ["a", "b", "c"]


def test_extended_encoding_zero_is_plain(test_data_dir):
    """Test that k = 0 gives the plain encoding."""
    program = _load(test_data_dir / "ex31.pl")
    assert clause_encode_extended(program, 0) == clause_encode(program)


def test_extended_encoding_filler_errors(test_data_dir):
    """Test filler validation."""
    program = _load(test_data_dir / "ex31.pl")
    with pytest.raises(EncodingError):
        clause_encode_extended(program, 1, filler=["a"])
    with pytest.raises(EncodingError):
        clause_encode_extended(program, 2, filler=[["a"], ["b"], ["c"]])
    with pytest.raises(EncodingError):
        clause_encode_extended(program, -1)


def test_ground_encoding_of_permute(test_data_dir):
    """Test the exact ground representation of the first permute clause."""
    encoded, table = ground_encode(_load(test_data_dir / "permute.pl"))
    assert format_term(encoded[0]) == PERMUTE_FIRST
    assert table.to_dict()["predicates"] == {"p(0)": "permute/2", "p(1)": "delete/3"}
    assert table.to_dict()["functors"] == {"f(0)": "./2"}
    assert table.to_dict()["constants"] == {"c(0)": "[]"}
    assert table.variables[0] == ["L", "El", "T", "L1"]


def test_ground_decode_inverts_encoding(test_data_dir):
    """Test that decoding gives back the program up to renaming."""
    program = _load(test_data_dir / "permute.pl")
    encoded, table = ground_encode(program)
    decoded = ground_decode_program(encoded, table, VarSupply(1000))
    assert len(decoded) == len(program)
    for original, back in zip(program, decoded):
        assert is_variant(original.as_term(), back.as_term())


def test_ground_decode_single_clause(test_data_dir):
    """Test decoding one clause and a partially instantiated term."""
    encoded, table = ground_encode(_load(test_data_dir / "normal.pl"))
    clause = ground_decode(encoded[3], table, VarSupply(1000))
    assert clause.format() == "p(X0) :- q(X0), \\+ r(X0)."
    assert ground_decode(mk("c", mk("0")), table) == mk("a")


def test_ground_query_round_trip():
    """Test query encoding against a shared table."""
    supply = VarSupply()
    encoded, table = ground_encode(parse_program("p(X) :- q(X).\nq(b).", supply))
    query = parse_query("p(Y), \\+ q(a)", supply)
    term = ground_encode_query(query, table)
    assert format_term(term) == "and(atom(p(0), [v(0)]), not(atom(p(1), [c(1)])))"
    back = decode_query(term, table, VarSupply(1000))
    assert str(back) == "p(X0), \\+ q(a)"


def test_ground_decode_malformed():
    """Test that malformed representations are rejected."""
    _, table = ground_encode(parse_program("p(a).", VarSupply()))
    with pytest.raises(EncodingError):
        ground_decode(mk("atom", mk("p", mk("7")), mk("[]")), table)
    with pytest.raises(EncodingError):
        ground_decode(mk("term", mk("f", mk("x")), mk("[]")), table)
