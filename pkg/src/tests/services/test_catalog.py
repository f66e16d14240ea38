"""Tests for the interpreter catalog and meta queries."""
import pytest
from src.core.parser import parse_program, parse_query
from src.core.terms import VarSupply, format_term, mk
from src.services import listings
from src.services.catalog import (
    CatalogError, Encoding, ExtraMode, InterpreterSpec, compose_meta_program, get_interpreter,
    interpreter_names, make_meta_query,
)
from src.services.classifier import InterpreterClass


@pytest.fixture
def ex31(test_data_dir):
    """The three clause example program."""
    return parse_program((test_data_dir / "ex31.pl").read_text(encoding="utf-8"), VarSupply())


def test_catalog_names():
    """Test that the catalog lists every built-in interpreter."""
    names = interpreter_names()
    assert names[:5] == ["m0", "m1", "m2", "m3", "m4"]
    assert {"four_port", "proof_tree", "ex43", "idemo"} <= set(names)


def test_unknown_interpreter():
    """Test lookup of a missing interpreter."""
    with pytest.raises(CatalogError):
        get_interpreter("nope")


def test_compose_clause_encoding(ex31):
    """Test that composition appends the clause facts."""
    spec = get_interpreter("m0")
    meta = compose_meta_program(spec, ex31)
    assert len(meta.program) == len(spec.program) + 3
    assert meta.program.clauses[-1].format() == "clause(s, (r, t))."
    assert meta.encoded is None


def test_compose_ground_encoding(ex31):
    """Test that ground interpreters keep the program as a term."""
    meta = compose_meta_program(get_interpreter("idemo"), ex31)
    assert len(meta.program) == len(get_interpreter("idemo").program)
    assert meta.encoded is not None and meta.table is not None
    assert format_term(meta.encoded).startswith("[if(atom(p(0), [v(0)]), atom(p(1), [v(0)]))")


def test_compose_rejects_amalgamation_violation():
    """Test composition with an object program that defines clause/2."""
    with pytest.raises(CatalogError):
        compose_meta_program(get_interpreter("m0"), parse_program("clause(a, b)."))


def test_vanilla_meta_query():
    """Test solve(q) for the vanilla interpreter."""
    supply = VarSupply()
    meta = make_meta_query(get_interpreter("m0"), parse_query("p(X)", supply), supply=supply)
    assert str(meta.query) == "solve(p(X))"
    assert meta.restricted


def test_fresh_extra_arguments():
    """Test that fresh extra arguments give a restricted query."""
    supply = VarSupply()
    meta = make_meta_query(get_interpreter("proof_tree"), parse_query("p(X), q", supply), supply=supply)
    goal = meta.query.literals[0].atom
    assert goal.arity == 2
    assert format_term(goal.args[0]) == "p(X), q"
    assert meta.restricted


def test_given_extra_arguments():
    """Test given extra arguments that are not fresh variables."""
    spec = get_interpreter("proof_tree")
    meta = make_meta_query(spec, mk("p", mk("a")), ExtraMode.GIVEN, given=[mk("a")])
    assert not meta.restricted
    assert "not distinct fresh variables" in meta.reason
    with pytest.raises(CatalogError):
        make_meta_query(spec, mk("p"), ExtraMode.GIVEN, given=[])


def test_unrestricted_interpreter_query():
    """Test that queries to unrestricted interpreters are never restricted."""
    meta = make_meta_query(get_interpreter("ex43"), mk("p", mk("a")))
    assert not meta.restricted
    assert meta.to_dict()["reason"].startswith("interpreter is not restricted")


def test_ground_interpreter_has_no_meta_query():
    """Test that ground interpreters are driven through the harness."""
    with pytest.raises(CatalogError):
        make_meta_query(get_interpreter("idemo"), mk("p"))


def test_interpreter_from_source():
    """Test user interpreters built from text."""
    spec = InterpreterSpec.from_source("mine", listings.M2_SOURCE, non_failing=[("max", 3)])
    assert spec.solve_arity == 2
    assert spec.expected_class is InterpreterClass.RESTRICTED
    assert spec.to_dict()["encoding"] == "ce"
    with pytest.raises(CatalogError):
        InterpreterSpec.from_source("bad", "solve(true).\nsolve(A, B) :- clause(A, B).")


def test_spec_to_dict():
    """Test the catalog entry summary."""
    data = get_interpreter("proof_tree").to_dict()
    assert data["encoding"] == "ced:0"
    assert data["expected_class"] == "restricted"
    assert get_interpreter("idemo").encoding is Encoding.GROUND
