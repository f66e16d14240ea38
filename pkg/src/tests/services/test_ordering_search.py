"""Tests for the bounded ordering search."""
import pytest
from src.core.parser import parse_program, parse_query
from src.core.terms import Variable, VarSupply, make_list, mk
from src.services.catalog import compose_meta_program, get_interpreter, make_meta_query
from src.services.engine import (
    Budget, Obligation, ObligationSet, TerminationKind, decrease_obligations, termination_status,
)
from src.services.ordering_search import (
    NONE_WITHIN_BOUND, Found, NoneWithinBound, parse_strategy, search_ordering,
)
from src.services.orderings import ObligationVerdict, OrderingError, RPOOrdering

X = Variable(0, "X")


def _obligations(*pairs, complete=True) -> ObligationSet:
    return ObligationSet(tuple(Obligation(caller, callee, 0, 0) for caller, callee in pairs), complete)


def _meta_obligations(test_data_dir, name, queries, answered=False):
    supply = VarSupply()
    program = parse_program((test_data_dir / name).read_text(encoding="utf-8"), supply)
    spec = get_interpreter("m0")
    meta = compose_meta_program(spec, program, supply)
    seeds = [make_meta_query(spec, parse_query(q, supply).as_term(), supply=supply).query for q in queries]
    return decrease_obligations(meta.program, seeds, Budget(max_nodes=5000, max_depth=100), answered)


def test_parse_strategy():
    """Test strategy strings."""
    assert parse_strategy("linear") == ("linear", 10)
    assert parse_strategy("linear:3") == ("linear", 3)
    assert parse_strategy("rpo") == ("rpo", 0)
    for text in ("kbo", "linear:x", "rpo:2"):
        with pytest.raises(OrderingError):
            parse_strategy(text)


def test_invalid_limits():
    """Test search limit validation."""
    with pytest.raises(OrderingError):
        search_ordering(_obligations(), "linear", coefficient_bound=-1)
    with pytest.raises(OrderingError):
        search_ordering(_obligations(), "linear", node_limit=0)
    with pytest.raises(OrderingError):
        search_ordering(_obligations(), "kbo")


def test_linear_search_finds_list_decrease():
    """Test that a list tail decrease is found."""
    result = search_ordering(_obligations((mk("p", make_list([mk("a")], X)), mk("p", X))), "linear", 3)
    assert isinstance(result, Found)
    assert result.report.verdict is ObligationVerdict.ACCEPTABLE_ON_SAMPLE
    assert result.to_dict()["found"] is True
    assert result.to_dict()["ordering"]["kind"] == "linear"


def test_growth_has_no_ordering():
    """Test that p(X) > p(f(X)) has neither a linear nor a path ordering."""
    obligations = _obligations((mk("p", X), mk("p", mk("f", X))))
    for strategy in ("linear", "rpo"):
        result = search_ordering(obligations, strategy, 3, 500)
        assert isinstance(result, NoneWithinBound)
        assert result.to_dict()["found"] is False
        assert result.message == NONE_WITHIN_BOUND


def test_rpo_search_finds_precedence():
    """Test that the path ordering search orders symbols as needed."""
    obligations = _obligations((mk("p", mk("f", X)), mk("q", mk("g", X))), (mk("q", X), mk("p", X)))
    result = search_ordering(obligations, "rpo")
    assert isinstance(result, Found)
    assert isinstance(result.ordering, RPOOrdering)
    precedence = result.ordering.precedence
    assert precedence.index(("q", 1)) < precedence.index(("p", 1))


def test_empty_obligations_are_trivially_ordered():
    """Test that an empty sample is accepted."""
    assert isinstance(search_ordering(_obligations(), "linear", 1), Found)


def test_meta_list_program_linear(test_data_dir):
    """Test the linear search on vanilla plus the encoded list program."""
    obligations = _meta_obligations(test_data_dir, "ex13.pl", ["p([a, b, c])"])
    assert obligations.complete
    assert isinstance(search_ordering(obligations, "linear", 3), Found)


def test_meta_successor_program(test_data_dir):
    """Test that the successor program has no linear ordering and needs answered instances for a path ordering."""
    seeds = ["l(0)", "l(f(0))", "l(f(f(0)))"]
    obligations = _meta_obligations(test_data_dir, "ex12.pl", seeds)
    assert obligations.complete
    linear = search_ordering(obligations, "linear", 10)
    assert isinstance(linear, NoneWithinBound)
    assert linear.exhaustive is True
    assert isinstance(search_ordering(obligations, "linear", 3, node_limit=200), NoneWithinBound)
    # callers keep the unbound local variable of the clause body
    assert isinstance(search_ordering(obligations, "rpo"), NoneWithinBound)
    answered = _meta_obligations(test_data_dir, "ex12.pl", seeds, answered=True)
    assert answered.complete
    result = search_ordering(answered, "rpo")
    assert isinstance(result, Found)
    assert result.report.verdict is ObligationVerdict.ACCEPTABLE_ON_SAMPLE


def test_linear_search_detects_equal_sides():
    """Test that a strict decrease between sides that stay equal is refuted without enumeration."""
    obligations = _obligations(
        (mk("p", mk("a")), mk("q", mk("a"))),
        (mk("q", mk("a")), mk("p", mk("a"))),
    )
    result = search_ordering(obligations, "linear", 10)
    assert isinstance(result, NoneWithinBound)
    assert result.exhaustive is True
    assert result.nodes < 50


def test_rpo_multiset_status():
    """Test that swapped arguments are ordered with the multiset status."""
    Y = Variable(1, "Y")
    obligations = _obligations((mk("f", mk("s", X), Y), mk("f", Y, X)))
    result = search_ordering(obligations, "rpo")
    assert isinstance(result, Found)
    assert result.ordering.status[("f", 2)] == "mul"


def _chain(length):
    return _obligations(*((mk(f"a{i}", X), mk(f"a{i + 1}", X)) for i in range(1, length)))


def test_rpo_precedence_cap():
    """Test that precedences are capped at eight related symbols."""
    assert isinstance(search_ordering(_chain(8), "rpo"), Found)
    result = search_ordering(_chain(9), "rpo")
    assert isinstance(result, NoneWithinBound)
    assert result.message.startswith(NONE_WITHIN_BOUND)
    assert "more than 8 symbols" in result.message


def test_object_successor_program_linear(test_data_dir):
    """Test that the object successor program has a linear ordering on its seeds."""
    supply = VarSupply()
    program = parse_program((test_data_dir / "ex12.pl").read_text(encoding="utf-8"), supply)
    seeds = [parse_query(q, supply) for q in ("l(0)", "l(f(0))", "l(f(f(0)))")]
    obligations = decrease_obligations(program, seeds, Budget(max_nodes=5000, max_depth=100))
    assert obligations.complete
    assert len(obligations) > 0
    assert isinstance(search_ordering(obligations, "linear", 3), Found)


def test_found_ordering_matches_termination(test_data_dir):
    """Test that seeds with a found ordering and complete trees terminate."""
    supply = VarSupply()
    program = parse_program((test_data_dir / "ex13.pl").read_text(encoding="utf-8"), supply)
    seeds = [parse_query(q, supply) for q in ("p([a, b, c])", "p([a, b, c, d])")]
    budget = Budget(max_nodes=5000, max_depth=100)
    obligations = decrease_obligations(program, seeds, budget)
    assert isinstance(search_ordering(obligations, "linear", 3), Found)
    for seed in seeds:
        assert termination_status(program, seed, budget).kind is TerminationKind.TERMINATES
