"""Tests for term orderings and obligation checks."""
import itertools
import json
import random
import pytest
from src.core.parser import parse_program, parse_query
from src.core.terms import Substitution, Variable, VarSupply, make_list, mk
from src.services.catalog import compose_meta_program, get_interpreter, make_meta_query
from src.services.engine import Obligation, ObligationSet, decrease_obligations
from src.services.orderings import (
    Comparison, FixedNormOrdering, LinearCoefficients, LinearLevelMapping, LinearNorm, LinearOrdering,
    ObligationVerdict, OrderingError, RPOOrdering, check_obligations, ordering_from_dict, parse_symbol,
)

X, Y, Z = Variable(0, "X"), Variable(1, "Y"), Variable(2, "Z")
a, b, c = mk("a"), mk("b"), mk("c")


def test_term_size_norm():
    """Test the term size norm."""
    norm = LinearNorm.term_size()
    assert norm.value(mk("f", a, mk("g", b))) == 4
    assert norm.form(mk("f", X, X)) == (1, {X.id: 2})


def test_list_length_norm():
    """Test the list length norm."""
    norm = LinearNorm.list_length()
    assert norm.value(make_list([a, b, c])) == 3
    assert norm.form(make_list([a], X)) == (1, {X.id: 1})
    assert norm.value(mk("f", make_list([a]))) == 0


def test_negative_coefficients_rejected():
    """Test coefficient validation."""
    with pytest.raises(OrderingError):
        LinearCoefficients(-1, ())
    with pytest.raises(OrderingError):
        LinearNorm({}, "weird")


def test_linear_ordering_with_variables():
    """Test that linear comparisons hold for every instance of the variables."""
    ordering = LinearOrdering(LinearLevelMapping())
    assert ordering.compare(mk("p", make_list([a, b])), mk("p", make_list([b]))) is Comparison.GREATER
    assert ordering.compare(mk("p", make_list([a], X)), mk("p", X)) is Comparison.GREATER
    assert ordering.compare(mk("p", X), mk("p", mk("f", X))) is Comparison.NOT_GREATER
    assert ordering.compare(mk("p", X), mk("p", Y)) is Comparison.NOT_GREATER
    assert ordering.compare(mk("p", X), mk("p", X)) is Comparison.EQUAL_OR_EQUIV


def test_linear_explain():
    """Test the symbolic explanation of a comparison."""
    ordering = LinearOrdering(LinearLevelMapping())
    text = ordering.explain(mk("p", mk("f", X)), mk("p", X))
    assert text == "|p(f(X))| = 1 + 1*||X||, |p(X)| = 0 + 1*||X||"


def test_fixed_norm_selector():
    """Test that only the selected argument positions are measured."""
    ordering = FixedNormOrdering("list_length", {("p", 2): [1]})
    assert ordering.compare(mk("p", make_list([a, b]), Z), mk("p", make_list([b]), mk("f", mk("f", Z)))) \
        is Comparison.GREATER
    assert ordering.to_dict() == {"kind": "fixed_norm", "norm": "list_length", "selector": {"p/2": [1]}}
    with pytest.raises(OrderingError):
        FixedNormOrdering("depth")


def test_rpo_precedence():
    """Test the path ordering with a precedence."""
    ordering = RPOOrdering([("f", 1), ("s", 1), ("a", 0)])
    assert ordering.compare(mk("f", X), mk("s", X)) is Comparison.GREATER
    assert ordering.compare(mk("s", X), mk("f", X)) is Comparison.NOT_GREATER
    assert ordering.compare(mk("f", mk("s", a)), mk("f", a)) is Comparison.GREATER
    assert ordering.compare(mk("f", X), X) is Comparison.GREATER
    assert ordering.compare(mk("g", a), mk("h", a)) is Comparison.NOT_GREATER


def test_rpo_multiset_status():
    """Test multiset status makes argument order irrelevant."""
    ordering = RPOOrdering([("g", 2), ("b", 0), ("a", 0)], {("g", 2): "mul"})
    assert ordering.compare(mk("g", a, b), mk("g", b, a)) is Comparison.EQUAL_OR_EQUIV
    assert ordering.compare(mk("g", b, b), mk("g", a, b)) is Comparison.GREATER
    with pytest.raises(OrderingError):
        RPOOrdering([("g", 2)], {("g", 2): "set"})
    with pytest.raises(OrderingError):
        RPOOrdering([("g", 2), ("g", 2)])


def test_parse_symbol():
    """Test name/arity labels including operator names."""
    assert parse_symbol(",/2") == (",", 2)
    assert parse_symbol("./2") == (".", 2)
    assert parse_symbol("//2") == ("/", 2)
    with pytest.raises(OrderingError):
        parse_symbol("foo")


def test_ordering_from_dict(test_data_dir):
    """Test rebuilding orderings from their report form."""
    data = json.loads((test_data_dir / "ex13_mapping.json").read_text(encoding="utf-8"))
    ordering = ordering_from_dict(data)
    assert isinstance(ordering, LinearOrdering)
    assert ordering.to_dict()["levels"] == data["levels"]
    rpo = ordering_from_dict({"kind": "rpo", "precedence": ["f/1", "a/0"]})
    assert rpo.compare(mk("f", a), a) is Comparison.GREATER
    with pytest.raises(OrderingError):
        ordering_from_dict({"kind": "kbo"})


def test_check_obligation_verdicts():
    """Test counterexample, truncated and accepted outcomes."""
    ordering = LinearOrdering(LinearLevelMapping())
    shrinking = Obligation(mk("p", mk("f", X)), mk("p", X), 0, 0)
    growing = Obligation(mk("p", X), mk("p", mk("f", X)), 0, 0)

    report = check_obligations(ordering, ObligationSet((shrinking, growing), True))
    assert report.verdict is ObligationVerdict.COUNTEREXAMPLE
    assert report.satisfied == 1
    assert report.to_dict()["violations"][0]["obligation"] == "p(X) > p(f(X))"

    assert check_obligations(ordering, ObligationSet((shrinking,), False)).verdict \
        is ObligationVerdict.INCONCLUSIVE_TRUNCATED
    assert check_obligations(ordering, ObligationSet((shrinking,), True)).verdict \
        is ObligationVerdict.ACCEPTABLE_ON_SAMPLE


def test_meta_program_mapping_accepts_sample(test_data_dir):
    """Test the recorded level mapping on vanilla plus the encoded list program."""
    supply = VarSupply()
    program = parse_program((test_data_dir / "ex13.pl").read_text(encoding="utf-8"), supply)
    spec = get_interpreter("m0")
    meta = compose_meta_program(spec, program, supply)
    seed = make_meta_query(spec, parse_query("p([a, b, c])", supply).as_term(), supply=supply).query
    obligations = decrease_obligations(meta.program, [seed])
    assert obligations.complete
    assert len(obligations) > 0

    data = json.loads((test_data_dir / "ex13_mapping.json").read_text(encoding="utf-8"))
    report = check_obligations(ordering_from_dict(data), obligations)
    assert report.verdict is ObligationVerdict.ACCEPTABLE_ON_SAMPLE
    assert ordering_from_dict(data).mapping.value(seed.literals[0].atom) == 14


def test_rpo_variable_handling():
    """Test that a variable lies only below the terms it occurs in."""
    ordering = RPOOrdering([("p", 1), ("f", 1), ("a", 0)])
    assert ordering.compare(mk("p", mk("f", a)), mk("p", Y)) is Comparison.NOT_GREATER
    assert ordering.compare(mk("f", X), X) is Comparison.GREATER
    assert ordering.compare(X, Y) is Comparison.NOT_GREATER
    assert ordering.compare(X, X) is Comparison.EQUAL_OR_EQUIV


def _random_term(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([X, Y, a, b])
    if rng.random() < 0.4:
        return mk("g", _random_term(rng, depth - 1))
    return mk("f", _random_term(rng, depth - 1), _random_term(rng, depth - 1))


def _sample(count: int, seed: int):
    rng = random.Random(seed)
    return [mk("p", _random_term(rng, 3)) for _ in range(count)]


_ORDERINGS = [
    RPOOrdering([("p", 1), ("f", 2), ("g", 1), ("b", 0), ("a", 0)]),
    RPOOrdering([("p", 1), ("g", 1), ("f", 2), ("a", 0), ("b", 0)], {("f", 2): "mul"}),
    LinearOrdering(LinearLevelMapping()),
]
_GROUNDING = [Substitution({X.id: a, Y.id: mk("g", b)}), Substitution({X.id: mk("f", b, b), Y.id: a})]


@pytest.mark.parametrize("ordering", _ORDERINGS)
def test_ordering_is_irreflexive_and_transitive(ordering):
    """Test that sampled comparisons form a strict order."""
    terms = _sample(18, seed=11)
    greater = {(i, j) for i, j in itertools.product(range(len(terms)), repeat=2)
               if ordering.compare(terms[i], terms[j]) is Comparison.GREATER}
    assert all(i != j for i, j in greater)
    for (i, j), (k, m) in itertools.product(greater, repeat=2):
        if j == k:
            assert (i, m) in greater


@pytest.mark.parametrize("ordering", _ORDERINGS)
def test_ordering_is_stable_under_substitution(ordering):
    """Test that a decrease between terms with variables holds for their ground instances."""
    terms = _sample(18, seed=13)
    for s, t in itertools.product(terms, repeat=2):
        if ordering.compare(s, t) is Comparison.GREATER:
            for sigma in _GROUNDING:
                assert ordering.compare(sigma.apply(s), sigma.apply(t)) is Comparison.GREATER


@pytest.mark.parametrize("ordering", _ORDERINGS[:2])
def test_rpo_subterm_property(ordering):
    """Test that a compound term lies above each of its arguments."""
    for term in _sample(30, seed=17):
        stack = [term]
        while stack:
            current = stack.pop()
            if isinstance(current, Variable):
                continue
            for arg in current.args:
                assert ordering.compare(current, arg) is Comparison.GREATER
                stack.append(arg)
