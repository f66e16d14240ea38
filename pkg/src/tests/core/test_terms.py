"""Tests for terms, substitutions and unification."""
import itertools
import random
import pytest
import src.core.terms as terms_module
from src.core.terms import (
    NIL, Substitution, Variable, VarSupply, VariantSet, canonical, format_term, is_instance,
    is_linear_fresh_sequence, is_variant, make_list, mk, rename_apart, unify, variant_renaming,
)

X, Y, Z = Variable(0, "X"), Variable(1, "Y"), Variable(2, "Z")
a, b = mk("a"), mk("b")


def test_unify_binds_both_sides():
    """Test unification of f(X, b) with f(a, Y)."""
    mgu = unify(mk("f", X, b), mk("f", a, Y))
    assert mgu is not None
    assert mgu[X.id] == a
    assert mgu[Y.id] == b


def test_unify_occurs_check():
    """Test that X does not unify with f(X)."""
    assert unify(X, mk("f", X)) is None
    assert unify(mk("g", X, X), mk("g", Y, mk("f", Y))) is None


def test_unify_clash():
    """Test functor and arity clashes."""
    assert unify(mk("f", X), mk("g", X)) is None
    assert unify(mk("f", X), mk("f", X, Y)) is None


def test_unify_result_is_idempotent():
    """Test that chained bindings are resolved."""
    mgu = unify(mk("h", X, Y), mk("h", Y, mk("f", Z)))
    assert mgu is not None
    assert mgu.apply(X) == mk("f", Z)
    assert mgu.apply(mgu.apply(X)) == mgu.apply(X)


def test_unify_extends_base():
    """Test that a base substitution is kept."""
    base = Substitution({X.id: a})
    assert unify(X, b, base) is None
    extended = unify(Y, X, base)
    assert extended.apply(Y) == a


def test_substitution_compose():
    """Test composition applies the left substitution first."""
    first = Substitution({X.id: mk("f", Y)})
    second = Substitution({Y.id: a})
    assert first.compose(second).apply(X) == mk("f", a)
    assert first.compose(second).restrict([Y.id]).apply(X) == X


def test_instance_and_variant():
    """Test instance and variant relations."""
    assert is_instance(mk("p", a, Y), mk("p", X, Y))
    assert not is_instance(mk("p", X, Y), mk("p", a, Y))
    assert is_instance(mk("p", X, X), mk("p", Y, Z))
    assert not is_instance(mk("p", Y, Z), mk("p", X, X))
    assert is_variant(mk("p", X, Y), mk("p", Y, X))
    assert not is_variant(mk("p", X, X), mk("p", X, Y))
    assert canonical(mk("q", X, mk("f", Y))) == canonical(mk("q", Z, mk("f", X)))


def test_rename_apart_gives_variant():
    """Test that renaming yields a variant with fresh variables."""
    term = mk("p", X, mk("f", Y, X))
    renamed = rename_apart(term, VarSupply(100))
    assert is_variant(term, renamed)
    assert renamed.args[0].id >= 100


def test_supply_after():
    """Test that a supply starts above the variables it was built from."""
    supply = VarSupply.after(mk("p", Variable(7), Variable(3)))
    assert supply.fresh().id == 8


def test_variant_set():
    """Test that variant terms are stored once."""
    items = VariantSet([mk("p", X), mk("p", Y), mk("p", a)])
    assert len(items) == 2
    assert mk("p", Z) in items
    assert not items.add(mk("p", Z))
    assert items.issubset(VariantSet([mk("p", Y), mk("p", a), mk("q")]))


def test_linear_fresh_sequence():
    """Test distinct fresh variable sequences."""
    assert is_linear_fresh_sequence([X, Y])
    assert is_linear_fresh_sequence([])
    assert not is_linear_fresh_sequence([X, X])
    assert not is_linear_fresh_sequence([X, a])
    assert not is_linear_fresh_sequence([X, Y], forbidden={Y.id})


def test_format_term():
    """Test printing of operators and lists."""
    assert format_term(make_list([a, b])) == "[a, b]"
    assert format_term(make_list([a], X)) == "[a|X]"
    assert format_term(mk(",", mk("p", X), mk(",", mk("q"), mk("r")))) == "p(X), q, r"
    assert format_term(mk("f", mk(",", a, b))) == "f((a, b))"
    assert format_term(mk("\\+", mk("p", a))) == "\\+ p(a)"
    assert format_term(NIL) == "[]"


# --- Random unification properties ---

_VARIABLES = [Variable(i, f"V{i}") for i in range(3)]
_GROUND = [a, b] + [mk("g", t) for t in (a, b)] + [mk("f", s, t) for s in (a, b) for t in (a, b)]


def _random_term(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(_VARIABLES + [a, b])
    kind = rng.choice(["f", "g", "var"])
    if kind == "var":
        return rng.choice(_VARIABLES)
    if kind == "g":
        return mk("g", _random_term(rng, depth - 1))
    return mk("f", _random_term(rng, depth - 1), _random_term(rng, depth - 1))


def _pairs(count: int, seed: int):
    rng = random.Random(seed)
    return [(_random_term(rng, 3), _random_term(rng, 3)) for _ in range(count)]


@pytest.mark.parametrize("t1,t2", _pairs(40, seed=7))
def test_mgu_unifies(t1, t2):
    """Test that a computed mgu makes both terms equal."""
    mgu = unify(t1, t2)
    if mgu is not None:
        assert mgu.apply(t1) == mgu.apply(t2)


@pytest.mark.parametrize("t1,t2", _pairs(25, seed=11))
def test_ground_unifiers_factor_through_mgu(t1, t2):
    """Test that every brute-force ground unifier is an instance of the mgu."""
    mgu = unify(t1, t2)
    for values in itertools.product(_GROUND, repeat=len(_VARIABLES)):
        theta = Substitution({v.id: value for v, value in zip(_VARIABLES, values)})
        if theta.apply(t1) != theta.apply(t2):
            continue
        assert mgu is not None
        for v in _VARIABLES:
            assert theta.apply(mgu.apply(v)) == theta.apply(v)


def test_module_level_empty_substitution():
    """Test that the module builds its empty substitution on import."""
    assert isinstance(terms_module.EMPTY, Substitution)
    assert len(terms_module.EMPTY) == 0
    assert terms_module.EMPTY.apply(mk("p", X)) == mk("p", X)


def test_variant_of_itself_and_swapped():
    """Test variance on identical terms and on swapped variables."""
    assert is_variant(mk("p", X), mk("p", X))
    assert is_variant(mk("p", X, Y), mk("p", Y, X))
    renaming = variant_renaming(mk("p", X, Y), mk("p", Y, X))
    assert renaming.apply(mk("p", X, Y)) == mk("p", Y, X)
    assert len(variant_renaming(mk("q", X, a), mk("q", X, a))) == 0


def test_compose_swap_and_cycle():
    """Test composition when the bindings chain back onto themselves."""
    swap = Substitution.parallel({X.id: Y, Y.id: X})
    assert swap.compose(swap).apply(mk("p", X, Y)) == mk("p", X, Y)
    composed = Substitution({X.id: mk("f", Y)}).compose(Substitution({Y.id: X}))
    assert composed.apply(X) == mk("f", X)
    assert composed.apply(Y) == X
    assert composed.restrict([X.id]).apply(Y) == Y


def _renamed(term, offset: int):
    return rename_apart(term, VarSupply(offset))


@pytest.mark.parametrize("t1,t2", _pairs(40, seed=23))
def test_variance_is_an_equivalence(t1, t2):
    """Test that variance is reflexive, symmetric and transitive on sampled terms."""
    assert is_variant(t1, t1)
    copy = _renamed(t1, 100)
    second_copy = _renamed(copy, 200)
    assert is_variant(t1, copy) and is_variant(copy, t1)
    assert is_variant(copy, second_copy) and is_variant(t1, second_copy)
    assert is_variant(t1, t2) == is_variant(t2, t1)


@pytest.mark.parametrize("t1,t2", _pairs(60, seed=29))
def test_variance_matches_mutual_instance(t1, t2):
    """Test that two terms are variants iff each is an instance of the other."""
    mutual = is_instance(t1, t2) and is_instance(t2, t1)
    assert is_variant(t1, t2) == mutual
    assert (canonical(t1) == canonical(t2)) == mutual
