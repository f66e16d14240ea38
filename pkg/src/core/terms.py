"""Terms, substitutions, unification and variance tests."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Variable:
    """A logic variable. Identity is the integer id; the name is for display only."""
    id: int
    name: str = field(default="_", compare=False, hash=False)

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Compound:
    """A compound term; constants are compounds without arguments."""
    functor: str
    args: Tuple["Term", ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> Tuple[str, int]:
        return (self.functor, len(self.args))

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Variable, Compound]

TRUE = Compound("true")
NIL = Compound("[]")
CONJUNCTION = ","
LIST_CONS = "."


def mk(functor: str, *args: Term) -> Compound:
    """Build a compound term."""
    return Compound(functor, tuple(args))


def make_list(items: Sequence[Term], tail: Term = NIL) -> Term:
    """Build a '.'/2 list from items ending in tail."""
    result = tail
    for item in reversed(items):
        result = Compound(LIST_CONS, (item, result))
    return result


def key_label(key: Tuple[str, int]) -> str:
    """Render a (symbol, arity) key as symbol/arity."""
    return f"{key[0]}/{key[1]}"


class VarSupply:
    """Issues fresh variables; ids are never reused by one supply."""

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)

    @classmethod
    def after(cls, *values: object) -> "VarSupply":
        """A supply whose ids lie above every variable id occurring in values."""
        highest = -1
        for value in values:
            for var in _variables_in(value):
                highest = max(highest, var.id)
        return cls(highest + 1)

    def fresh(self, name: str = "_") -> Variable:
        return Variable(next(self._counter), name)

    def fresh_sequence(self, count: int, prefix: str = "V") -> List[Variable]:
        return [self.fresh(f"{prefix}{i + 1}") for i in range(count)]


def _variables_in(value: object) -> Iterator[Variable]:
    if isinstance(value, (Variable, Compound)):
        yield from term_variables(value)
    elif hasattr(value, "terms"):
        for term in value.terms():
            yield from term_variables(term)
    elif isinstance(value, (list, tuple, set, frozenset)):
        for item in value:
            yield from _variables_in(item)


def term_variables(t: Term) -> List[Variable]:
    """Variables of t in left-to-right first-occurrence order."""
    seen: Dict[int, Variable] = {}
    stack = [t]
    while stack:
        current = stack.pop()
        if isinstance(current, Variable):
            seen.setdefault(current.id, current)
        else:
            stack.extend(reversed(current.args))
    return list(seen.values())


def variable_ids(t: Term) -> Set[int]:
    return {v.id for v in term_variables(t)}


def is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    return all(is_ground(arg) for arg in t.args)


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of t including t itself, pre-order."""
    yield t
    if isinstance(t, Compound):
        for arg in t.args:
            yield from subterms(arg)


def map_variables(t: Term, fn: Callable[[Variable], Term]) -> Term:
    """Replace every variable v of t by fn(v); ground subterms are shared."""
    if isinstance(t, Variable):
        return fn(t)
    if not t.args:
        return t
    new_args = tuple(map_variables(arg, fn) for arg in t.args)
    if all(a is b for a, b in zip(new_args, t.args)):
        return t
    return Compound(t.functor, new_args)


class Substitution(Mapping[int, Term]):
    """Finite map from variable ids to terms, applied simultaneously."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[int, Term]] = None):
        self._bindings: Dict[int, Term] = _drop_identities(_resolve(_drop_identities(bindings or {})))

    @classmethod
    def parallel(cls, bindings: Mapping[int, Term]) -> "Substitution":
        """Bindings applied simultaneously, without chasing chains between them.

        Renamings such as X->Y, Y->X and composed substitutions are built this way.
        """
        sub = cls.__new__(cls)
        sub._bindings = _drop_identities(bindings)
        return sub

    def __getitem__(self, var_id: int) -> Term:
        return self._bindings[var_id]

    def __iter__(self) -> Iterator[int]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __repr__(self) -> str:
        inner = ", ".join(f"_G{k}->{format_term(v)}" for k, v in self._bindings.items())
        return f"Substitution({{{inner}}})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Substitution):
            return self._bindings == other._bindings
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def apply(self, t: Term) -> Term:
        if not self._bindings:
            return t
        return map_variables(t, lambda v: self._bindings.get(v.id, v))

    def compose(self, other: "Substitution") -> "Substitution":
        """The substitution applying self first, then other."""
        combined = {var_id: other.apply(term) for var_id, term in self._bindings.items()}
        for var_id, term in other._bindings.items():
            combined.setdefault(var_id, term)
        return Substitution.parallel(combined)

    def restrict(self, var_ids: Iterable[int]) -> "Substitution":
        wanted = set(var_ids)
        return Substitution.parallel({k: v for k, v in self._bindings.items() if k in wanted})


def _drop_identities(bindings: Mapping[int, Term]) -> Dict[int, Term]:
    return {
        var_id: term for var_id, term in bindings.items()
        if not (isinstance(term, Variable) and term.id == var_id)
    }


def apply(s: Substitution, t: Term) -> Term:
    """Apply substitution s to term t."""
    return s.apply(t)


def _walk(t: Term, bindings: Dict[int, Term]) -> Term:
    while isinstance(t, Variable) and t.id in bindings:
        t = bindings[t.id]
    return t


def _deep_walk(t: Term, bindings: Dict[int, Term]) -> Term:
    t = _walk(t, bindings)
    if isinstance(t, Variable) or not t.args:
        return t
    return Compound(t.functor, tuple(_deep_walk(arg, bindings) for arg in t.args))


def _resolve(bindings: Dict[int, Term]) -> Dict[int, Term]:
    # Triangular bindings to fixpoint; the occurs check upstream keeps this finite.
    return {var_id: _deep_walk(term, bindings) for var_id, term in bindings.items()}


EMPTY = Substitution()


def _occurs(var: Variable, t: Term, bindings: Dict[int, Term]) -> bool:
    stack = [t]
    while stack:
        current = _walk(stack.pop(), bindings)
        if isinstance(current, Variable):
            if current.id == var.id:
                return True
        else:
            stack.extend(current.args)
    return False


def unify(t1: Term, t2: Term, base: Optional[Substitution] = None) -> Optional[Substitution]:
    """Most general unifier of t1 and t2 (with occurs check), or None.

    Args:
        t1: First term.
        t2: Second term.
        base: Optional substitution to extend; its bindings are kept.

    Returns:
        An idempotent substitution, or None when no unifier exists.
    """
    bindings: Dict[int, Term] = dict(base.items()) if base else {}
    stack: List[Tuple[Term, Term]] = [(t1, t2)]
    while stack:
        left, right = stack.pop()
        left = _walk(left, bindings)
        right = _walk(right, bindings)
        if left is right:
            continue
        if isinstance(left, Variable):
            if isinstance(right, Variable) and right.id == left.id:
                continue
            if _occurs(left, right, bindings):
                return None
            bindings[left.id] = right
        elif isinstance(right, Variable):
            if _occurs(right, left, bindings):
                return None
            bindings[right.id] = left
        elif left.functor != right.functor or len(left.args) != len(right.args):
            return None
        else:
            stack.extend(zip(left.args, right.args))
    return Substitution(bindings)


def rename_apart(value, supply: VarSupply, mapping: Optional[Dict[int, Variable]] = None):
    """Return a variant of a term (or of anything exposing map_terms) with fresh variables.

    A shared mapping keeps the renaming consistent across several calls.
    """
    renaming = {} if mapping is None else mapping

    def fresh_for(var: Variable) -> Variable:
        if var.id not in renaming:
            renaming[var.id] = supply.fresh(var.name)
        return renaming[var.id]

    def rename(t: Term) -> Term:
        return map_variables(t, fresh_for)

    if isinstance(value, (Variable, Compound)):
        return rename(value)
    return value.map_terms(rename)


def match(pattern: Term, target: Term, base: Optional[Dict[int, Term]] = None) -> Optional[Dict[int, Term]]:
    """One-way matching: bindings b with b applied to pattern == target, or None."""
    bindings: Dict[int, Term] = dict(base) if base else {}
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Variable):
            bound = bindings.get(p.id)
            if bound is None:
                bindings[p.id] = t
            elif bound != t:
                return None
        elif isinstance(t, Variable):
            return None
        elif p.functor != t.functor or len(p.args) != len(t.args):
            return None
        else:
            stack.extend(zip(p.args, t.args))
    return bindings


def is_instance(t1: Term, t2: Term) -> bool:
    """True iff t1 is t2 with s applied for some substitution s."""
    return match(t2, t1) is not None


def variant_renaming(t1: Term, t2: Term) -> Optional[Substitution]:
    """A variable renaming r with r applied to t1 gives t2, or None when t1, t2 are not variants."""
    forward: Dict[int, Variable] = {}
    backward: Dict[int, int] = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        if isinstance(a, Variable) and isinstance(b, Variable):
            if forward.setdefault(a.id, b).id != b.id:
                return None
            if backward.setdefault(b.id, a.id) != a.id:
                return None
        elif isinstance(a, Compound) and isinstance(b, Compound):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return Substitution.parallel(forward)


def is_variant(t1: Term, t2: Term) -> bool:
    """True iff t1 and t2 are equal up to variable renaming."""
    return variant_renaming(t1, t2) is not None


def canonical(t: Term) -> Term:
    """Representative of the variance class of t; equal iff variants."""
    numbering: Dict[int, Variable] = {}

    def number(var: Variable) -> Variable:
        if var.id not in numbering:
            numbering[var.id] = Variable(-1 - len(numbering), "_")
        return numbering[var.id]

    return map_variables(t, number)


def is_linear_fresh_sequence(ts: Sequence[Term], forbidden: Iterable[int] = ()) -> bool:
    """True iff ts are pairwise distinct variables, none of them in forbidden."""
    banned = set(forbidden)
    seen: Set[int] = set()
    for t in ts:
        if not isinstance(t, Variable) or t.id in banned or t.id in seen:
            return False
        seen.add(t.id)
    return True


class VariantSet:
    """Terms kept up to variance, in insertion order."""

    def __init__(self, items: Iterable[Term] = ()):
        self._items: Dict[Term, Term] = {}
        for item in items:
            self.add(item)

    def add(self, t: Term) -> bool:
        key = canonical(t)
        if key in self._items:
            return False
        self._items[key] = t
        return True

    def __contains__(self, t: object) -> bool:
        return isinstance(t, (Variable, Compound)) and canonical(t) in self._items

    def __iter__(self) -> Iterator[Term]:
        return iter(list(self._items.values()))

    def __len__(self) -> int:
        return len(self._items)

    def same_as(self, other: "VariantSet") -> bool:
        return set(self._items) == set(other._items)

    def issubset(self, other: "VariantSet") -> bool:
        return set(self._items) <= set(other._items)


# Printing

_INFIX = {":-": (1200, "xfx"), ",": (1000, "xfy"), "=": (700, "xfx"), "\\=": (700, "xfx")}
_PREFIX = {"\\+": 900}


class VarNaming:
    """Assigns readable, distinct display names to variables."""

    def __init__(self):
        self._names: Dict[int, str] = {}
        self._used: Set[str] = set()

    def name(self, var: Variable) -> str:
        if var.id not in self._names:
            base = var.name if var.name and var.name != "_" and var.name[0].isupper() else "_G"
            candidate = base if base != "_G" else f"_G{len(self._names)}"
            suffix = 1
            while candidate in self._used:
                candidate = f"{base}{suffix}"
                suffix += 1
            self._names[var.id] = candidate
            self._used.add(candidate)
        return self._names[var.id]


def _quote_atom(name: str) -> str:
    if name in ("[]", "{}", "!", ";", ","):
        return name if name != "," else "','"
    if name and (name[0].islower() and all(c.isalnum() or c == "_" for c in name)):
        return name
    if name and all(c in "+-*/\\^<>=~:?@#&$" for c in name):
        return name
    if _is_number(name):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def _is_number(name: str) -> bool:
    try:
        float(name)
    except ValueError:
        return False
    return bool(name) and (name[0].isdigit() or (name[0] == "-" and len(name) > 1))


def _priority(t: Term) -> int:
    if isinstance(t, Compound):
        if len(t.args) == 2 and t.functor in _INFIX:
            return _INFIX[t.functor][0]
        if len(t.args) == 1 and t.functor in _PREFIX:
            return _PREFIX[t.functor]
    return 0


def format_term(t: Term, naming: Optional[VarNaming] = None, max_priority: int = 1200) -> str:
    """Render t in the program text format."""
    if naming is None:
        naming = VarNaming()
    text = _format(t, naming)
    if _priority(t) > max_priority:
        return f"({text})"
    return text


def _format(t: Term, naming: VarNaming) -> str:
    if isinstance(t, Variable):
        return naming.name(t)
    if t.functor == LIST_CONS and len(t.args) == 2:
        return _format_list(t, naming)
    if len(t.args) == 2 and t.functor in _INFIX:
        priority, kind = _INFIX[t.functor]
        left_max = priority - 1
        right_max = priority if kind == "xfy" else priority - 1
        left = format_term(t.args[0], naming, left_max)
        right = format_term(t.args[1], naming, right_max)
        if t.functor == ",":
            return f"{left}, {right}"
        return f"{left} {t.functor} {right}"
    if len(t.args) == 1 and t.functor in _PREFIX:
        return f"{t.functor} {format_term(t.args[0], naming, _PREFIX[t.functor])}"
    name = _quote_atom(t.functor)
    if not t.args:
        return name
    inner = ", ".join(format_term(arg, naming, 999) for arg in t.args)
    return f"{name}({inner})"


def _format_list(t: Compound, naming: VarNaming) -> str:
    items = []
    current: Term = t
    while isinstance(current, Compound) and current.functor == LIST_CONS and len(current.args) == 2:
        items.append(format_term(current.args[0], naming, 999))
        current = current.args[1]
    if current == NIL:
        return f"[{', '.join(items)}]"
    return f"[{', '.join(items)}|{format_term(current, naming, 999)}]"
