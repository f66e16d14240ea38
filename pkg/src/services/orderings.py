"""Term orderings for order-acceptability checks.

Linear level mappings over linear norms, fixed norms (term size, list length)
and the recursive path ordering. Atoms in harvested obligations may contain
variables: linear orderings keep them symbolic (a comparison must hold for
every instance), the path ordering puts a term above a variable only when the
variable occurs in it.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..core.terms import Compound, Term, Variable, format_term, key_label, variable_ids
from .engine import Obligation, ObligationSet

logger = logging.getLogger(__name__)

SymbolKey = Tuple[str, int]


class OrderingError(Exception):
    """Custom exception for term ordering operations."""
    pass


class Comparison(str, Enum):
    GREATER = "greater"
    EQUAL_OR_EQUIV = "equal_or_equiv"
    NOT_GREATER = "incomparable_or_not_greater"


symbol_label = key_label


def parse_symbol(label: str) -> SymbolKey:
    """'name/arity' to a key; the name itself may contain '/'."""
    name, sep, arity = label.rpartition("/")
    if not sep or not arity.isdigit():
        raise OrderingError(f"Expected name/arity, got '{label}'")
    return name, int(arity)


@dataclass(frozen=True)
class LinearCoefficients:
    constant: int = 0
    coefficients: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.constant < 0 or any(a < 0 for a in self.coefficients):
            raise OrderingError(f"Coefficients must be non-negative: {self.constant}, {self.coefficients}")

    def to_dict(self) -> Dict[str, Any]:
        return {"constant": self.constant, "coefficients": list(self.coefficients)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "LinearCoefficients":
        return cls(int(data.get("constant", 0)), tuple(int(a) for a in data.get("coefficients", ())))


# (constant, coefficient per variable id)
LinearForm = Tuple[int, Dict[int, int]]


def _scaled_add(target: Dict[int, int], form: Dict[int, int], factor: int) -> None:
    if not factor:
        return
    for var_id, coefficient in form.items():
        target[var_id] = target.get(var_id, 0) + factor * coefficient


@dataclass
class LinearNorm:
    """||f(t1..tn)|| = c + sum a_i ||t_i||, with a fallback for unlisted functors."""
    entries: Dict[SymbolKey, LinearCoefficients] = field(default_factory=dict)
    fallback: str = "term_size"

    def __post_init__(self):
        if self.fallback not in ("term_size", "zero"):
            raise OrderingError(f"Unknown norm fallback '{self.fallback}'")

    @classmethod
    def term_size(cls) -> "LinearNorm":
        return cls({}, "term_size")

    @classmethod
    def list_length(cls) -> "LinearNorm":
        return cls({(".", 2): LinearCoefficients(1, (0, 1))}, "zero")

    def coefficients(self, key: SymbolKey) -> LinearCoefficients:
        if key in self.entries:
            return self.entries[key]
        if self.fallback == "term_size":
            return LinearCoefficients(1, (1,) * key[1])
        return LinearCoefficients(0, (0,) * key[1])

    def form(self, t: Term) -> LinearForm:
        if isinstance(t, Variable):
            return 0, {t.id: 1}
        entry = self.coefficients(t.key)
        constant, variables = entry.constant, {}
        for a, arg in zip(entry.coefficients, t.args):
            if a:
                arg_constant, arg_vars = self.form(arg)
                constant += a * arg_constant
                _scaled_add(variables, arg_vars, a)
        return constant, variables

    def value(self, t: Term) -> int:
        """Norm of t; variables contribute 0."""
        return self.form(t)[0]

    def to_dict(self) -> Dict[str, Any]:
        return {"fallback": self.fallback,
                "functors": {symbol_label(k): v.to_dict() for k, v in self.entries.items()}}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "LinearNorm":
        entries = {parse_symbol(k): LinearCoefficients.from_dict(v) for k, v in data.get("functors", {}).items()}
        return cls(entries, data.get("fallback", "term_size"))


@dataclass
class LinearLevelMapping:
    """|p(t1..tn)| = c + sum a_i ||t_i||; unlisted predicates default to c = 0, all a = 1."""
    predicates: Dict[SymbolKey, LinearCoefficients] = field(default_factory=dict)
    norm: LinearNorm = field(default_factory=LinearNorm.term_size)

    def coefficients(self, key: SymbolKey) -> LinearCoefficients:
        return self.predicates.get(key, LinearCoefficients(0, (1,) * key[1]))

    def form(self, atom: Term) -> LinearForm:
        if isinstance(atom, Variable):
            raise OrderingError("Cannot measure a variable atom")
        entry = self.coefficients(atom.key)
        constant, variables = entry.constant, {}
        for a, arg in zip(entry.coefficients, atom.args):
            if a:
                arg_constant, arg_vars = self.norm.form(arg)
                constant += a * arg_constant
                _scaled_add(variables, arg_vars, a)
        return constant, variables

    def value(self, atom: Term) -> int:
        return self.form(atom)[0]

    def to_dict(self) -> Dict[str, Any]:
        return {"levels": {symbol_label(k): v.to_dict() for k, v in self.predicates.items()},
                "norm": self.norm.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "LinearLevelMapping":
        levels = {parse_symbol(k): LinearCoefficients.from_dict(v) for k, v in data.get("levels", {}).items()}
        return cls(levels, LinearNorm.from_dict(data.get("norm", {})))


def _format_form(form: LinearForm, names: Mapping[int, str]) -> str:
    constant, variables = form
    parts = [str(constant)]
    for var_id, coefficient in sorted(variables.items()):
        if coefficient:
            parts.append(f"{coefficient}*||{names.get(var_id, f'_{var_id}')}||")
    return " + ".join(parts)


def _var_names(*terms: Term) -> Dict[int, str]:
    names: Dict[int, str] = {}
    stack = list(terms)
    while stack:
        t = stack.pop()
        if isinstance(t, Variable):
            names.setdefault(t.id, t.name if t.name != "_" else f"_{t.id}")
        else:
            stack.extend(t.args)
    return names


class Ordering(ABC):
    """An ordering on atoms, given by the strict part of a quasi-ordering."""

    kind: str = ""

    @abstractmethod
    def compare(self, a: Term, b: Term) -> Comparison:
        pass

    def explain(self, a: Term, b: Term) -> str:
        return f"{format_term(a)} vs {format_term(b)}: {self.compare(a, b).value}"

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass


class LinearOrdering(Ordering):
    """a > b iff the constant part decreases and no variable's weight grows."""

    kind = "linear"

    def __init__(self, mapping: LinearLevelMapping):
        self.mapping = mapping

    def compare(self, a: Term, b: Term) -> Comparison:
        (ca, va), (cb, vb) = self.mapping.form(a), self.mapping.form(b)
        var_ids = set(va) | set(vb)
        if ca == cb and all(va.get(v, 0) == vb.get(v, 0) for v in var_ids):
            return Comparison.EQUAL_OR_EQUIV
        if ca > cb and all(va.get(v, 0) >= vb.get(v, 0) for v in var_ids):
            return Comparison.GREATER
        return Comparison.NOT_GREATER

    def explain(self, a: Term, b: Term) -> str:
        names = _var_names(a, b)
        left = _format_form(self.mapping.form(a), names)
        right = _format_form(self.mapping.form(b), names)
        return f"|{format_term(a)}| = {left}, |{format_term(b)}| = {right}"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.mapping.to_dict()}


class FixedNormOrdering(LinearOrdering):
    """Level = sum of a fixed norm over selected argument positions (1-based)."""

    kind = "fixed_norm"

    def __init__(self, norm_kind: str, selector: Optional[Mapping[SymbolKey, Sequence[int]]] = None):
        if norm_kind == "term_size":
            norm = LinearNorm.term_size()
        elif norm_kind == "list_length":
            norm = LinearNorm.list_length()
        else:
            raise OrderingError(f"Unknown fixed norm '{norm_kind}'")
        self.norm_kind = norm_kind
        self.selector = {key: tuple(positions) for key, positions in (selector or {}).items()}
        levels = {
            key: LinearCoefficients(0, tuple(1 if i + 1 in positions else 0 for i in range(key[1])))
            for key, positions in self.selector.items()
        }
        super().__init__(LinearLevelMapping(levels, norm))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "norm": self.norm_kind,
                "selector": {symbol_label(k): list(v) for k, v in self.selector.items()}}


class RPOOrdering(Ordering):
    """Recursive path ordering; precedence lists symbols greatest first.

    Symbols missing from the precedence are incomparable with every other
    symbol. A variable is equivalent only to itself and lies below exactly the
    terms it occurs in, so every comparison is stable under substitution.
    """

    kind = "rpo"

    def __init__(self, precedence: Sequence[SymbolKey], status: Optional[Mapping[SymbolKey, str]] = None):
        self.precedence = tuple(precedence)
        if len(set(self.precedence)) != len(self.precedence):
            raise OrderingError("Precedence lists a symbol twice")
        self.rank = {key: position for position, key in enumerate(self.precedence)}
        self.status = dict(status or {})
        for key, value in self.status.items():
            if value not in ("lex", "mul"):
                raise OrderingError(f"Unknown status '{value}' for {symbol_label(key)}")

    def symbol_greater(self, f: SymbolKey, g: SymbolKey) -> bool:
        return f in self.rank and g in self.rank and self.rank[f] < self.rank[g]

    def equivalent(self, s: Term, t: Term) -> bool:
        if isinstance(s, Variable) or isinstance(t, Variable):
            return s == t
        if s.key != t.key:
            return False
        if self.status.get(s.key, "lex") == "mul":
            remaining = list(t.args)
            for arg in s.args:
                match = next((i for i, other in enumerate(remaining) if self.equivalent(arg, other)), None)
                if match is None:
                    return False
                remaining.pop(match)
            return True
        return all(self.equivalent(x, y) for x, y in zip(s.args, t.args))

    def greater(self, s: Term, t: Term) -> bool:
        if isinstance(s, Variable):
            return False
        if isinstance(t, Variable):
            return t.id in variable_ids(s)
        if any(self.equivalent(arg, t) or self.greater(arg, t) for arg in s.args):
            return True
        if s.key == t.key:
            if self.status.get(s.key, "lex") == "mul":
                return self._multiset_greater(s.args, t.args)
            return self._lex_greater(s.args, t.args) and all(self.greater(s, arg) for arg in t.args)
        if self.symbol_greater(s.key, t.key):
            return all(self.greater(s, arg) for arg in t.args)
        return False

    def _lex_greater(self, left: Sequence[Term], right: Sequence[Term]) -> bool:
        for x, y in zip(left, right):
            if self.equivalent(x, y):
                continue
            return self.greater(x, y)
        return False

    def _multiset_greater(self, left: Sequence[Term], right: Sequence[Term]) -> bool:
        rest_left, rest_right = list(left), list(right)
        for x in list(rest_left):
            match = next((i for i, y in enumerate(rest_right) if self.equivalent(x, y)), None)
            if match is not None:
                rest_right.pop(match)
                rest_left.remove(x)
        if not rest_left:
            return False
        return all(any(self.greater(x, y) for x in rest_left) for y in rest_right)

    def compare(self, a: Term, b: Term) -> Comparison:
        if self.equivalent(a, b):
            return Comparison.EQUAL_OR_EQUIV
        if self.greater(a, b):
            return Comparison.GREATER
        return Comparison.NOT_GREATER

    def explain(self, a: Term, b: Term) -> str:
        order = " > ".join(symbol_label(key) for key in self.precedence)
        return f"{format_term(a)} vs {format_term(b)} under {order}: {self.compare(a, b).value}"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "precedence": [symbol_label(k) for k in self.precedence],
                "status": {symbol_label(k): v for k, v in self.status.items()}}


def ordering_from_dict(data: Mapping[str, Any]) -> Ordering:
    """Rebuild an ordering from its report form.

    Raises:
        OrderingError: On an unknown kind or malformed coefficients.
    """
    kind = data.get("kind", "linear")
    if kind == "linear":
        return LinearOrdering(LinearLevelMapping.from_dict(data))
    if kind == "fixed_norm":
        selector = {parse_symbol(k): tuple(v) for k, v in data.get("selector", {}).items()}
        return FixedNormOrdering(data.get("norm", "term_size"), selector)
    if kind == "rpo":
        precedence = [parse_symbol(label) for label in data.get("precedence", [])]
        status = {parse_symbol(k): v for k, v in data.get("status", {}).items()}
        return RPOOrdering(precedence, status)
    raise OrderingError(f"Unknown ordering kind '{kind}'")


class ObligationVerdict(str, Enum):
    ACCEPTABLE_ON_SAMPLE = "acceptable_on_sample"
    COUNTEREXAMPLE = "counterexample"
    INCONCLUSIVE_TRUNCATED = "inconclusive_truncated"


@dataclass(frozen=True)
class Violation:
    obligation: Obligation
    explanation: str

    def to_dict(self) -> Dict[str, str]:
        return {"obligation": str(self.obligation), "explanation": self.explanation}


@dataclass(frozen=True)
class ObligationReport:
    total: int
    satisfied: int
    violations: Tuple[Violation, ...]
    verdict: ObligationVerdict

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "satisfied": self.satisfied,
            "violations": [v.to_dict() for v in self.violations],
            "verdict": self.verdict.value,
        }


def check_obligations(ordering: Ordering, obligations: ObligationSet) -> ObligationReport:
    """Check caller > callee for every harvested obligation."""
    violations: List[Violation] = []
    for obligation in obligations:
        if ordering.compare(obligation.caller, obligation.callee) is not Comparison.GREATER:
            violations.append(Violation(obligation, ordering.explain(obligation.caller, obligation.callee)))
    if violations:
        verdict = ObligationVerdict.COUNTEREXAMPLE
    elif not obligations.complete:
        verdict = ObligationVerdict.INCONCLUSIVE_TRUNCATED
    else:
        verdict = ObligationVerdict.ACCEPTABLE_ON_SAMPLE
    total = len(obligations)
    logger.info(f"Checked {total} obligations under {ordering.kind}: {verdict.value}")
    return ObligationReport(total, total - len(violations), tuple(violations), verdict)
