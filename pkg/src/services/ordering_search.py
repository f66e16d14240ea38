"""Bounded search for orderings that satisfy a set of decrease obligations.

linear: non-negative integer coefficients up to a bound for every predicate
and functor occurring in the obligations (solve keeps c = 0, a1 = 1), found
by depth-first enumeration with interval propagation.
rpo: a symbol precedence with a lex or mul status per symbol, built lazily
while proving each obligation; the precedence may relate at most eight symbols.

A negative answer only means nothing was found within the bound.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from graphlib import TopologicalSorter
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from ..core.terms import Compound, Term, Variable, variable_ids
from .engine import ObligationSet
from .orderings import (
    LinearCoefficients, LinearLevelMapping, LinearNorm, LinearOrdering, ObligationReport, ObligationVerdict,
    Ordering, OrderingError, RPOOrdering, SymbolKey, check_obligations, symbol_label,
)

logger = logging.getLogger(__name__)

NONE_WITHIN_BOUND = "no ordering within bound (not a proof of impossibility)"

DEFAULT_COEFFICIENT_BOUND = 10
DEFAULT_NODE_LIMIT = 5000
PROPAGATION_STEPS = 200
MAX_PRECEDENCE_SYMBOLS = 8


@dataclass(frozen=True)
class Found:
    ordering: Ordering
    nodes: int
    report: ObligationReport

    def to_dict(self) -> Dict[str, Any]:
        return {"found": True, "ordering": self.ordering.to_dict(), "nodes": self.nodes,
                "check": self.report.to_dict()}


@dataclass(frozen=True)
class NoneWithinBound:
    strategy: str
    nodes: int
    exhaustive: bool
    message: str = NONE_WITHIN_BOUND

    def to_dict(self) -> Dict[str, Any]:
        return {"found": False, "strategy": self.strategy, "nodes": self.nodes,
                "exhaustive": self.exhaustive, "message": self.message}


SearchResult = Any  # Found | NoneWithinBound


class _NodeLimit(Exception):
    pass


# --- Linear coefficients ---

@dataclass(frozen=True, eq=False)
class _Expr:
    id: int
    kind: str  # const | param | sum | prod
    value: int = 0
    children: Tuple["_Expr", ...] = ()


class _ExprPool:
    """Hash-consed sums and products over constants and parameters."""

    def __init__(self):
        self.nodes: List[_Expr] = []
        self._index: Dict[Tuple, _Expr] = {}

    def _make(self, kind: str, value: int = 0, children: Tuple[_Expr, ...] = ()) -> _Expr:
        key = (kind, value, tuple(child.id for child in children))
        if key not in self._index:
            node = _Expr(len(self.nodes), kind, value, children)
            self.nodes.append(node)
            self._index[key] = node
        return self._index[key]

    def const(self, value: int) -> _Expr:
        return self._make("const", value)

    def param(self, index: int) -> _Expr:
        return self._make("param", index)

    def add(self, *terms: _Expr) -> _Expr:
        flat: List[_Expr] = []
        constant = 0
        for term in terms:
            for part in (term.children if term.kind == "sum" else (term,)):
                if part.kind == "const":
                    constant += part.value
                else:
                    flat.append(part)
        if constant:
            flat.append(self.const(constant))
        if not flat:
            return self.const(0)
        if len(flat) == 1:
            return flat[0]
        return self._make("sum", 0, tuple(sorted(flat, key=lambda n: n.id)))

    def mul(self, *factors: _Expr) -> _Expr:
        flat: List[_Expr] = []
        constant = 1
        for factor in factors:
            for part in (factor.children if factor.kind == "prod" else (factor,)):
                if part.kind == "const":
                    constant *= part.value
                else:
                    flat.append(part)
        if constant == 0:
            return self.const(0)
        if constant != 1:
            flat.append(self.const(constant))
        if not flat:
            return self.const(constant)
        if len(flat) == 1:
            return flat[0]
        return self._make("prod", 0, tuple(sorted(flat, key=lambda n: n.id)))


Interval = Tuple[int, int]
_SymForm = Tuple[_Expr, Dict[int, _Expr]]


@dataclass(frozen=True)
class _Constraint:
    left: _Expr
    right: _Expr
    strict: bool


@dataclass
class _LinearProblem:
    pool: _ExprPool = field(default_factory=_ExprPool)
    params: List[Tuple[str, SymbolKey, int]] = field(default_factory=list)
    constraints: List[_Constraint] = field(default_factory=list)
    _level: Dict[SymbolKey, Tuple[_Expr, Tuple[_Expr, ...]]] = field(default_factory=dict)
    _norm: Dict[SymbolKey, Tuple[_Expr, Tuple[_Expr, ...]]] = field(default_factory=dict)
    _forms: Dict[Term, _SymForm] = field(default_factory=dict)

    def _new_param(self, kind: str, key: SymbolKey, position: int) -> _Expr:
        self.params.append((kind, key, position))
        return self.pool.param(len(self.params) - 1)

    def _symbol(self, table: Dict, kind: str, key: SymbolKey) -> Tuple[_Expr, Tuple[_Expr, ...]]:
        if key not in table:
            if kind == "level" and key[0] == "solve" and key[1] >= 1:
                constant = self.pool.const(0)
                coefficients = (self.pool.const(1),) + tuple(
                    self._new_param(kind, key, i) for i in range(1, key[1] + 1) if i > 1)
            else:
                constant = self._new_param(kind, key, 0)
                coefficients = tuple(self._new_param(kind, key, i) for i in range(1, key[1] + 1))
            table[key] = (constant, coefficients)
        return table[key]

    def _combine(self, constant: _Expr, coefficients: Sequence[_Expr], args: Sequence[Term]) -> _SymForm:
        parts = [constant]
        variables: Dict[int, List[_Expr]] = {}
        for a, arg in zip(coefficients, args):
            arg_constant, arg_vars = self.norm_form(arg)
            parts.append(self.pool.mul(a, arg_constant))
            for var_id, weight in arg_vars.items():
                variables.setdefault(var_id, []).append(self.pool.mul(a, weight))
        return self.pool.add(*parts), {v: self.pool.add(*ws) for v, ws in variables.items()}

    def norm_form(self, t: Term) -> _SymForm:
        if isinstance(t, Variable):
            return self.pool.const(0), {t.id: self.pool.const(1)}
        if t not in self._forms:
            constant, coefficients = self._symbol(self._norm, "norm", t.key)
            self._forms[t] = self._combine(constant, coefficients, t.args)
        return self._forms[t]

    def level_form(self, atom: Compound) -> _SymForm:
        constant, coefficients = self._symbol(self._level, "level", atom.key)
        return self._combine(constant, coefficients, atom.args)

    def add_obligation(self, caller: Compound, callee: Compound) -> None:
        (lc, lv), (rc, rv) = self.level_form(caller), self.level_form(callee)
        self.constraints.append(_Constraint(lc, rc, True))
        zero = self.pool.const(0)
        for var_id in set(lv) | set(rv):
            self.constraints.append(_Constraint(lv.get(var_id, zero), rv.get(var_id, zero), False))

    def to_ordering(self, assignment: Sequence[int]) -> LinearOrdering:
        levels: Dict[SymbolKey, LinearCoefficients] = {}
        norms: Dict[SymbolKey, LinearCoefficients] = {}

        def value(expr: _Expr) -> int:
            return expr.value if expr.kind == "const" else assignment[expr.value]

        for table, target in ((self._level, levels), (self._norm, norms)):
            for key, (constant, coefficients) in table.items():
                target[key] = LinearCoefficients(value(constant), tuple(value(a) for a in coefficients))
        return LinearOrdering(LinearLevelMapping(levels, LinearNorm(norms, "zero")))


def _forward(problem: _LinearProblem, domains: Sequence[Interval]) -> List[Interval]:
    intervals: List[Interval] = []
    for node in problem.pool.nodes:
        if node.kind == "const":
            intervals.append((node.value, node.value))
        elif node.kind == "param":
            intervals.append(domains[node.value])
        elif node.kind == "sum":
            intervals.append((sum(intervals[c.id][0] for c in node.children),
                              sum(intervals[c.id][1] for c in node.children)))
        else:
            intervals.append((math.prod(intervals[c.id][0] for c in node.children),
                              math.prod(intervals[c.id][1] for c in node.children)))
    return intervals


def _narrow(intervals: List[Interval], node: _Expr, lo: int, hi: int) -> bool:
    current = intervals[node.id]
    new = (max(current[0], lo), min(current[1], hi))
    intervals[node.id] = new
    return new[0] <= new[1]


def _propagate(problem: _LinearProblem, domains: List[Interval]) -> Optional[List[Interval]]:
    """Interval narrowing to a fixpoint (or the step cap); None when infeasible."""
    for _ in range(PROPAGATION_STEPS):
        intervals = _forward(problem, domains)
        for constraint in problem.constraints:
            gap = 1 if constraint.strict else 0
            left, right = intervals[constraint.left.id], intervals[constraint.right.id]
            if not _narrow(intervals, constraint.left, right[0] + gap, left[1]):
                return None
            if not _narrow(intervals, constraint.right, right[0], intervals[constraint.left.id][1] - gap):
                return None

        for node in reversed(problem.pool.nodes):
            lo, hi = intervals[node.id]
            if lo > hi:
                return None
            if node.kind == "const" and not lo <= node.value <= hi:
                return None
            if node.kind == "sum":
                total_lo = sum(intervals[c.id][0] for c in node.children)
                total_hi = sum(intervals[c.id][1] for c in node.children)
                for child in node.children:
                    c_lo, c_hi = intervals[child.id]
                    if not _narrow(intervals, child, lo - (total_hi - c_hi), hi - (total_lo - c_lo)):
                        return None
            elif node.kind == "prod":
                for i, child in enumerate(node.children):
                    others = [intervals[c.id] for j, c in enumerate(node.children) if j != i]
                    o_lo, o_hi = math.prod(o[0] for o in others), math.prod(o[1] for o in others)
                    new_lo, new_hi = intervals[child.id]
                    if o_hi == 0:
                        if lo > 0:
                            return None
                    else:
                        new_lo = max(new_lo, -(-lo // o_hi))
                    if o_lo > 0:
                        new_hi = min(new_hi, hi // o_lo)
                    if not _narrow(intervals, child, new_lo, new_hi):
                        return None

        narrowed = [intervals[problem.pool.param(i).id] for i in range(len(domains))]
        if any(lo > hi for lo, hi in narrowed):
            return None
        if narrowed == domains:
            return domains
        domains = narrowed
    return domains


def _satisfied(problem: _LinearProblem, assignment: Sequence[int]) -> bool:
    intervals = _forward(problem, [(v, v) for v in assignment])
    return all(
        intervals[c.left.id][0] >= intervals[c.right.id][0] + (1 if c.strict else 0)
        for c in problem.constraints
    )


def _occurrences(problem: _LinearProblem) -> List[int]:
    counts = [0] * len(problem.params)
    for node in problem.pool.nodes:
        for child in node.children:
            if child.kind == "param":
                counts[child.value] += 1
    return counts


def _zero_products(problem: _LinearProblem) -> List[Tuple[int, ...]]:
    """Parameter factors of the products that a variable weight bounded by zero forces to zero."""
    products: List[Tuple[int, ...]] = []
    for constraint in problem.constraints:
        if constraint.strict or constraint.left.kind != "const" or constraint.left.value != 0:
            continue
        right = constraint.right
        for part in (right.children if right.kind == "sum" else (right,)):
            if part.kind == "prod":
                factors = tuple(child.value for child in part.children if child.kind == "param")
                if len(factors) > 1:
                    products.append(factors)
    return products


Monomial = Tuple[int, ...]


def _polynomials(problem: _LinearProblem, domains: Sequence[Interval]) -> List[Dict[Monomial, int]]:
    """Every pool node as a polynomial in the open parameters; fixed parameters are substituted."""
    polys: List[Dict[Monomial, int]] = []
    for node in problem.pool.nodes:
        if node.kind == "const":
            poly = {(): node.value} if node.value else {}
        elif node.kind == "param":
            lo, hi = domains[node.value]
            if lo == hi:
                poly = {(): lo} if lo else {}
            else:
                poly = {(node.value,): 1}
        elif node.kind == "sum":
            poly = {}
            for child in node.children:
                for monomial, coefficient in polys[child.id].items():
                    poly[monomial] = poly.get(monomial, 0) + coefficient
        else:
            poly = {(): 1}
            for child in node.children:
                product: Dict[Monomial, int] = {}
                for m1, c1 in poly.items():
                    for m2, c2 in polys[child.id].items():
                        monomial = tuple(sorted(m1 + m2))
                        product[monomial] = product.get(monomial, 0) + c1 * c2
                poly = product
        polys.append(poly)
    return polys


def _strict_cycle(problem: _LinearProblem, domains: Sequence[Interval]) -> bool:
    """True when the constraints chain a value strictly below itself.

    Sides with the same polynomial are one vertex; a strict constraint whose
    right side dominates its left side coefficient-wise also counts.
    """
    polys = _polynomials(problem, domains)
    edges: Dict[FrozenSet, Set[FrozenSet]] = {}
    strict: List[Tuple[FrozenSet, FrozenSet]] = []
    for constraint in problem.constraints:
        left, right = polys[constraint.left.id], polys[constraint.right.id]
        u, v = frozenset(left.items()), frozenset(right.items())
        if constraint.strict:
            if all(right.get(monomial, 0) >= coefficient for monomial, coefficient in left.items()):
                return True
            strict.append((u, v))
        edges.setdefault(u, set()).add(v)
    for u, v in strict:
        stack, seen = [v], {v}
        while stack:
            current = stack.pop()
            if current == u:
                return True
            for following in edges.get(current, ()):
                if following not in seen:
                    seen.add(following)
                    stack.append(following)
    return False


def _branch_parameter(domains: Sequence[Interval], occurrences: Sequence[int],
                      zero_products: Sequence[Tuple[int, ...]]) -> int:
    # a zero product with every factor still open is a disjunction; split it first
    counts: Dict[int, int] = {}
    for factors in zero_products:
        if any(domains[i][1] == 0 for i in factors):
            continue
        for i in factors:
            if domains[i][0] < domains[i][1]:
                counts[i] = counts.get(i, 0) + 1
    if counts:
        return max(sorted(counts), key=lambda i: counts[i])
    open_params = [i for i, (lo, hi) in enumerate(domains) if lo < hi]
    return min(open_params, key=lambda i: (domains[i][1] - domains[i][0], -occurrences[i], i))


def _search_linear(obligations: ObligationSet, bound: int, node_limit: int) -> SearchResult:
    problem = _LinearProblem()
    for obligation in obligations:
        if isinstance(obligation.caller, Compound) and isinstance(obligation.callee, Compound):
            problem.add_obligation(obligation.caller, obligation.callee)
    for i in range(len(problem.params)):
        problem.pool.param(i)
    occurrences = _occurrences(problem)
    zero_products = _zero_products(problem)
    nodes = 0

    def dfs(domains: List[Interval]) -> Optional[List[int]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise _NodeLimit()
        domains = _propagate(problem, domains)
        if domains is None or _strict_cycle(problem, domains):
            return None
        if all(lo == hi for lo, hi in domains):
            assignment = [lo for lo, _ in domains]
            return assignment if _satisfied(problem, assignment) else None
        chosen = _branch_parameter(domains, occurrences, zero_products)
        lo, hi = domains[chosen]
        for value in range(lo, hi + 1):
            trial = list(domains)
            trial[chosen] = (value, value)
            result = dfs(trial)
            if result is not None:
                return result
        return None

    try:
        assignment = dfs([(0, bound)] * len(problem.params))
        exhaustive = True
    except _NodeLimit:
        assignment, exhaustive = None, False
    if assignment is None:
        logger.info(f"Linear search: none within bound {bound} after {nodes} nodes (exhaustive={exhaustive})")
        return NoneWithinBound(f"linear:{bound}", nodes, exhaustive)
    return _confirm(problem.to_ordering(assignment), obligations, nodes, "linear")


# --- Recursive path ordering ---

Precedence = FrozenSet[Tuple[SymbolKey, SymbolKey]]
Statuses = FrozenSet[Tuple[SymbolKey, str]]
_State = Tuple[Precedence, Statuses]


class _PrecedenceSearch:
    """Lazy search over precedences and lex/mul statuses, relating at most max_symbols symbols."""

    def __init__(self, node_limit: int, max_symbols: int = MAX_PRECEDENCE_SYMBOLS):
        self.node_limit = node_limit
        self.max_symbols = max_symbols
        self.nodes = 0
        self.capped = False

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _NodeLimit()

    @staticmethod
    def reaches(prec: Precedence, f: SymbolKey, g: SymbolKey) -> bool:
        stack, seen = [f], {f}
        while stack:
            current = stack.pop()
            for a, b in prec:
                if a == current and b not in seen:
                    if b == g:
                        return True
                    seen.add(b)
                    stack.append(b)
        return False

    @staticmethod
    def status_of(statuses: Statuses, key: SymbolKey) -> Optional[str]:
        return next((value for symbol, value in statuses if symbol == key), None)

    def _extend(self, state: _State, f: SymbolKey, g: SymbolKey) -> Optional[_State]:
        prec, statuses = state
        extended = prec | {(f, g)}
        if len({symbol for pair in extended for symbol in pair}) > self.max_symbols:
            self.capped = True
            return None
        return extended, statuses

    def greater(self, s: Term, t: Term, state: _State) -> Iterator[_State]:
        """States extending state under which s > t, cheapest first."""
        self._tick()
        if isinstance(s, Variable):
            return
        if isinstance(t, Variable):
            if t.id in variable_ids(s):
                yield state
            return
        for arg in s.args:
            yield from self.greater_or_equal(arg, t, state)
        prec = state[0]
        if s.key == t.key:
            yield from self._same_symbol(s, t, state)
        elif self.reaches(prec, s.key, t.key):
            yield from self._all_greater(s, t.args, state)
        elif not self.reaches(prec, t.key, s.key):
            extended = self._extend(state, s.key, t.key)
            if extended is not None:
                yield from self._all_greater(s, t.args, extended)

    def greater_or_equal(self, s: Term, t: Term, state: _State) -> Iterator[_State]:
        if s == t:
            yield state
            return
        yield from self.greater(s, t, state)

    def _all_greater(self, s: Term, targets: Sequence[Term], state: _State) -> Iterator[_State]:
        if not targets:
            yield state
            return
        for extended in self.greater(s, targets[0], state):
            yield from self._all_greater(s, targets[1:], extended)

    def _same_symbol(self, s: Compound, t: Compound, state: _State) -> Iterator[_State]:
        prec, statuses = state
        decided = self.status_of(statuses, s.key)
        if decided in (None, "lex"):
            yield from self._lex(s, t, state if decided else (prec, statuses | {(s.key, "lex")}))
        if decided in (None, "mul") and s.arity > 1:
            yield from self._multiset(s, t, state if decided else (prec, statuses | {(s.key, "mul")}))

    def _lex(self, s: Compound, t: Compound, state: _State) -> Iterator[_State]:
        for x, y in zip(s.args, t.args):
            if x == y:
                continue
            for extended in self.greater(x, y, state):
                yield from self._all_greater(s, t.args, extended)
            return

    def _multiset(self, s: Compound, t: Compound, state: _State) -> Iterator[_State]:
        left, right = list(s.args), list(t.args)
        for x in list(left):
            if x in right:
                right.remove(x)
                left.remove(x)
        if left:
            yield from self._cover(left, right, state)

    def _cover(self, left: Sequence[Term], right: Sequence[Term], state: _State) -> Iterator[_State]:
        # every remaining right argument needs some remaining left argument above it
        if not right:
            yield state
            return
        for x in left:
            for extended in self.greater(x, right[0], state):
                yield from self._cover(left, right[1:], extended)

    def solve(self, pairs: Sequence[Tuple[Term, Term]], index: int, state: _State) -> Optional[_State]:
        self._tick()
        if index == len(pairs):
            return state
        tried: Set[_State] = set()
        caller, callee = pairs[index]
        for extended in self.greater(caller, callee, state):
            if extended in tried:
                continue
            tried.add(extended)
            result = self.solve(pairs, index + 1, extended)
            if result is not None:
                return result
        return None


def _symbols(terms: Sequence[Term]) -> List[SymbolKey]:
    found: Dict[SymbolKey, None] = {}
    stack = list(reversed(terms))
    while stack:
        t = stack.pop()
        if isinstance(t, Compound):
            found.setdefault(t.key)
            stack.extend(reversed(t.args))
    return list(found)


def _total_order(prec: Precedence, symbols: Sequence[SymbolKey]) -> List[SymbolKey]:
    sorter: TopologicalSorter = TopologicalSorter()
    for symbol in symbols:
        sorter.add(symbol)
    for f, g in prec:
        sorter.add(g, f)
    return list(sorter.static_order())


def _search_rpo(obligations: ObligationSet, node_limit: int, max_symbols: int = MAX_PRECEDENCE_SYMBOLS) -> SearchResult:
    pairs = [(o.caller, o.callee) for o in obligations]
    search = _PrecedenceSearch(node_limit, max_symbols)
    try:
        state = search.solve(pairs, 0, (frozenset(), frozenset()))
        exhaustive = True
    except _NodeLimit:
        state, exhaustive = None, False
    if state is None:
        logger.info(f"RPO search: none found after {search.nodes} nodes "
                    f"(exhaustive={exhaustive}, symbol cap reached={search.capped})")
        message = NONE_WITHIN_BOUND
        if search.capped:
            message = f"{NONE_WITHIN_BOUND}; precedences relating more than {max_symbols} symbols were not tried"
        return NoneWithinBound("rpo", search.nodes, exhaustive, message)
    prec, statuses = state
    symbols = _symbols([t for pair in pairs for t in pair])
    ordering = RPOOrdering(_total_order(prec, symbols), dict(statuses))
    return _confirm(ordering, obligations, search.nodes, "rpo")


def _confirm(ordering: Ordering, obligations: ObligationSet, nodes: int, strategy: str) -> Found:
    report = check_obligations(ordering, obligations)
    if report.verdict is ObligationVerdict.COUNTEREXAMPLE:
        raise OrderingError(f"{strategy} search produced an ordering that fails {len(report.violations)} obligations")
    logger.info(f"{strategy} search found an ordering after {nodes} nodes")
    return Found(ordering, nodes, report)


def parse_strategy(text: str) -> Tuple[str, int]:
    """'linear:BOUND' or 'rpo' to (strategy, bound)."""
    name, _, bound = text.partition(":")
    if name == "rpo" and not bound:
        return "rpo", 0
    if name == "linear":
        if not bound:
            return "linear", DEFAULT_COEFFICIENT_BOUND
        if bound.isdigit():
            return "linear", int(bound)
    raise OrderingError(f"Unknown strategy '{text}'; expected linear:BOUND or rpo")


def search_ordering(obligations: ObligationSet, strategy: str = "linear",
                    coefficient_bound: int = DEFAULT_COEFFICIENT_BOUND,
                    node_limit: int = DEFAULT_NODE_LIMIT) -> SearchResult:
    """Search for an ordering under which every obligation decreases.

    Args:
        obligations: Harvested caller > callee obligations.
        strategy: "linear" or "rpo".
        coefficient_bound: Largest coefficient tried by the linear strategy.
        node_limit: Search nodes before giving up.

    Returns:
        Found with an ordering that re-passes check_obligations, or NoneWithinBound.
    """
    if coefficient_bound < 0 or node_limit <= 0:
        raise OrderingError(f"Invalid search limits: bound {coefficient_bound}, nodes {node_limit}")
    if strategy == "linear":
        return _search_linear(obligations, coefficient_bound, node_limit)
    if strategy == "rpo":
        return _search_rpo(obligations, node_limit)
    raise OrderingError(f"Unknown strategy '{strategy}'")
