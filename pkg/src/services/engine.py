"""Bounded LD and LDNF resolution with call, answer and obligation harvesting."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..core.program import (
    Clause, Literal, PredicateKey, Program, QuerySeq, dependency_relations, is_builtin,
)
from ..core.terms import (
    EMPTY, Compound, Substitution, Term, Variable, VarSupply, VariantSet, canonical,
    format_term, is_ground, rename_apart, unify,
)

logger = logging.getLogger(__name__)


class EngineError(Exception):
    """Custom exception for resolution engine operations."""
    pass


@dataclass(frozen=True)
class Budget:
    """Resolution limits: total nodes per run and resolution depth."""
    max_nodes: int = 10_000
    max_depth: int = 200

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_depth <= 0:
            raise ValueError(f"Budget limits must be positive, got {self.max_nodes}/{self.max_depth}")

    def to_dict(self) -> Dict[str, int]:
        return {"max_nodes": self.max_nodes, "max_depth": self.max_depth}


class NodeStatus(str, Enum):
    EXPANDED = "expanded"
    SUCCESS = "success"
    FAILURE = "failure"
    TRUNCATED = "truncated"
    FLOUNDER = "flounder"


@dataclass(frozen=True)
class Goal:
    """A query literal with its directed ancestors, oldest first.

    Ancestor atoms follow the bindings made since their selection; the second
    element of each pair is the canonical form at selection time. caller is
    the atom whose clause body introduced the literal, exactly as it was
    selected, and never receives later bindings.
    """
    literal: Literal
    ancestors: Tuple[Tuple[Term, Term], ...] = ()
    origin: Optional[Tuple[int, int]] = None
    caller: Optional[Term] = None

    def substituted(self, mgu: Substitution) -> "Goal":
        if not mgu:
            return self
        ancestors = tuple((mgu.apply(atom), key) for atom, key in self.ancestors)
        return Goal(self.literal.map_terms(mgu.apply), ancestors, self.origin, self.caller)


@dataclass(eq=False)
class LDEdge:
    clause_index: Optional[int]
    mgu: Substitution
    child: "LDNode"


@dataclass(eq=False)
class LDNode:
    id: int
    goals: Tuple[Goal, ...]
    depth: int
    instance: Tuple[Term, ...]
    parent: Optional["LDNode"] = None
    children: List[LDEdge] = field(default_factory=list)
    status: NodeStatus = NodeStatus.EXPANDED

    @property
    def query(self) -> QuerySeq:
        return QuerySeq(tuple(goal.literal for goal in self.goals))

    @property
    def selected(self) -> Optional[Literal]:
        return self.goals[0].literal if self.goals else None


@dataclass(frozen=True)
class CallRecord:
    atom: Term
    node_id: int


@dataclass(frozen=True)
class Obligation:
    """caller > callee: the caller as it was selected, the callee as selected after the earlier body atoms."""
    caller: Term
    callee: Term
    clause_index: int
    position: int
    node_id: int = field(default=-1, compare=False)

    def __str__(self) -> str:
        return f"{format_term(self.caller)} > {format_term(self.callee)}"


@dataclass
class LDTree:
    root: LDNode
    program: Program
    nodes: List[LDNode] = field(default_factory=list)
    calls: List[CallRecord] = field(default_factory=list)
    descents: List[Obligation] = field(default_factory=list)
    loop_witness: Optional[Tuple[Term, ...]] = None
    floundered: bool = False

    @property
    def complete(self) -> bool:
        return not any(node.status is NodeStatus.TRUNCATED for node in self.nodes)

    @property
    def root_query(self) -> QuerySeq:
        return self.root.query

    def node(self, node_id: int) -> LDNode:
        return self._index()[node_id]

    def _index(self) -> Dict[int, LDNode]:
        return {node.id: node for node in self.nodes}

    def success_nodes(self) -> List[LDNode]:
        return [node for node in self.nodes if node.status is NodeStatus.SUCCESS]


@dataclass
class LDNFForest:
    """The main tree first, then one subsidiary tree per ground negative call."""
    trees: List[LDTree]

    @property
    def main(self) -> LDTree:
        return self.trees[0]

    @property
    def complete(self) -> bool:
        return all(tree.complete for tree in self.trees)

    @property
    def floundered(self) -> bool:
        return any(tree.floundered for tree in self.trees)

    @property
    def loop_witness(self) -> Optional[Tuple[Term, ...]]:
        for tree in self.trees:
            if tree.loop_witness is not None:
                return tree.loop_witness
        return None

    @property
    def node_count(self) -> int:
        return sum(len(tree.nodes) for tree in self.trees)


Derivation = Union[LDTree, LDNFForest]


class TerminationKind(str, Enum):
    TERMINATES = "terminates"
    LOOP_DETECTED = "loop_detected"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class TerminationStatus:
    kind: TerminationKind
    node_count: int = 0
    witness: Tuple[Term, ...] = ()

    @property
    def definite(self) -> bool:
        return self.kind is not TerminationKind.BUDGET_EXHAUSTED

    def to_dict(self) -> Dict[str, object]:
        result: Dict[str, object] = {"kind": self.kind.value, "node_count": self.node_count}
        if self.witness:
            result["witness"] = [format_term(atom) for atom in self.witness]
        return result


@dataclass(frozen=True)
class Answers:
    """Computed answers up to variance; incomplete when any tree was truncated."""
    items: Tuple[QuerySeq, ...]
    complete: bool

    def terms(self) -> List[Term]:
        return [answer.as_term() for answer in self.items]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class CallSet:
    records: Tuple[CallRecord, ...]
    complete: bool

    @property
    def atoms(self) -> List[Term]:
        return [record.atom for record in self.records]

    def as_variant_set(self) -> VariantSet:
        return VariantSet(self.atoms)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class ObligationSet:
    items: Tuple[Obligation, ...]
    complete: bool

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class _Counter:
    def __init__(self):
        self.value = 0


def _builtin_step(atom: Compound, rest: Tuple[Goal, ...]) -> List[Tuple[Optional[int], Substitution, Tuple[Goal, ...]]]:
    key = atom.key
    if key in (("true", 0), ("write", 1), ("nl", 0)):
        return [(None, EMPTY, rest)]
    if key == ("fail", 0):
        return []
    if key == ("=", 2):
        mgu = unify(atom.args[0], atom.args[1])
        if mgu is None:
            return []
        return [(None, mgu, tuple(goal.substituted(mgu) for goal in rest))]
    if key == ("\\=", 2):
        if unify(atom.args[0], atom.args[1]) is None:
            return [(None, EMPTY, rest)]
        return []
    raise EngineError(f"Unknown built-in {atom.functor}/{atom.arity}")


def _resolve_goal(goals: Tuple[Goal, ...], program: Program, supply: VarSupply,
                  ancestry: Tuple[Tuple[Term, Term], ...]) -> List[Tuple[Optional[int], Substitution, Tuple[Goal, ...]]]:
    selected, rest = goals[0], goals[1:]
    atom = selected.literal.atom
    if not selected.literal.positive:
        raise EngineError("Selected literal is negative; use LDNF resolution")
    if isinstance(atom, Variable):
        raise EngineError("Selected goal is an unbound variable")
    if is_builtin(atom.key):
        return _builtin_step(atom, rest)

    results = []
    for index in program.clause_indices(atom.key):
        clause: Clause = rename_apart(program.clauses[index], supply)
        mgu = unify(atom, clause.head)
        if mgu is None:
            continue
        bound = tuple((mgu.apply(a), k) for a, k in ancestry) if mgu else ancestry
        body = tuple(
            Goal(literal.map_terms(mgu.apply), bound, (index, position), atom)
            for position, literal in enumerate(clause.body)
        )
        results.append((index, mgu, body + tuple(goal.substituted(mgu) for goal in rest)))
    return results


def ld_step(query: QuerySeq, program: Program, supply: VarSupply) -> List[Tuple[Optional[Clause], Substitution, QuerySeq]]:
    """One LD resolution step on the leftmost literal.

    Returns:
        One (clause, mgu, resolvent) entry per applicable clause in source order;
        built-ins report None as the clause.

    Raises:
        EngineError: If the query is empty or the selected literal is negative.
    """
    if query.is_empty:
        raise EngineError("Cannot resolve the empty query")
    goals = tuple(Goal(literal) for literal in query.literals)
    steps = _resolve_goal(goals, program, supply, ())
    return [
        (program.clauses[index] if index is not None else None, mgu,
         QuerySeq(tuple(goal.literal for goal in resolvent)))
        for index, mgu, resolvent in steps
    ]


class _TreeBuilder:
    """Depth-first expansion of one LD tree (and its LDNF subsidiaries)."""

    def __init__(self, program: Program, budget: Budget, supply: VarSupply,
                 allow_negation: bool, counter: _Counter, forest: List[LDTree]):
        self.program = program
        self.budget = budget
        self.supply = supply
        self.allow_negation = allow_negation
        self.counter = counter
        self.forest = forest

    def _new_node(self, tree: LDTree, goals: Tuple[Goal, ...], depth: int,
                  instance: Tuple[Term, ...], parent: Optional[LDNode]) -> LDNode:
        node = LDNode(self.counter.value, goals, depth, instance, parent)
        self.counter.value += 1
        tree.nodes.append(node)
        return node

    def build(self, query: QuerySeq) -> LDTree:
        goals = tuple(Goal(literal) for literal in query.literals)
        placeholder = LDNode(-1, goals, 0, tuple(query.terms()))
        tree = LDTree(root=placeholder, program=self.program)
        tree.root = self._new_node(tree, goals, 0, tuple(query.terms()), None)
        self.forest.append(tree)

        stack = [tree.root]
        while stack:
            node = stack.pop()
            if not node.goals:
                node.status = NodeStatus.SUCCESS
                continue
            if node.depth >= self.budget.max_depth or self.counter.value >= self.budget.max_nodes:
                node.status = NodeStatus.TRUNCATED
                continue
            if node.goals[0].literal.positive:
                self._expand_positive(tree, node)
            else:
                self._expand_negative(tree, node)
            if not node.children and node.status is NodeStatus.EXPANDED:
                node.status = NodeStatus.FAILURE
            stack.extend(edge.child for edge in reversed(node.children))

        if tree.complete:
            logger.debug(f"LD tree complete with {len(tree.nodes)} nodes")
        else:
            logger.debug(f"LD tree truncated after {len(tree.nodes)} nodes")
        return tree

    def _expand_positive(self, tree: LDTree, node: LDNode) -> None:
        selected = node.goals[0]
        atom = selected.literal.atom
        ancestry = selected.ancestors
        if isinstance(atom, Compound) and not is_builtin(atom.key):
            tree.calls.append(CallRecord(atom, node.id))
            key = canonical(atom)
            if selected.origin is not None and selected.caller is not None:
                clause_index, position = selected.origin
                tree.descents.append(Obligation(selected.caller, atom, clause_index, position, node.id))
            if tree.loop_witness is None:
                self._check_loop(tree, atom, key, selected.ancestors)
            ancestry = selected.ancestors + ((atom, key),)

        for index, mgu, resolvent in _resolve_goal(node.goals, self.program, self.supply, ancestry):
            instance = tuple(mgu.apply(term) for term in node.instance) if mgu else node.instance
            child = self._new_node(tree, resolvent, node.depth + 1, instance, node)
            node.children.append(LDEdge(index, mgu, child))

    def _check_loop(self, tree: LDTree, atom: Compound, key: Term,
                    ancestors: Tuple[Tuple[Term, Term], ...]) -> None:
        for position in range(len(ancestors) - 1, -1, -1):
            ancestor, ancestor_key = ancestors[position]
            if isinstance(ancestor, Compound) and ancestor.key == atom.key and ancestor_key == key:
                tree.loop_witness = tuple(a for a, _ in ancestors[position:]) + (atom,)
                logger.info(f"Loop detected: {format_term(atom)} repeats {format_term(ancestor)}")
                return

    def _expand_negative(self, tree: LDTree, node: LDNode) -> None:
        if not self.allow_negation:
            raise EngineError("Negative literal selected in an LD tree; use build_ldnf_forest")
        atom = node.goals[0].literal.atom
        if not is_ground(atom):
            node.status = NodeStatus.FLOUNDER
            tree.floundered = True
            logger.debug(f"Floundering on non-ground negation of {format_term(atom)}")
            return
        subsidiary = self.build(QuerySeq.of(atom))
        if subsidiary.success_nodes():
            return
        if subsidiary.floundered:
            node.status = NodeStatus.FLOUNDER
            tree.floundered = True
            return
        if not subsidiary.complete:
            node.status = NodeStatus.TRUNCATED
            return
        child = self._new_node(tree, node.goals[1:], node.depth + 1, node.instance, node)
        node.children.append(LDEdge(None, EMPTY, child))


def _make_builder(program: Program, query: QuerySeq, budget: Budget, supply: Optional[VarSupply],
                  allow_negation: bool) -> Tuple[_TreeBuilder, List[LDTree]]:
    forest: List[LDTree] = []
    supply = supply or VarSupply.after(program.terms(), query.terms())
    return _TreeBuilder(program, budget, supply, allow_negation, _Counter(), forest), forest


def build_ld_tree(program: Program, query: QuerySeq, budget: Budget = Budget(),
                  supply: Optional[VarSupply] = None) -> LDTree:
    """Expand the LD tree of a definite query depth-first within budget."""
    if not query.is_definite:
        raise EngineError("build_ld_tree requires a definite query")
    builder, _ = _make_builder(program, query, budget, supply, allow_negation=False)
    return builder.build(query)


def build_ldnf_forest(program: Program, query: QuerySeq, budget: Budget = Budget(),
                      supply: Optional[VarSupply] = None) -> LDNFForest:
    """Expand the LDNF forest of a normal query within budget (node budget shared by all trees)."""
    builder, forest = _make_builder(program, query, budget, supply, allow_negation=True)
    builder.build(query)
    return LDNFForest(forest)


def derive(program: Program, query: QuerySeq, budget: Budget = Budget(),
           supply: Optional[VarSupply] = None) -> LDNFForest:
    """Run LD or LDNF resolution as the program and query require; always returns a forest."""
    if program.is_definite and query.is_definite:
        return LDNFForest([build_ld_tree(program, query, budget, supply)])
    return build_ldnf_forest(program, query, budget, supply)


def _trees(derivation: Derivation) -> List[LDTree]:
    if isinstance(derivation, LDNFForest):
        return derivation.trees
    return [derivation]


def _main(derivation: Derivation) -> LDTree:
    return derivation.main if isinstance(derivation, LDNFForest) else derivation


def computed_answers(derivation: Derivation) -> Answers:
    """Root query instances at success leaves, deduplicated up to variance."""
    tree = _main(derivation)
    literals = tree.root.query.literals
    seen = VariantSet()
    items: List[QuerySeq] = []
    for node in tree.success_nodes():
        answer = QuerySeq(tuple(
            Literal(term, literal.positive) for term, literal in zip(node.instance, literals)
        ))
        if seen.add(answer.as_term()):
            items.append(answer)
    complete = all(t.complete for t in _trees(derivation))
    return Answers(tuple(items), complete)


def call_set(derivation: Derivation, fact_view: Iterable[PredicateKey] = ()) -> CallSet:
    """Selected non-built-in atoms up to variance.

    Calls to predicates in fact_view are reported as the fact instances they
    resolve to; lookups that fail contribute nothing.
    """
    viewed = set(fact_view)
    seen = VariantSet()
    records: List[CallRecord] = []
    for tree in _trees(derivation):
        index = tree._index() if viewed else {}
        for record in tree.calls:
            if isinstance(record.atom, Compound) and record.atom.key in viewed:
                node = index[record.node_id]
                candidates = [CallRecord(edge.mgu.apply(record.atom), record.node_id) for edge in node.children]
            else:
                candidates = [record]
            for candidate in candidates:
                if seen.add(candidate.atom):
                    records.append(candidate)
    complete = all(t.complete for t in _trees(derivation))
    return CallSet(tuple(records), complete)


def _answered_descents(tree: LDTree) -> List[Obligation]:
    """Each descent under the bindings of every branch through it that reaches a success leaf.

    Descents with no success below them have no answered instance and are left out.
    """
    recorded: Dict[int, List[Obligation]] = {}
    for descent in tree.descents:
        recorded.setdefault(descent.node_id, []).append(descent)
    instances: List[Obligation] = []
    for leaf in tree.success_nodes():
        path: List[LDNode] = []
        current: Optional[LDNode] = leaf
        while current is not None:
            path.append(current)
            current = current.parent
        path.reverse()
        pending = [descent for node in path for descent in recorded.get(node.id, ())]
        for node, child in zip(path, path[1:]):
            mgu = next(edge.mgu for edge in node.children if edge.child is child)
            if mgu:
                pending = [
                    Obligation(mgu.apply(o.caller), mgu.apply(o.callee), o.clause_index, o.position, o.node_id)
                    for o in pending
                ]
        instances.extend(pending)
    return instances


def decrease_obligations(program: Program, seeds: Sequence[QuerySeq], budget: Budget = Budget(),
                         answered: bool = False) -> ObligationSet:
    """Harvest caller > callee obligations between mutually recursive calls.

    Args:
        program: A definite program.
        seeds: Seed queries, each run as its own LD tree.
        budget: Resolution limits per seed.
        answered: Replace each obligation by its instances under the bindings of
            the branches below it that reach a success.
    """
    graph = dependency_relations(program)
    seen = VariantSet()
    items: List[Obligation] = []
    complete = True
    for seed in seeds:
        tree = build_ld_tree(program, seed, budget)
        complete = complete and tree.complete
        for descent in (_answered_descents(tree) if answered else tree.descents):
            caller, callee = descent.caller, descent.callee
            if not (isinstance(caller, Compound) and isinstance(callee, Compound)):
                continue
            if not graph.mutually_recursive(caller.key, callee.key):
                continue
            if seen.add(Compound("$obligation", (caller, callee))):
                items.append(descent)
    logger.info(f"Harvested {len(items)} obligations from {len(seeds)} seeds (complete={complete})")
    return ObligationSet(tuple(items), complete)


def termination_status(program: Program, query: QuerySeq, budget: Budget = Budget()) -> TerminationStatus:
    """Terminates, LoopDetected (variant repetition on a directed chain) or BudgetExhausted."""
    forest = derive(program, query, budget)
    return status_of(forest)


def status_of(derivation: Derivation) -> TerminationStatus:
    trees = _trees(derivation)
    count = sum(len(tree.nodes) for tree in trees)
    if all(tree.complete for tree in trees):
        return TerminationStatus(TerminationKind.TERMINATES, count)
    for tree in trees:
        if tree.loop_witness is not None:
            return TerminationStatus(TerminationKind.LOOP_DETECTED, count, tree.loop_witness)
    return TerminationStatus(TerminationKind.BUDGET_EXHAUSTED, count)


def replay_loop(program: Program, status: TerminationStatus, budget: Budget = Budget()) -> bool:
    """Re-run the last witness atom and confirm that a variant of it recurs."""
    if status.kind is not TerminationKind.LOOP_DETECTED:
        raise EngineError("Only a detected loop can be replayed")
    replay = termination_status(program, QuerySeq.of(status.witness[-1]), budget)
    return replay.kind is TerminationKind.LOOP_DETECTED


def dump_tree(derivation: Derivation) -> str:
    """One line per node, pre-order: '<depth> <status> <query>'."""
    lines: List[str] = []
    for number, tree in enumerate(_trees(derivation)):
        if number:
            lines.append(f"# subsidiary tree {number}")
        stack = [tree.root]
        while stack:
            node = stack.pop()
            lines.append(f"{node.depth} {node.status.value} {node.query}")
            stack.extend(edge.child for edge in reversed(node.children))
    return "\n".join(lines)
