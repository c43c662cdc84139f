"""
CTL model checking over reachability graphs

Formulas use ``in(Machine.Node)`` and ``emits(symbol)`` atoms. Evaluation
labels the states of a ReachabilityGraph by fixpoints; with fairness the
path quantifiers range over paths that traverse a member of every fairness
set infinitely often.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import networkx as nx
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from boolform import IDENT_PATTERN
from csm_core import GlobalState, System, emit, format_state
from product import (
    FairnessSet, ProductExplorer, ReachabilityGraph, with_stutter,
)

logger = logging.getLogger(__name__)


class CtlSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnresolvedReference(LookupError):
    """An ``in(M.N)`` atom names a machine or node the system does not have."""

    def __str__(self):
        return self.args[0] if self.args else ''


class DeadlockError(RuntimeError):
    """The graph has deadlock states and stuttering was not allowed."""

    def __init__(self, message: str, states: Sequence[str]):
        super().__init__(message)
        self.states = list(states)


class UnsupportedWitness(ValueError):
    """No witness shape is defined for the formula."""


# ==================== Formulas ====================

@dataclass(frozen=True)
class CtlTrue:
    pass


@dataclass(frozen=True)
class CtlFalse:
    pass


@dataclass(frozen=True)
class InState:
    machine: str
    node: str


@dataclass(frozen=True)
class Emits:
    symbol: str


@dataclass(frozen=True)
class Neg:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class Conj:
    left: 'CtlFormula'
    right: 'CtlFormula'


@dataclass(frozen=True)
class Disj:
    left: 'CtlFormula'
    right: 'CtlFormula'


@dataclass(frozen=True)
class EX:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class EF:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class EG:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class AX:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class AF:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class AG:
    arg: 'CtlFormula'


@dataclass(frozen=True)
class EU:
    left: 'CtlFormula'
    right: 'CtlFormula'


@dataclass(frozen=True)
class AU:
    left: 'CtlFormula'
    right: 'CtlFormula'


CtlFormula = Union[CtlTrue, CtlFalse, InState, Emits, Neg, Conj, Disj,
                   EX, EF, EG, AX, AF, AG, EU, AU]

TEMPORAL = (EX, EF, EG, AX, AF, AG, EU, AU)
UNARY_TEMPORAL = {EX: 'EX', EF: 'EF', EG: 'EG', AX: 'AX', AF: 'AF', AG: 'AG'}

CTL_GRAMMAR = r'''
?start: ctl

?ctl: conj
    | ctl "|" conj              -> or_

?conj: unary
    | conj "&" unary            -> and_

?unary: "!" unary               -> neg
    | "AG" unary                -> ag
    | "AF" unary                -> af
    | "AX" unary                -> ax
    | "EG" unary                -> eg
    | "EF" unary                -> ef
    | "EX" unary                -> ex
    | primary

?primary: "(" ctl ")"
    | "A" "[" ctl "U" ctl "]"   -> au
    | "E" "[" ctl "U" ctl "]"   -> eu
    | "in" "(" IDENT "." IDENT ")" -> in_state
    | "emits" "(" IDENT ")"     -> emits
    | "true"                    -> true
    | "false"                   -> false

IDENT: /''' + IDENT_PATTERN + r'''/

%import common.WS
%ignore WS
'''


@v_args(inline=True)
class _CtlTransformer(Transformer):
    def or_(self, left, right):
        return Disj(left, right)

    def and_(self, left, right):
        return Conj(left, right)

    def neg(self, arg):
        return Neg(arg)

    def ag(self, arg):
        return AG(arg)

    def af(self, arg):
        return AF(arg)

    def ax(self, arg):
        return AX(arg)

    def eg(self, arg):
        return EG(arg)

    def ef(self, arg):
        return EF(arg)

    def ex(self, arg):
        return EX(arg)

    def au(self, left, right):
        return AU(left, right)

    def eu(self, left, right):
        return EU(left, right)

    def in_state(self, machine, node):
        return InState(str(machine), str(node))

    def emits(self, symbol):
        return Emits(str(symbol))

    def true(self):
        return CtlTrue()

    def false(self):
        return CtlFalse()


_CTL_PARSER = Lark(CTL_GRAMMAR, parser='lalr', transformer=_CtlTransformer())


def parse_ctl(text: str) -> CtlFormula:
    """Parse a CTL formula such as ``"AG !in(Invariant.Error)"``.

    Raises:
        CtlSyntaxError: On empty input, unknown operators or malformed text
    """
    if text is None or not text.strip():
        raise CtlSyntaxError("Empty CTL formula")
    try:
        return _CTL_PARSER.parse(text)
    except UnexpectedInput as e:
        raise CtlSyntaxError(f"Invalid CTL formula {text!r}", e.line, e.column) from e


def print_ctl(f: CtlFormula) -> str:
    return _print(f, 0)


def _print(f: CtlFormula, context: int) -> str:
    if isinstance(f, CtlTrue):
        return 'true'
    if isinstance(f, CtlFalse):
        return 'false'
    if isinstance(f, InState):
        return f"in({f.machine}.{f.node})"
    if isinstance(f, Emits):
        return f"emits({f.symbol})"
    if isinstance(f, EU):
        return f"E[{_print(f.left, 0)} U {_print(f.right, 0)}]"
    if isinstance(f, AU):
        return f"A[{_print(f.left, 0)} U {_print(f.right, 0)}]"
    if isinstance(f, Neg):
        return '!' + _print(f.arg, 3)
    if type(f) in UNARY_TEMPORAL:
        return UNARY_TEMPORAL[type(f)] + ' ' + _print(f.arg, 3)
    if isinstance(f, Conj):
        text, level = _print(f.left, 2) + ' & ' + _print(f.right, 3), 2
    else:
        text, level = _print(f.left, 1) + ' | ' + _print(f.right, 2), 1
    return '(' + text + ')' if level < context else text


def is_state_formula(f: CtlFormula) -> bool:
    """True if ``f`` has no temporal operators."""
    if isinstance(f, TEMPORAL):
        return False
    if isinstance(f, Neg):
        return is_state_formula(f.arg)
    if isinstance(f, (Conj, Disj)):
        return is_state_formula(f.left) and is_state_formula(f.right)
    return True


def atoms_of(f: CtlFormula) -> List[Union[InState, Emits]]:
    found = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (InState, Emits)):
            found.append(g)
        elif hasattr(g, 'arg'):
            stack.append(g.arg)
        elif hasattr(g, 'left'):
            stack.extend((g.right, g.left))
    return found


def resolve(system: System, f: CtlFormula) -> None:
    """Check every ``in`` atom against the system.

    Raises:
        UnresolvedReference: If a machine or node is unknown
    """
    for a in atoms_of(f):
        if isinstance(a, InState):
            if a.machine not in system.machine_index:
                raise UnresolvedReference(f"Unknown machine '{a.machine}' in in({a.machine}.{a.node})")
            m = system.machines[system.machine_index[a.machine]]
            if a.node not in m.node_index:
                raise UnresolvedReference(f"Machine '{a.machine}' has no node '{a.node}'")
        elif a.symbol not in system.internal_alphabet:
            logger.warning("emits(%s): no machine emits this symbol, the atom is always false", a.symbol)


def compile_predicate(system: System, f: CtlFormula) -> Callable[[GlobalState], bool]:
    """Turn a state formula into a predicate over global state vectors."""
    if isinstance(f, CtlTrue):
        return lambda g: True
    if isinstance(f, CtlFalse):
        return lambda g: False
    if isinstance(f, InState):
        i = system.machine_index[f.machine]
        node = system.machines[i].node_index[f.node]
        return lambda g: g[i] == node
    if isinstance(f, Emits):
        symbol = f.symbol
        return lambda g: symbol in emit(system, g)
    if isinstance(f, Neg):
        inner = compile_predicate(system, f.arg)
        return lambda g: not inner(g)
    if isinstance(f, Conj):
        left, right = compile_predicate(system, f.left), compile_predicate(system, f.right)
        return lambda g: left(g) and right(g)
    if isinstance(f, Disj):
        left, right = compile_predicate(system, f.left), compile_predicate(system, f.right)
        return lambda g: left(g) or right(g)
    raise ValueError(f"Not a state formula: {print_ctl(f)}")


# ==================== Traces and results ====================

@dataclass(frozen=True)
class Trace:
    kind: str  # 'path' or 'lasso'
    prefix: Tuple[int, ...]
    cycle: Tuple[int, ...] = ()
    fair: bool = False

    @property
    def is_lasso(self) -> bool:
        return self.kind == 'lasso'


@dataclass
class CheckResult:
    formula: CtlFormula
    holds_at_initial: bool
    satisfying: FrozenSet[int]
    graph: ReachabilityGraph
    fair: bool = False
    complete: bool = True
    witness: Optional[Trace] = None
    deadlock_patched: bool = False
    explored_states: int = 0
    explored_layers: int = 0
    notes: List[str] = field(default_factory=list)


# ==================== Labeling ====================

class Evaluator:
    """Computes satisfying state sets of CTL formulas on one graph."""

    def __init__(self, rg: ReachabilityGraph, fair: bool = False):
        self.rg = rg
        self.fair = fair
        self.all_states = frozenset(range(len(rg.states)))
        self._succ = [frozenset(rg.edges[k].dst for k in ks) for ks in rg.out_edges]
        self._pred = [frozenset(rg.edges[k].src for k in ks) for ks in rg.in_edges]
        self._memo: Dict[CtlFormula, FrozenSet[int]] = {}
        self._fair_states: Optional[FrozenSet[int]] = None

    def fair_states(self) -> FrozenSet[int]:
        if self._fair_states is None:
            self._fair_states = self._eg_region(self.all_states, True)
        return self._fair_states

    def sat(self, f: CtlFormula) -> FrozenSet[int]:
        cached = self._memo.get(f)
        if cached is None:
            cached = self._sat(f)
            self._memo[f] = cached
        return cached

    def _sat(self, f: CtlFormula) -> FrozenSet[int]:
        rg = self.rg
        if isinstance(f, CtlTrue):
            return self.all_states
        if isinstance(f, CtlFalse):
            return frozenset()
        if isinstance(f, (InState, Emits)):
            predicate = compile_predicate(rg.system, f)
            return frozenset(i for i, g in enumerate(rg.states) if predicate(g))
        if isinstance(f, Neg):
            return self.all_states - self.sat(f.arg)
        if isinstance(f, Conj):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, Disj):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, EX):
            return self.pre(self._fair_part(self.sat(f.arg)))
        if isinstance(f, EU):
            return self.until(self.sat(f.left), self._fair_part(self.sat(f.right)))
        if isinstance(f, EG):
            return self._eg_region(self.sat(f.arg), self.fair)
        if isinstance(f, EF):
            return self.sat(EU(CtlTrue(), f.arg))
        if isinstance(f, AX):
            return self.all_states - self.sat(EX(Neg(f.arg)))
        if isinstance(f, AF):
            return self.all_states - self.sat(EG(Neg(f.arg)))
        if isinstance(f, AG):
            return self.all_states - self.sat(EF(Neg(f.arg)))
        if isinstance(f, AU):
            not_right = Neg(f.right)
            bad = Disj(EU(not_right, Conj(Neg(f.left), not_right)), EG(not_right))
            return self.all_states - self.sat(bad)
        raise TypeError(f"Unknown CTL node {f!r}")

    def _fair_part(self, states: FrozenSet[int]) -> FrozenSet[int]:
        return states & self.fair_states() if self.fair else states

    def pre(self, target: FrozenSet[int]) -> FrozenSet[int]:
        result = set()
        for j in target:
            result |= self._pred[j]
        return frozenset(result)

    def until(self, left: FrozenSet[int], right: FrozenSet[int]) -> FrozenSet[int]:
        """Least fixpoint of right | (left & pre(Z))."""
        reached = set(right)
        queue = deque(right)
        while queue:
            j = queue.popleft()
            for i in self._pred[j]:
                if i not in reached and i in left:
                    reached.add(i)
                    queue.append(i)
        return frozenset(reached)

    def sccs(self, region: FrozenSet[int], fair: bool) -> List[Tuple[FrozenSet[int], List[int]]]:
        """Nontrivial SCCs of the subgraph induced by ``region``.

        Returns (states, internal edge indices) pairs; with ``fair`` only the
        components whose internal edges hit every fairness set are kept.
        """
        rg = self.rg
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(region))
        internal = []
        for k, e in enumerate(rg.edges):
            if e.src in region and e.dst in region:
                graph.add_edge(e.src, e.dst)
                internal.append(k)
        components = list(nx.strongly_connected_components(graph))
        component_of = {}
        for c, states in enumerate(components):
            for i in states:
                component_of[i] = c
        inner: List[List[int]] = [[] for _ in components]
        for k in internal:
            e = rg.edges[k]
            c = component_of[e.src]
            if component_of[e.dst] == c:
                inner[c].append(k)
        result = []
        for c, states in enumerate(components):
            edges = inner[c]
            # a single state without a self-loop has no internal edge
            if not edges:
                continue
            if fair and not all(covers(f, edges) for f in rg.fairness):
                continue
            result.append((frozenset(states), edges))
        return result

    def _eg_region(self, region: FrozenSet[int], fair: bool) -> FrozenSet[int]:
        """States of ``region`` with an infinite (fair) path inside ``region``."""
        if not region:
            return frozenset()
        cores = set()
        for states, _ in self.sccs(region, fair):
            cores |= states
        return self.until(region, frozenset(cores))


def covers(fairness: FairnessSet, edges: Sequence[int]) -> bool:
    """True if some edge of ``edges`` is a member of the fairness set."""
    blocked = fairness.blocked
    if not blocked:
        return True
    if len(blocked) < len(edges):
        edge_set = set(edges)
        return sum(1 for k in blocked if k in edge_set) < len(edge_set)
    return any(k not in blocked for k in edges)


def fair_states(rg: ReachabilityGraph) -> FrozenSet[int]:
    """States from which a fair infinite path exists."""
    return Evaluator(rg, fair=True).fair_states()


def _prepare(rg: ReachabilityGraph, allow_deadlock: bool) -> Tuple[ReachabilityGraph, bool]:
    dead = sorted(rg.deadlocks)
    if not dead:
        return rg, False
    if not allow_deadlock:
        names = [rg.describe(i) for i in dead]
        shown = ', '.join(f"#{i} {name}" for i, name in zip(dead[:5], names[:5]))
        more = f" and {len(dead) - 5} more" if len(dead) > 5 else ''
        raise DeadlockError(
            f"The graph has {len(dead)} deadlock state(s): {shown}{more}; "
            f"use --allow-deadlock to add stutter loops", names)
    logger.warning("Patching %d deadlock state(s) with stutter loops", len(dead))
    return with_stutter(rg), True


def check(rg: ReachabilityGraph, f: CtlFormula, fair: bool = False,
          allow_deadlock: bool = False, want_witness: bool = False) -> CheckResult:
    """Evaluate ``f`` on ``rg``.

    Args:
        rg: Reachability graph
        f: Formula
        fair: Restrict path quantifiers to fair paths
        allow_deadlock: Patch deadlock states with stutter loops instead of failing
        want_witness: Attach a witness or counterexample when one is defined

    Returns:
        CheckResult whose ``graph`` is the (possibly patched) graph the witness refers to

    Raises:
        UnresolvedReference: For unknown machines or nodes in ``in`` atoms
        DeadlockError: If ``rg`` has deadlocks and ``allow_deadlock`` is False
    """
    resolve(rg.system, f)
    graph, patched = _prepare(rg, allow_deadlock)
    evaluator = Evaluator(graph, fair)
    satisfying = evaluator.sat(f)
    holds = graph.initial in satisfying
    result = CheckResult(f, holds, satisfying, graph, fair, graph.complete,
                         deadlock_patched=patched, explored_states=len(graph.states),
                         explored_layers=max(len(graph.layers) - 1, 0))
    if patched:
        result.notes.append(f"{len(graph.stutter)} deadlock state(s) patched with stutter loops")
    logger.info("%s%s: %s", 'fair ' if fair else '', print_ctl(f), 'TRUE' if holds else 'FALSE')
    if want_witness:
        try:
            result.witness = witness(graph, f, result, evaluator)
        except UnsupportedWitness as e:
            result.notes.append(str(e))
    return result


# ==================== Witnesses ====================

def shortest_path(rg: ReachabilityGraph, start: int, targets: FrozenSet[int],
                  within: Optional[FrozenSet[int]] = None) -> Optional[List[int]]:
    """Edge indices of a shortest path from ``start`` into ``targets``.

    With ``within`` every state on the path except the last must lie in it.
    """
    if start in targets:
        return []
    if within is not None and start not in within:
        return None
    parent: Dict[int, int] = {start: -1}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for k in rg.out_edges[i]:
            j = rg.edges[k].dst
            if j in parent:
                continue
            parent[j] = k
            if j in targets:
                path = []
                while j != start:
                    k = parent[j]
                    path.append(k)
                    j = rg.edges[k].src
                path.reverse()
                return path
            if within is None or j in within:
                queue.append(j)
    return None


def _cycle_in(rg: ReachabilityGraph, component: FrozenSet[int], edges: List[int],
              entry: int, fair: bool) -> List[int]:
    """A non-empty cycle through ``entry`` inside a component; with ``fair``
    it contains a member of every fairness set."""
    cycle: List[int] = []
    current = entry
    if fair:
        for fs in rg.fairness:
            if any(fs.contains(k) for k in cycle):
                continue
            k = next(k for k in edges if fs.contains(k))
            cycle += shortest_path(rg, current, frozenset([rg.edges[k].src]), component)
            cycle.append(k)
            current = rg.edges[k].dst
    if not cycle:
        k = next(k for k in rg.out_edges[entry] if rg.edges[k].dst in component)
        cycle.append(k)
        current = rg.edges[k].dst
    if current != entry:
        cycle += shortest_path(rg, current, frozenset([entry]), component)
    return cycle


def _lasso(rg: ReachabilityGraph, evaluator: Evaluator, region: FrozenSet[int],
           prefix_within: Optional[FrozenSet[int]]) -> Optional[Trace]:
    components = evaluator.sccs(region, evaluator.fair)
    if not components:
        return None
    owner = {}
    for c, (states, _) in enumerate(components):
        for i in states:
            owner[i] = c
    prefix = shortest_path(rg, rg.initial, frozenset(owner), prefix_within)
    if prefix is None:
        return None
    entry = rg.edges[prefix[-1]].dst if prefix else rg.initial
    states, edges = components[owner[entry]]
    cycle = _cycle_in(rg, states, edges, entry, evaluator.fair)
    return Trace('lasso', tuple(prefix), tuple(cycle), evaluator.fair)


def _path(rg: ReachabilityGraph, targets: FrozenSet[int], fair: bool) -> Optional[Trace]:
    found = shortest_path(rg, rg.initial, targets)
    if found is None:
        return None
    return Trace('path', tuple(found), (), fair)


def witness(rg: ReachabilityGraph, f: CtlFormula, result: CheckResult,
            evaluator: Optional[Evaluator] = None) -> Optional[Trace]:
    """Counterexample or witness for a checked formula.

    Shapes: failed ``AG p`` gives a shortest path to a ``!p`` state; failed
    ``AG AF p`` and failed ``AF p`` give a lasso whose cycle stays in ``!p``
    states; true ``EF p`` gives a shortest path to a ``p`` state; true
    ``EG p`` gives a lasso inside ``p`` states. Verdicts of these shapes with
    no witness (e.g. a true ``AG p``) yield None.

    Raises:
        UnsupportedWitness: For any other formula shape
    """
    if evaluator is None or evaluator.rg is not rg:
        evaluator = Evaluator(rg, result.fair)
    holds = result.holds_at_initial
    fair_part = evaluator._fair_part
    if isinstance(f, AG) and isinstance(f.arg, AF):
        if holds:
            return None
        region = evaluator.all_states - evaluator.sat(f.arg.arg)
        return _lasso(rg, evaluator, region, None)
    if isinstance(f, AF):
        if holds:
            return None
        region = evaluator.all_states - evaluator.sat(f.arg)
        return _lasso(rg, evaluator, region, region)
    if isinstance(f, EG):
        if not holds:
            return None
        region = evaluator.sat(f.arg)
        return _lasso(rg, evaluator, region, region)
    if isinstance(f, AG):
        if holds:
            return None
        return _path(rg, fair_part(evaluator.all_states - evaluator.sat(f.arg)), result.fair)
    if isinstance(f, EF):
        if not holds:
            return None
        return _path(rg, fair_part(evaluator.sat(f.arg)), result.fair)
    raise UnsupportedWitness(f"No witness shape for {print_ctl(f)}")


def trace_indices(rg: ReachabilityGraph, t: Trace) -> List[int]:
    """State indices visited by a trace, starting at the initial state."""
    visited = [rg.initial]
    for k in t.prefix + t.cycle:
        visited.append(rg.edges[k].dst)
    return visited


def replay_trace(rg: ReachabilityGraph, t: Trace) -> List[GlobalState]:
    return [rg.states[i] for i in trace_indices(rg, t)]


def validate_trace(rg: ReachabilityGraph, t: Trace, fair: Optional[bool] = None) -> bool:
    """Check that a trace is a contiguous path or lasso of ``rg``.

    The prefix must start at the initial state; a lasso cycle must be
    non-empty and close on itself; in fair mode the cycle must contain a
    member of every fairness set.
    """
    if fair is None:
        fair = t.fair
    edge_count = len(rg.edges)
    if any(k < 0 or k >= edge_count for k in t.prefix + t.cycle):
        return False
    current = rg.initial
    for k in t.prefix:
        if rg.edges[k].src != current:
            return False
        current = rg.edges[k].dst
    if t.kind == 'path':
        return not t.cycle
    if t.kind != 'lasso' or not t.cycle:
        return False
    start = current
    for k in t.cycle:
        if rg.edges[k].src != current:
            return False
        current = rg.edges[k].dst
    if current != start:
        return False
    if fair:
        return all(any(fs.contains(k) for k in t.cycle) for fs in rg.fairness)
    return True


# ==================== On-the-fly safety ====================

def check_on_the_fly(s: System, p: CtlFormula, max_states: Optional[int] = None,
                     max_edges: Optional[int] = None, allow_deadlock: bool = False) -> CheckResult:
    """Evaluate ``AG p`` while building the product.

    Exploration stops at the first discovered state violating ``p``; the
    result then carries a shortest counterexample path on the partial graph.
    An expanded state without successors fails the check unless
    ``allow_deadlock`` is set, in which case it stutters and keeps ``p``.

    Raises:
        ValueError: If ``p`` is not a state formula
        UnresolvedReference: For unknown machines or nodes
        DeadlockError: If a deadlock state is expanded before any violation
            and ``allow_deadlock`` is False
        ProductLimitExceeded: If the caps are exceeded first
    """
    if not is_state_formula(p):
        raise ValueError(f"On-the-fly checking needs a state predicate, got {print_ctl(p)}")
    resolve(s, p)
    predicate = compile_predicate(s, p)
    dead: List[int] = []

    def deadlock(i: int, g: GlobalState) -> None:
        if not allow_deadlock:
            name = format_state(s, g)
            raise DeadlockError(
                f"Deadlock state #{i} {name} reached during on-the-fly exploration; "
                f"use --allow-deadlock to add stutter loops", [name])
        dead.append(i)

    explorer = ProductExplorer(s, max_states, max_edges)
    graph, stopped = explorer.explore(stop=lambda g: not predicate(g), on_deadlock=deadlock)
    satisfying = frozenset(i for i, g in enumerate(graph.states) if predicate(g))
    formula = AG(p)
    result = CheckResult(formula, stopped is None, satisfying, graph, False, stopped is None,
                         explored_states=len(graph.states),
                         explored_layers=max(len(graph.layers) - 1, 0))
    if stopped is not None:
        path = shortest_path(graph, graph.initial, frozenset([stopped]))
        result.witness = Trace('path', tuple(path), (), False)
        result.notes.append(f"stopped after {len(graph.states)} state(s) at {graph.describe(stopped)}")
    if dead:
        result.notes.append(f"{len(dead)} deadlock state(s) treated as stutter loops")
    logger.info("on-the-fly %s: %s (%d states explored)", print_ctl(formula),
                'TRUE' if result.holds_at_initial else 'FALSE', len(graph.states))
    return result

