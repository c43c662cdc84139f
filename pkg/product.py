"""
CSM product (reachability graph)

Builds the global state graph of a System by breadth-first exploration.
In every global step each machine takes exactly one enabled edge (an ear or
a transition); all machines read the union of the symbols emitted by the
current nodes. Candidate global edges are the per-machine edge tuples; their
conjoined residual guards range over environment symbols only, and tuples
whose conjunction is unsatisfiable (void edges) are dropped.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from boolform import TRUE, ConstTrue, Formula, is_unsatisfiable, make_and, support
from csm_core import (
    GlobalState, Machine, ModelError, System, emit, enabled_at, format_state,
)

logger = logging.getLogger(__name__)


class ProductLimitExceeded(RuntimeError):
    """Raised when exploration exceeds the configured state or edge cap."""

    def __init__(self, message: str, partial: Dict[str, int]):
        super().__init__(message)
        self.partial = partial


class ObserverError(ModelError):
    """Raised when an observer machine would emit symbols."""


@dataclass(frozen=True, slots=True)
class ProductEdge:
    src: int
    dst: int
    residual: Formula
    # per-machine edge index; None marks a stutter loop added on a deadlock
    choices: Optional[Tuple[int, ...]]


@dataclass(frozen=True)
class FairnessSet:
    """Weak-fairness requirement for one component transition.

    A product edge is a member unless the owner transition was enabled at
    the edge's source (under the edge's residual) and another edge was chosen.
    Only those non-members are stored, in ``blocked``.
    """
    machine: int
    edge: int
    owner: Tuple[str, str]
    blocked: FrozenSet[int] = frozenset()

    def contains(self, edge_index: int) -> bool:
        return edge_index not in self.blocked

    def label(self) -> str:
        return f"{self.owner[0]}:{self.owner[1]}"


@dataclass(frozen=True)
class ReachabilityGraph:
    system: System
    states: Tuple[GlobalState, ...]
    initial: int
    edges: Tuple[ProductEdge, ...]
    fairness: Tuple[FairnessSet, ...] = ()
    # new states per BFS layer, layer 0 being the initial state
    layers: Tuple[int, ...] = ()
    complete: bool = True
    stutter: FrozenSet[int] = frozenset()
    index: Dict[GlobalState, int] = field(init=False, compare=False, repr=False)
    out_edges: Tuple[Tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    in_edges: Tuple[Tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        out = [[] for _ in self.states]
        inc = [[] for _ in self.states]
        for k, e in enumerate(self.edges):
            out[e.src].append(k)
            inc[e.dst].append(k)
        object.__setattr__(self, 'index', {g: i for i, g in enumerate(self.states)})
        object.__setattr__(self, 'out_edges', tuple(tuple(ks) for ks in out))
        object.__setattr__(self, 'in_edges', tuple(tuple(ks) for ks in inc))

    @property
    def deadlocks(self) -> FrozenSet[int]:
        """States without outgoing product edges."""
        return frozenset(i for i, ks in enumerate(self.out_edges) if not ks)

    def successors(self, i: int) -> List[int]:
        return [self.edges[k].dst for k in self.out_edges[i]]

    def describe(self, i: int) -> str:
        return format_state(self.system, self.states[i])


# ==================== Exploration ====================

class ProductExplorer:
    """Breadth-first product construction with memoized per-node enabling."""

    def __init__(self, system: System, max_states: Optional[int] = None, max_edges: Optional[int] = None):
        self.system = system
        self.max_states = max_states
        self.max_edges = max_edges
        self.env = system.environment_alphabet
        self._relevant: List[List[FrozenSet[str]]] = []
        self._targets: List[List[int]] = []
        self._memo: List[Dict] = []
        self._is_transition: List[List[bool]] = []
        for m in system.machines:
            relevant = []
            for node in range(len(m.graph.nodes)):
                symbols = set()
                for k in m.outgoing[node]:
                    symbols |= support(m.graph.edges[k].guard)
                relevant.append(frozenset(symbols - self.env))
            self._relevant.append(relevant)
            self._targets.append([m.node_index[e.dst] for e in m.graph.edges])
            self._is_transition.append([e.is_transition for e in m.graph.edges])
            self._memo.append({})

    def candidates(self, g: GlobalState) -> List[List[Tuple[int, Formula]]]:
        """Enabled (edge index, residual) pairs of every machine at ``g``."""
        present = emit(self.system, g)
        result = []
        for i, m in enumerate(self.system.machines):
            node = g[i]
            key = (node, present & self._relevant[i][node])
            memo = self._memo[i]
            pairs = memo.get(key)
            if pairs is None:
                pairs = enabled_at(m, node, key[1], self.env)
                memo[key] = pairs
            result.append(pairs)
        return result

    def moves(self, g: GlobalState, candidates: Optional[Sequence] = None) -> List[Tuple[GlobalState, Formula, Tuple[int, ...]]]:
        """Non-void edge tuples from ``g`` as (target, residual, choices)."""
        if candidates is None:
            candidates = self.candidates(g)
        if any(not pairs for pairs in candidates):
            return []
        n = len(candidates)
        chosen = [0] * n
        found = []
        targets = self._targets

        def extend(i: int, conj: Formula):
            if i == n:
                choices = tuple(chosen)
                dst = tuple(targets[j][choices[j]] for j in range(n))
                found.append((dst, conj, choices))
                return
            for k, residual in candidates[i]:
                if isinstance(residual, ConstTrue):
                    nxt = conj
                else:
                    nxt = make_and(conj, residual)
                    # a partial conjunction that is already void prunes its subtree
                    if is_unsatisfiable(nxt):
                        continue
                chosen[i] = k
                extend(i + 1, nxt)

        extend(0, TRUE)
        return found

    def explore(self, stop: Optional[Callable[[GlobalState], bool]] = None,
                on_deadlock: Optional[Callable[[int, GlobalState], None]] = None,
                ) -> Tuple[ReachabilityGraph, Optional[int]]:
        """Explore the reachable states.

        Args:
            stop: Optional predicate checked on every newly discovered state;
                exploration ends at the first state for which it is true.
            on_deadlock: Optional callback for each expanded state without
                successors, called with its index and state. It may raise.

        Returns:
            Tuple of (graph, index of the stopping state or None). The graph is
            marked incomplete when exploration stopped early.

        Raises:
            ProductLimitExceeded: If the state or edge cap is exceeded
        """
        system = self.system
        initial = system.initial_state()
        states: List[GlobalState] = [initial]
        index: Dict[GlobalState, int] = {initial: 0}
        edges: List[ProductEdge] = []
        transitions = [(i, k) for i, m in enumerate(system.machines) for k in m.transitions()]
        blocked: Dict[Tuple[int, int], set] = {key: set() for key in transitions}
        layers = [1]

        if stop is not None and stop(initial):
            return self._finish(states, edges, blocked, layers, complete=False), 0

        frontier = deque([0])
        while frontier:
            next_frontier = deque()
            discovered = 0
            for src in frontier:
                g = states[src]
                candidates = self.candidates(g)
                moved = False
                for dst_state, residual, choices in self.moves(g, candidates):
                    moved = True
                    dst = index.get(dst_state)
                    is_new = dst is None
                    if is_new:
                        dst = len(states)
                        index[dst_state] = dst
                        states.append(dst_state)
                        next_frontier.append(dst)
                        discovered += 1
                        if self.max_states is not None and len(states) > self.max_states:
                            self._abort('states', self.max_states, states, edges, layers)
                    k = len(edges)
                    edges.append(ProductEdge(src, dst, residual, choices))
                    self._record_blocking(k, residual, choices, candidates, blocked)
                    if self.max_edges is not None and len(edges) > self.max_edges:
                        self._abort('edges', self.max_edges, states, edges, layers)
                    if is_new and stop is not None and stop(dst_state):
                        layers.append(discovered)
                        return self._finish(states, edges, blocked, layers, complete=False), dst
                if not moved and on_deadlock is not None:
                    on_deadlock(src, g)
            if discovered:
                layers.append(discovered)
                logger.debug("Layer %d: %d new state(s), %d state(s), %d edge(s) in total",
                             len(layers) - 1, discovered, len(states), len(edges))
            frontier = next_frontier

        logger.info("Product of %d machines: %d states, %d edges",
                    len(system.machines), len(states), len(edges))
        return self._finish(states, edges, blocked, layers, complete=True), None

    def _record_blocking(self, k, residual, choices, candidates, blocked):
        for i, pairs in enumerate(candidates):
            is_transition = self._is_transition[i]
            for edge_index, guard_residual in pairs:
                if edge_index == choices[i] or not is_transition[edge_index]:
                    continue
                if isinstance(residual, ConstTrue) or not is_unsatisfiable(make_and(residual, guard_residual)):
                    blocked[(i, edge_index)].add(k)

    def _finish(self, states, edges, blocked, layers, complete) -> ReachabilityGraph:
        fairness = []
        for (i, k), members in blocked.items():
            m = self.system.machines[i]
            e = m.graph.edges[k]
            fairness.append(FairnessSet(i, k, (m.name, f"{e.src}->{e.dst}"), frozenset(members)))
        return ReachabilityGraph(self.system, tuple(states), 0, tuple(edges), tuple(fairness),
                                 tuple(layers), complete)

    def _abort(self, what, cap, states, edges, layers):
        partial = {'states': len(states), 'edges': len(edges), 'layers': len(layers)}
        logger.warning("Product exploration aborted: more than %d %s", cap, what)
        raise ProductLimitExceeded(
            f"Product exceeds the cap of {cap} {what} "
            f"(explored {len(states)} states, {len(edges)} edges before stopping)", partial)


@dataclass(frozen=True)
class Successor:
    """A product edge leaving a given state, before state numbering."""
    dst: GlobalState
    residual: Formula
    choices: Tuple[int, ...]


def successors(s: System, g: GlobalState) -> List[Successor]:
    """Non-void product edges leaving ``g``; empty when ``g`` is a deadlock."""
    return [Successor(dst, residual, choices) for dst, residual, choices in ProductExplorer(s).moves(g)]


def build_product(s: System, max_states: Optional[int] = None, max_edges: Optional[int] = None) -> ReachabilityGraph:
    """Compute the reachability graph of ``s``.

    State indices follow first discovery in breadth-first order; edges from
    one state follow the machine-list order of edge choices.
    """
    graph, _ = ProductExplorer(s, max_states, max_edges).explore()
    return graph


def stats(rg: ReachabilityGraph) -> Dict[str, int]:
    return {
        'states': len(rg.states),
        'edges': len(rg.edges),
        'deadlocks': len(rg.deadlocks),
        'fairness_sets': len(rg.fairness),
        'env_alphabet_size': len(rg.system.environment_alphabet),
    }


def add_observer(s: System, observer: Machine) -> System:
    """Append a silent observer machine to a system.

    Raises:
        ObserverError: If any node of the observer emits symbols
    """
    noisy = sorted(n.name for n in observer.graph.nodes if n.outputs)
    if noisy:
        raise ObserverError(
            f"Observer '{observer.name}' must be silent but emits symbols in node(s) {', '.join(noisy)}")
    return System(s.machines + (observer,), s.declared_env)


def with_stutter(rg: ReachabilityGraph) -> ReachabilityGraph:
    """Copy of ``rg`` with a stutter self-loop on every deadlock state.

    Stutter loops belong to no fairness set.
    """
    dead = sorted(rg.deadlocks)
    if not dead:
        return rg
    edges = list(rg.edges)
    added = []
    for i in dead:
        added.append(len(edges))
        edges.append(ProductEdge(i, i, TRUE, None))
    fairness = tuple(
        FairnessSet(f.machine, f.edge, f.owner, f.blocked | frozenset(added)) for f in rg.fairness)
    return ReachabilityGraph(rg.system, rg.states, rg.initial, tuple(edges), fairness,
                             rg.layers, rg.complete, rg.stutter | frozenset(added))


def project(rg: ReachabilityGraph, machines: int) -> Tuple[set, set]:
    """State and edge sets of ``rg`` restricted to its first ``machines`` coordinates."""
    states = {g[:machines] for g in rg.states}
    edges = {(rg.states[e.src][:machines], rg.states[e.dst][:machines],
              e.choices[:machines] if e.choices is not None else None) for e in rg.edges}
    return states, edges
