"""
Concurrent State Machine domain model

A CLG is a labeled graph: nodes carry sets of output symbols, edges carry
Boolean guards over received symbols. Choosing an initial node turns a CLG
into a Machine; a System is a set of machines sharing one broadcast medium.
All objects are immutable once built.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from boolform import (
    Formula, Symbol, assignments, disjoin_all, evaluate, is_satisfiable,
    is_unsatisfiable, restrict, support,
)

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')

# A global state is a vector of node indices, one per machine in system order.
GlobalState = Tuple[int, ...]


class ModelError(ValueError):
    """Raised for ill-formed graphs, machines or systems."""


@dataclass(frozen=True)
class Node:
    name: str
    outputs: FrozenSet[Symbol] = frozenset()


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    guard: Formula

    @property
    def is_ear(self) -> bool:
        """Self-loops are ears: the machine may remain, no transition happens."""
        return self.src == self.dst

    @property
    def is_transition(self) -> bool:
        return self.src != self.dst


@dataclass(frozen=True)
class Clg:
    nodes: Tuple[Node, ...]
    edges: Tuple[Edge, ...]


def check_clg(clg: Clg) -> None:
    """Raise ModelError if node names repeat or an edge names a missing node."""
    seen = set()
    for node in clg.nodes:
        if not IDENT_RE.match(node.name):
            raise ModelError(f"Invalid node name '{node.name}'")
        if node.name in seen:
            raise ModelError(f"Duplicate node name '{node.name}'")
        seen.add(node.name)
        for symbol in node.outputs:
            if not IDENT_RE.match(symbol):
                raise ModelError(f"Invalid symbol name '{symbol}' in node '{node.name}'")
    for edge in clg.edges:
        for end in (edge.src, edge.dst):
            if end not in seen:
                raise ModelError(f"Edge {edge.src} -> {edge.dst} refers to unknown node '{end}'")


@dataclass(frozen=True)
class Machine:
    name: str
    graph: Clg
    initial: str
    # derived lookup tables
    node_index: Dict[str, int] = field(init=False, compare=False, repr=False)
    outgoing: Tuple[Tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not IDENT_RE.match(self.name):
            raise ModelError(f"Invalid machine name '{self.name}'")
        check_clg(self.graph)
        index = {node.name: i for i, node in enumerate(self.graph.nodes)}
        if self.initial not in index:
            raise ModelError(f"Machine '{self.name}': initial node '{self.initial}' is not a node of the graph")
        out = [[] for _ in self.graph.nodes]
        for k, edge in enumerate(self.graph.edges):
            out[index[edge.src]].append(k)
        object.__setattr__(self, 'node_index', index)
        object.__setattr__(self, 'outgoing', tuple(tuple(ks) for ks in out))

    @property
    def initial_index(self) -> int:
        return self.node_index[self.initial]

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self.graph.nodes

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self.graph.edges

    def outputs(self) -> FrozenSet[Symbol]:
        """All symbols this machine emits in any node."""
        result = set()
        for node in self.graph.nodes:
            result |= node.outputs
        return frozenset(result)

    def guard_symbols(self) -> FrozenSet[Symbol]:
        result = set()
        for edge in self.graph.edges:
            result |= support(edge.guard)
        return frozenset(result)

    def transitions(self) -> List[int]:
        """Indices of the non-ear edges."""
        return [k for k, e in enumerate(self.graph.edges) if e.is_transition]

    def node_ref(self, name: str) -> int:
        try:
            return self.node_index[name]
        except KeyError:
            raise ModelError(f"Machine '{self.name}' has no node '{name}'") from None


def make_machine(name: str, clg: Clg, initial: str) -> Machine:
    """Turn a CLG into a machine by choosing its initial node.

    Args:
        name: Machine name, an identifier
        clg: The labeled graph
        initial: Name of the initial node

    Returns:
        The machine

    Raises:
        ModelError: If the graph is ill-formed or the initial node is unknown
    """
    return Machine(name, clg, initial)


@dataclass(frozen=True)
class System:
    machines: Tuple[Machine, ...]
    declared_env: Optional[FrozenSet[Symbol]] = None
    internal_alphabet: FrozenSet[Symbol] = field(init=False, compare=False)
    environment_alphabet: FrozenSet[Symbol] = field(init=False, compare=False)
    machine_index: Dict[str, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.machines:
            raise ModelError("A system needs at least one machine")
        index = {}
        for i, m in enumerate(self.machines):
            if m.name in index:
                raise ModelError(f"Duplicate machine name '{m.name}' in system")
            index[m.name] = i
        internal = set()
        read = set()
        for m in self.machines:
            internal |= m.outputs()
            read |= m.guard_symbols()
        object.__setattr__(self, 'machine_index', index)
        object.__setattr__(self, 'internal_alphabet', frozenset(internal))
        object.__setattr__(self, 'environment_alphabet', frozenset(read - internal))

    @property
    def names(self) -> List[str]:
        return [m.name for m in self.machines]

    def machine(self, name: str) -> Machine:
        try:
            return self.machines[self.machine_index[name]]
        except KeyError:
            raise ModelError(f"System has no machine '{name}'") from None

    def producers(self) -> Dict[Symbol, List[str]]:
        """Map every internal symbol to the machines that emit it."""
        result: Dict[Symbol, List[str]] = {}
        for m in self.machines:
            for symbol in sorted(m.outputs()):
                result.setdefault(symbol, []).append(m.name)
        return result

    def initial_state(self) -> GlobalState:
        return tuple(m.initial_index for m in self.machines)


def make_system(machines: Iterable[Machine], declared_env: Optional[Iterable[Symbol]] = None) -> System:
    env = frozenset(declared_env) if declared_env is not None else None
    return System(tuple(machines), env)


def emit(system: System, g: GlobalState) -> FrozenSet[Symbol]:
    """Set union of the outputs of every component's current node."""
    result = set()
    for m, k in zip(system.machines, g):
        result |= m.graph.nodes[k].outputs
    return frozenset(result)


def state_names(system: System, g: GlobalState) -> List[str]:
    return [m.graph.nodes[k].name for m, k in zip(system.machines, g)]


def format_state(system: System, g: GlobalState) -> str:
    return '(' + ', '.join(state_names(system, g)) + ')'


# ==================== Enabling ====================

def fix_map(guard: Formula, received: FrozenSet[Symbol], env_free: FrozenSet[Symbol]) -> Dict[Symbol, bool]:
    return {s: s in received for s in support(guard) if s not in env_free}


def enabled_at(machine: Machine, node: int, received: FrozenSet[Symbol],
               env_free: FrozenSet[Symbol]) -> List[Tuple[int, Formula]]:
    """Enabled outgoing edges of a node as (edge index, residual guard) pairs.

    Non-free atoms are fixed closed-world (true iff received); an edge is kept
    iff its residual over the free atoms is satisfiable.
    """
    result = []
    for k in machine.outgoing[node]:
        guard = machine.graph.edges[k].guard
        residual = restrict(guard, fix_map(guard, received, env_free))
        if is_satisfiable(residual):
            result.append((k, residual))
    return result


def enabled_edges(m: Machine, at: str, received: Iterable[Symbol],
                  env_free: Iterable[Symbol] = ()) -> List[Tuple[Edge, Formula]]:
    """Enabled outgoing edges of node ``at`` with their residual guards.

    Raises:
        ModelError: If ``at`` is not a node of ``m``
    """
    node = m.node_ref(at)
    pairs = enabled_at(m, node, frozenset(received), frozenset(env_free))
    return [(m.graph.edges[k], residual) for k, residual in pairs]


# ==================== Validation ====================

@dataclass(frozen=True)
class Diagnostic:
    level: str  # 'error' or 'warning'
    message: str

    @property
    def is_error(self) -> bool:
        return self.level == 'error'

    def __str__(self):
        return f"{self.level}: {self.message}"


def _describe_assignment(symbols: Iterable[Symbol], present: FrozenSet[Symbol]) -> str:
    parts = [f"{s} {'present' if s in present else 'absent'}" for s in sorted(symbols)]
    return ', '.join(parts) if parts else 'always'


def _blocking_diagnostics(m: Machine) -> List[Diagnostic]:
    result = []
    for i, node in enumerate(m.graph.nodes):
        guards = [m.graph.edges[k].guard for k in m.outgoing[i]]
        if not guards:
            result.append(Diagnostic('warning', f"node {m.name}.{node.name} has no outgoing edges and always blocks"))
            continue
        cover = disjoin_all(guards)
        symbols = support(cover)
        for present in assignments(symbols):
            if not evaluate(cover, present):
                result.append(Diagnostic(
                    'warning',
                    f"node {m.name}.{node.name} may block when {_describe_assignment(symbols, present)}"))
                break
    return result


def reachable_nodes(m: Machine) -> FrozenSet[int]:
    """Nodes of ``m`` reachable from its initial node over satisfiable edges."""
    seen = {m.initial_index}
    queue = deque([m.initial_index])
    while queue:
        i = queue.popleft()
        for k in m.outgoing[i]:
            edge = m.graph.edges[k]
            j = m.node_index[edge.dst]
            if j not in seen and not is_unsatisfiable(edge.guard):
                seen.add(j)
                queue.append(j)
    return frozenset(seen)


def validate_system(s: System) -> List[Diagnostic]:
    """Static checks of a system.

    Errors: a symbol emitted by more than one machine; a declared environment
    alphabet that disagrees with the inferred one. Warnings: nodes whose
    outgoing guards are not total, symbols nobody reads, nodes unreachable
    within their own machine.
    """
    diagnostics: List[Diagnostic] = []

    for symbol, machines in s.producers().items():
        if len(machines) > 1:
            diagnostics.append(Diagnostic(
                'error', f"duplicate producer {symbol} (emitted by {', '.join(machines)})"))

    if s.declared_env is not None:
        producers = s.producers()
        for symbol in sorted(s.declared_env & s.internal_alphabet):
            diagnostics.append(Diagnostic(
                'error',
                f"symbol {symbol} is declared as environment input but produced by {', '.join(producers[symbol])}"))
        for symbol in sorted(s.environment_alphabet - s.declared_env):
            diagnostics.append(Diagnostic(
                'error', f"symbol {symbol} is read but neither produced nor declared as environment input"))
        read = set()
        for m in s.machines:
            read |= m.guard_symbols()
        for symbol in sorted(s.declared_env - s.internal_alphabet - read):
            diagnostics.append(Diagnostic(
                'error', f"declared environment symbol {symbol} does not occur in any guard"))

    read = set()
    for m in s.machines:
        read |= m.guard_symbols()
    for m in s.machines:
        for symbol in sorted(m.outputs() - read):
            diagnostics.append(Diagnostic('warning', f"symbol {symbol} is emitted by {m.name} but never read"))

    for m in s.machines:
        diagnostics.extend(_blocking_diagnostics(m))
        reached = reachable_nodes(m)
        for i, node in enumerate(m.graph.nodes):
            if i not in reached:
                diagnostics.append(Diagnostic(
                    'warning', f"node {m.name}.{node.name} is unreachable from initial node {m.initial}"))

    logger.debug("Validated system of %d machines: %d diagnostic(s)", len(s.machines), len(diagnostics))
    return diagnostics


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
