"""Shared fixtures and builders for the test suite."""

import itertools
import random

import pytest

from boolform import FALSE, TRUE, And, Atom, Not, Or, parse_formula
from csm_core import Clg, Edge, Node, make_machine, make_system
from product import FairnessSet, ProductEdge, ReachabilityGraph


def machine(name, nodes, edges, initial):
    """Build a machine from {node: [outputs]} and [(src, dst, guard text)]."""
    graph = Clg(tuple(Node(n, frozenset(out)) for n, out in nodes.items()),
                tuple(Edge(src, dst, parse_formula(guard)) for src, dst, guard in edges))
    return make_machine(name, graph, initial)


PROC2_NODES = {
    'Ni': [],
    'Take': ['getInpQ_2'],
    'Process': [],
    'Put': ['putOutQ_2'],
    'Wait': ['doneProc_2'],
}

PROC2_EDGES = [
    ('Ni', 'Ni', '!stProc_2'),
    ('Ni', 'Take', 'stProc_2'),
    ('Take', 'Process', '1'),
    ('Process', 'Process', '1'),
    ('Process', 'Put', '1'),
    ('Put', 'Wait', '1'),
    ('Wait', 'Wait', '!relProc_2'),
    ('Wait', 'Ni', 'relProc_2'),
]


@pytest.fixture
def proc2():
    return machine('Proc_2', PROC2_NODES, PROC2_EDGES, 'Ni')


@pytest.fixture
def proc2_system(proc2):
    return make_system([proc2])


@pytest.fixture
def producer_consumer():
    """P emits x in p1; Q moves to q1 on x."""
    p = machine('P', {'p0': [], 'p1': ['x']}, [('p0', 'p1', '1'), ('p1', 'p1', '1')], 'p0')
    q = machine('Q', {'q0': [], 'q1': []}, [('q0', 'q1', 'x'), ('q0', 'q0', '!x'), ('q1', 'q1', '1')], 'q0')
    return make_system([p, q])


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    path = tmp_path / 'settings.json'
    monkeypatch.setenv('CSMCHECK_SETTINGS', str(path))
    return path


def kripke(n, arcs, labels=None, fairness=()):
    """A reachability graph over a one-machine system with states s0..s<n-1>.

    Args:
        n: Number of states
        arcs: (src, dst) pairs; arc k becomes product edge k
        labels: {state: [symbols emitted there]}
        fairness: Iterables of blocked edge indices, one per fairness set
    """
    labels = labels or {}
    nodes = {f"s{i}": labels.get(i, []) for i in range(n)}
    m = machine('K', nodes, [(f"s{a}", f"s{b}", '1') for a, b in arcs], 's0')
    system = make_system([m])
    edges = tuple(ProductEdge(a, b, TRUE, (k,)) for k, (a, b) in enumerate(arcs))
    sets = tuple(FairnessSet(0, j, ('K', f"f{j}"), frozenset(blocked)) for j, blocked in enumerate(fairness))
    return ReachabilityGraph(system, tuple((i,) for i in range(n)), 0, edges, sets, (n,))


def random_kripke(rng: random.Random, max_states=64, symbols=('p', 'q'), fairness_sets=0):
    """Random left-total graph; every state has at least one successor."""
    n = rng.randint(1, max_states)
    arcs = []
    for i in range(n):
        for _ in range(rng.randint(1, 3)):
            arcs.append((i, rng.randrange(n)))
    labels = {i: [s for s in symbols if rng.random() < 0.4] for i in range(n)}
    fairness = []
    for _ in range(fairness_sets):
        fairness.append({k for k in range(len(arcs)) if rng.random() < 0.5})
    return kripke(n, arcs, labels, fairness)


def all_subsets(items):
    items = sorted(items)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def random_formula(rng: random.Random, atoms, depth=3):
    """Random guard over ``atoms``, constants included."""
    if depth == 0 or rng.random() < 0.25:
        choice = rng.random()
        if choice < 0.1:
            return TRUE
        if choice < 0.2:
            return FALSE
        return Atom(rng.choice(atoms))
    kind = rng.choice(('not', 'and', 'or'))
    if kind == 'not':
        return Not(random_formula(rng, atoms, depth - 1))
    left = random_formula(rng, atoms, depth - 1)
    right = random_formula(rng, atoms, depth - 1)
    return And(left, right) if kind == 'and' else Or(left, right)


def random_system(rng: random.Random, env_symbols=('e0', 'e1')):
    """1 to 3 machines of 1 to 4 nodes; each machine owns its output symbols."""
    count = rng.randint(1, 3)
    owned = [[f"m{i}x{j}" for j in range(2)] for i in range(count)]
    pool = [s for symbols in owned for s in symbols] + list(env_symbols)
    machines = []
    for i in range(count):
        names = [f"n{j}" for j in range(rng.randint(1, 4))]
        nodes = tuple(Node(n, frozenset(s for s in owned[i] if rng.random() < 0.3)) for n in names)
        edges = tuple(Edge(n, rng.choice(names), random_formula(rng, pool, depth=2))
                      for n in names for _ in range(rng.randint(0, 3)))
        machines.append(make_machine(f"M{i}", Clg(nodes, edges), names[0]))
    return make_system(machines)
