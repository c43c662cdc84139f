"""
Pipeline case study

Three processing modules in a row, fed by a message source and drained by
a sink, two of them sharing a resource through an arbiter. The model lives
in models/pipeline.csm; this module loads it, builds the message-counting
observer for any capacity and runs the standard verification session.
"""

import logging
import os
from typing import Optional

from boolform import parse_formula
from csm_core import Clg, Edge, Machine, Node, make_machine
from modelfmt import CheckSpec, ModelFile, load_model
from report import RunReport
from runner import run_checks

logger = logging.getLogger(__name__)

MODELS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'models')
PIPELINE_MODEL = os.path.join(MODELS_DIR, 'pipeline.csm')
PIPELINE_CHECKS = os.path.join(MODELS_DIR, 'pipeline.checks')

PIPELINE_SYSTEM = 'Pipeline'
OBSERVED_SYSTEM = 'PipelineObs'

# (formula, fair) evaluated by run_verification_session
SESSION_CHECKS = [
    ('AG !in(Invariant.Error)', False),
    ('AG AF in(Invariant.s0)', True),
    ('AG AF in(Invariant.s3)', True),
]


def build_pipeline_model(with_checks: bool = True) -> ModelFile:
    """Load the shipped pipeline model, with its verification script merged in."""
    return load_model(PIPELINE_MODEL, PIPELINE_CHECKS if with_checks else None)


def build_invariant(capacity: int = 3, name: str = 'Invariant') -> Machine:
    """Silent observer counting the messages inside the pipeline.

    Nodes s0..s<capacity> hold the count; msg_1 alone increments it, msg_4
    alone decrements it, both together leave it unchanged. Going above the
    capacity or retrieving from an empty pipeline leads to the absorbing
    Error node.

    Args:
        capacity: Largest legal message count
        name: Machine name

    Returns:
        The observer machine
    """
    if capacity < 1:
        raise ValueError(f"Invariant capacity must be at least 1, got {capacity}")
    counts = [f"s{k}" for k in range(capacity + 1)]
    nodes = tuple(Node(n) for n in counts) + (Node('Error'),)
    edges = [
        ('s0', 's0', '!msg_1*!msg_4'),
        ('s0', 's1', 'msg_1*!msg_4'),
        ('s0', 'Error', 'msg_4'),
    ]
    for k in range(1, capacity + 1):
        here = counts[k]
        above = counts[k + 1] if k < capacity else 'Error'
        edges += [
            (here, here, '!msg_1*!msg_4 + msg_1*msg_4'),
            (here, above, 'msg_1*!msg_4'),
            (here, counts[k - 1], 'msg_4*!msg_1'),
        ]
    edges.append(('Error', 'Error', '1'))
    graph = Clg(nodes, tuple(Edge(src, dst, parse_formula(guard)) for src, dst, guard in edges))
    return make_machine(name, graph, 's0')


def run_verification_session(max_states: Optional[int] = None, max_edges: Optional[int] = None,
                             workers: int = 1) -> RunReport:
    """Check the pipeline for message conservation and for recurring empty and full states.

    Product statistics are reported both with and without the observer.
    """
    model = build_pipeline_model(with_checks=False)
    checks = [CheckSpec(OBSERVED_SYSTEM, formula, fair) for formula, fair in SESSION_CHECKS]
    report = run_checks(model, checks, source=PIPELINE_MODEL, want_witness=True,
                        max_states=max_states, max_edges=max_edges, workers=workers,
                        extra_systems=[PIPELINE_SYSTEM])
    logger.info("Session finished: %d check(s)", len(report.outcomes))
    return report
