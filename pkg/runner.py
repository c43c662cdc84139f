"""
Verification runs

Validates the systems a list of checks refers to, builds each product once
and evaluates the checks, possibly in a thread pool, into a RunReport.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

from csm_core import System, has_errors, validate_system
from ctl import (
    AG, CtlFormula, check, check_on_the_fly, is_state_formula, parse_ctl, print_ctl, validate_trace,
)
from modelfmt import CheckSpec, ModelFile
from product import ReachabilityGraph, build_product, stats
from report import CheckOutcome, RunReport, render_trace

logger = logging.getLogger(__name__)


class UsageError(ValueError):
    """Options that cannot be combined for the requested checks."""


def on_the_fly_applicable(f: CtlFormula, fair: bool) -> bool:
    """On-the-fly evaluation covers a fairness-free AG of a state predicate."""
    return isinstance(f, AG) and is_state_formula(f.arg) and not fair


@dataclass
class _Job:
    spec: CheckSpec
    formula: CtlFormula
    fair: bool
    on_the_fly: bool
    system: System
    graph: Optional[ReachabilityGraph]


def run_checks(model: ModelFile, checks: Iterable[CheckSpec], source: str = '', fair: bool = False,
               want_witness: bool = False, on_the_fly: bool = False, allow_deadlock: bool = False,
               max_states: Optional[int] = None, max_edges: Optional[int] = None, workers: int = 1,
               extra_systems: Iterable[str] = ()) -> RunReport:
    """Evaluate checks against the systems of a model.

    Args:
        model: Parsed model
        checks: Checks to evaluate, in report order
        source: Model path shown in the report
        fair: Force fair semantics for every check
        want_witness: Attach rendered witnesses and counterexamples
        on_the_fly: Evaluate eligible AG checks during exploration
        allow_deadlock: Patch deadlock states with stutter loops
        max_states: Product state cap
        max_edges: Product edge cap
        workers: Thread-pool size for independent checks
        extra_systems: Systems whose product statistics are reported without checks

    Returns:
        RunReport; when validation finds errors no check is evaluated
    """
    checks = list(checks)
    report = RunReport(source)
    names: List[str] = []
    for name in [c.system for c in checks] + list(extra_systems):
        if name not in names:
            names.append(name)

    systems: Dict[str, System] = {}
    for name in names:
        systems[name] = model.system(name)
        diagnostics = validate_system(systems[name])
        report.diagnostics.extend(f"{name}: {d}" for d in diagnostics)
        report.validation_errors += sum(1 for d in diagnostics if d.is_error)
        if has_errors(diagnostics):
            logger.error("System %s has validation errors, checks are skipped", name)
    if report.validation_errors:
        return report

    jobs = []
    for spec in checks:
        formula = parse_ctl(spec.formula)
        check_fair = spec.fair or fair
        fly = on_the_fly and on_the_fly_applicable(formula, check_fair)
        jobs.append(_Job(spec, formula, check_fair, fly, systems[spec.system], None))

    graphs: Dict[str, ReachabilityGraph] = {}
    needed = [j.spec.system for j in jobs if not j.on_the_fly] + list(extra_systems)
    for name in names:
        if name in needed:
            start = time.perf_counter()
            graphs[name] = build_product(systems[name], max_states, max_edges)
            report.products[name] = stats(graphs[name])
            report.layers[name] = graphs[name].layers
            logger.info("Built product of %s in %.2f s", name, time.perf_counter() - start)
    for job in jobs:
        job.graph = graphs.get(job.spec.system)

    def evaluate(job: _Job) -> CheckOutcome:
        start = time.perf_counter()
        if job.on_the_fly:
            result = check_on_the_fly(job.system, job.formula.arg, max_states, max_edges,
                                      allow_deadlock)
        else:
            result = check(job.graph, job.formula, job.fair, allow_deadlock, want_witness)
        outcome = CheckOutcome(job.spec.system, print_ctl(job.formula), job.fair, result.holds_at_initial,
                               job.spec.expect, time.perf_counter() - start, job.on_the_fly,
                               result.complete, result.explored_states, result.explored_layers,
                               notes=list(result.notes))
        if on_the_fly and not job.on_the_fly:
            outcome.notes.append('on-the-fly evaluation does not apply, the full product was used')
        if want_witness and result.witness is not None:
            outcome.witness_kind = result.witness.kind
            outcome.witness_text = render_trace(result.graph, result.witness)
            outcome.witness_valid = validate_trace(result.graph, result.witness, result.fair)
        return outcome

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        report.outcomes = list(executor.map(evaluate, jobs))
    return report


def require_on_the_fly(text: str, fair: bool) -> None:
    """Reject a single formula that cannot be evaluated on the fly."""
    if not on_the_fly_applicable(parse_ctl(text), fair):
        raise UsageError("--on-the-fly needs a formula of the form AG p with a state predicate p "
                         "and no fairness")
