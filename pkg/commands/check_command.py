"""Check sub-command."""

import logging

from modelfmt import CheckSpec, load_model
from report import render_report
from runner import UsageError, require_on_the_fly, run_checks
import settings

from .common import add_cap_arguments, add_export_arguments, caps, export_all

logger = logging.getLogger(__name__)


class CheckCommand:
    """Evaluates CTL formulas given on the command line or embedded in the model."""

    name = 'check'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='model check CTL formulas')
        parser.add_argument('file', help='model file (*.csm)')
        parser.add_argument('--checks', metavar='FILE', help='file with additional check lines')
        parser.add_argument('--system', help='system to check')
        parser.add_argument('--formula', help='formula to check instead of the check lines')
        parser.add_argument('--fair', action='store_true', help='restrict path quantifiers to fair paths')
        parser.add_argument('--witness', action='store_true', help='print witnesses and counterexamples')
        parser.add_argument('--on-the-fly', action='store_true',
                            help='evaluate AG p during exploration and stop at the first violation')
        parser.add_argument('--allow-deadlock', action='store_true',
                            help='add stutter loops to deadlock states instead of failing')
        parser.add_argument('--workers', type=int, default=None,
                            help='threads for independent checks (default: workers setting)')
        parser.add_argument('--no-timing', action='store_true', help='leave timings out of the text report')
        add_cap_arguments(parser)
        add_export_arguments(parser)
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        model = load_model(args.file, args.checks)
        if args.formula:
            system = args.system or model.default_system()
            if args.on_the_fly:
                require_on_the_fly(args.formula, args.fair)
            checks = [CheckSpec(system, args.formula, args.fair)]
        else:
            checks = [c for c in model.checks if not args.system or c.system == args.system]
            if not checks:
                raise UsageError('Nothing to check: give --formula or add check lines to the model')

        max_states, max_edges = caps(args)
        workers = args.workers if args.workers is not None else settings.get_workers()
        report = run_checks(model, checks, source=args.file, fair=args.fair, want_witness=args.witness,
                            on_the_fly=args.on_the_fly, allow_deadlock=args.allow_deadlock,
                            max_states=max_states, max_edges=max_edges, workers=workers)
        for d in report.diagnostics:
            print(d, file=err)
        print(render_report(report, timing=not args.no_timing), file=out)
        if not export_all(args, report, err):
            return 2
        return report.exit_code
