"""Session sub-command."""

from casestudy import run_verification_session
from report import render_report
import settings

from .common import add_cap_arguments, add_export_arguments, caps, export_all


class SessionCommand:
    """Runs the shipped pipeline verification session."""

    name = 'session'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='verify the shipped pipeline case study')
        parser.add_argument('--no-timing', action='store_true', help='leave timings out of the text report')
        add_cap_arguments(parser)
        add_export_arguments(parser)
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        max_states, max_edges = caps(args)
        report = run_verification_session(max_states, max_edges, settings.get_workers())
        print(render_report(report, timing=not args.no_timing), file=out)
        if not export_all(args, report, err):
            return 2
        return report.exit_code
