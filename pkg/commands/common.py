"""Helpers shared by the sub-command managers."""

import os
import sys

from csm_core import System, has_errors, validate_system
from report import RunReport, export_report_excel, export_report_html, export_report_json
import settings


def add_cap_arguments(parser):
    parser.add_argument('--max-states', type=int, default=None,
                        help='product state cap (default: max_states setting)')
    parser.add_argument('--max-edges', type=int, default=None,
                        help='product edge cap (default: max_edges setting)')


def caps(args):
    """Return (max_states, max_edges) from the flags or the stored settings."""
    max_states = args.max_states if args.max_states is not None else settings.get_max_states()
    max_edges = args.max_edges if args.max_edges is not None else settings.get_max_edges()
    return max_states, max_edges


def report_invalid(name: str, system: System, err) -> bool:
    """Print the validation errors of a system; returns True if there were any."""
    diagnostics = validate_system(system)
    if not has_errors(diagnostics):
        return False
    for d in diagnostics:
        if d.is_error:
            print(f"{name}: {d}", file=err)
    return True


def add_export_arguments(parser):
    parser.add_argument('--json', metavar='PATH', help='write the report as JSON')
    parser.add_argument('--excel', metavar='PATH', help='write the report as an Excel workbook')
    parser.add_argument('--html', metavar='PATH', help='write the report as HTML')


def report_path(path):
    """Place relative export paths in the configured report directory."""
    directory = settings.get_report_directory()
    if directory and not os.path.isabs(path):
        return os.path.join(directory, path)
    return path


def export_all(args, report: RunReport, err=None) -> bool:
    """Write every requested export; returns False if one of them failed."""
    err = err or sys.stderr
    ok = True
    for path, exporter in ((getattr(args, 'json', None), export_report_json),
                           (getattr(args, 'excel', None), export_report_excel),
                           (getattr(args, 'html', None), export_report_html)):
        if not path:
            continue
        success, message = exporter(report, report_path(path))
        print(message, file=err)
        ok = ok and success
    return ok
