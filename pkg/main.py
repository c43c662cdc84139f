"""
CSM model checker

Command-line front end: validates models, builds reachability graphs,
checks CTL properties and exports reports.
"""

import argparse
import logging
import sys

from boolform import FormulaSyntaxError
from commands import (
    CheckCommand, DotCommand, ProductCommand, SessionCommand, SettingsCommand, ValidateCommand,
)
from csm_core import ModelError
from ctl import CtlSyntaxError, DeadlockError, UnresolvedReference, UnsupportedWitness
from modelfmt import ModelSyntaxError
from product import ProductLimitExceeded
from runner import UsageError
import settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_DEADLOCK = 4
EXIT_INTERNAL = 5

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def build_parser():
    parser = argparse.ArgumentParser(
        prog='csmcheck',
        description='Explicit-state model checker for systems of concurrent state machines.')
    parser.add_argument('-v', '--verbose', action='store_true', help='log at DEBUG level')
    parser.add_argument('--log-level', choices=settings.LOG_LEVELS, help='logging level')
    subparsers = parser.add_subparsers(title='commands', dest='command_name', required=True)
    for manager in (ValidateCommand, ProductCommand, CheckCommand, SessionCommand, DotCommand,
                    SettingsCommand):
        manager(subparsers)
    return parser


def configure_logging(args, stream=None):
    if args.verbose:
        level = 'DEBUG'
    else:
        level = args.log_level or settings.get_log_level()
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))


def run(argv=None, out=None, err=None) -> int:
    """Run one command and map failures to exit codes.

    Returns:
        0 ok, 1 validation, 2 input or parse, 3 resource cap, 4 deadlock, 5 internal
    """
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args, err)
    try:
        return args.command.run(args, out, err)
    except ProductLimitExceeded as e:
        print(f"Error: {str(e)}", file=err)
        partial = ', '.join(f"{k}={v}" for k, v in e.partial.items())
        print(f"Partial statistics: {partial}", file=err)
        return EXIT_CAP
    except DeadlockError as e:
        print(f"Error: {str(e)}", file=err)
        return EXIT_DEADLOCK
    except UnsupportedWitness as e:
        print(f"Error: {str(e)}", file=err)
        return EXIT_INTERNAL
    except (FormulaSyntaxError, CtlSyntaxError, ModelSyntaxError, UnresolvedReference, UsageError) as e:
        print(f"Error: {str(e)}", file=err)
        return EXIT_INPUT
    except ModelError as e:
        print(f"Error: {str(e)}", file=err)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"Error: Failed to read input: {str(e)}", file=err)
        return EXIT_INPUT
    except Exception as e:
        logger.exception("Internal error")
        print(f"Error: {str(e)}", file=err)
        return EXIT_INTERNAL


def main():
    """Main entry point for the application."""
    sys.exit(run())


if __name__ == '__main__':
    main()
