"""Validate sub-command."""

import logging

from csm_core import validate_system
from modelfmt import load_model

logger = logging.getLogger(__name__)


class ValidateCommand:
    """Runs the static checks on the systems of a model file."""

    name = 'validate'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='run static checks on a model file')
        parser.add_argument('file', help='model file (*.csm)')
        parser.add_argument('--system', help='validate only this system')
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        model = load_model(args.file)
        names = [args.system] if args.system else list(model.systems)
        errors = warnings = 0
        for name in names:
            for d in validate_system(model.system(name)):
                print(f"{name}: {d}", file=out)
                if d.is_error:
                    errors += 1
                else:
                    warnings += 1
        if not names:
            print('The model defines no systems', file=out)
        print(f"{errors} errors, {warnings} warnings", file=out)
        return 1 if errors else 0
