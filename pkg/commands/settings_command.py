"""Settings sub-command."""

import settings


class SettingsCommand:
    """Shows and updates the stored settings."""

    name = 'settings'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='show or change stored settings')
        parser.add_argument('--set', metavar='KEY=VALUE', action='append', default=[],
                            help='change a setting (may be repeated)')
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        status = 0
        for assignment in args.set:
            success, message = settings.set_value(assignment)
            print(message, file=out if success else err)
            if not success:
                status = 2
        if not args.set:
            print(f"Settings file: {settings.settings_path()}", file=out)
            for key, value in settings.load_settings().items():
                print(f"  {key}: {value!r}", file=out)
        return status
