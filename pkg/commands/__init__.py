"""Sub-command managers for the command-line checker."""

from .validate_command import ValidateCommand
from .product_command import ProductCommand
from .check_command import CheckCommand
from .session_command import SessionCommand
from .dot_command import DotCommand
from .settings_command import SettingsCommand

__all__ = [
    'ValidateCommand',
    'ProductCommand',
    'CheckCommand',
    'SessionCommand',
    'DotCommand',
    'SettingsCommand',
]
