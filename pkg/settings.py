import json
import os

SETTINGS_FILE = 'settings.json'

DEFAULT_SETTINGS = {
    'max_states': 200000,
    'max_edges': 2000000,
    'workers': 1,
    'log_level': 'WARNING',
    'report_directory': ''
}

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


def settings_path():
    """Path of the settings file; CSMCHECK_SETTINGS overrides the default."""
    return os.environ.get('CSMCHECK_SETTINGS') or SETTINGS_FILE


def load_settings():
    """Load settings from file, create with defaults if file doesn't exist."""
    path = settings_path()
    if os.path.exists(path):
        try:
            with open(path, 'r') as f:
                stored = json.load(f)
            merged = DEFAULT_SETTINGS.copy()
            merged.update(stored)
            return merged
        except (json.JSONDecodeError, IOError):
            return DEFAULT_SETTINGS.copy()
    # Create file with defaults if it doesn't exist
    save_settings(DEFAULT_SETTINGS)
    return DEFAULT_SETTINGS.copy()


def save_settings(settings):
    """Save settings to file."""
    try:
        with open(settings_path(), 'w') as f:
            json.dump(settings, f, indent=4)
    except IOError:
        pass


def _set(key, value):
    settings = load_settings()
    settings[key] = value
    save_settings(settings)


def _positive_int(key, value):
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{key} must be an integer, got {value!r}") from None
    if number < 1:
        raise ValueError(f"{key} must be at least 1, got {number}")
    return number


def get_max_states():
    """Get the product state cap."""
    return load_settings()['max_states']


def set_max_states(value):
    """Set the product state cap."""
    _set('max_states', _positive_int('max_states', value))


def get_max_edges():
    """Get the product edge cap."""
    return load_settings()['max_edges']


def set_max_edges(value):
    """Set the product edge cap."""
    _set('max_edges', _positive_int('max_edges', value))


def get_workers():
    """Get the thread-pool size used for independent checks."""
    return load_settings()['workers']


def set_workers(value):
    """Set the thread-pool size used for independent checks."""
    _set('workers', _positive_int('workers', value))


def get_log_level():
    """Get the logging level name."""
    return load_settings()['log_level']


def set_log_level(value):
    """Set the logging level name."""
    level = str(value).upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}, got {value!r}")
    _set('log_level', level)


def get_report_directory():
    """Get the default directory for exported reports.

    Returns:
        Directory path, '' meaning the working directory
    """
    return load_settings()['report_directory']


def set_report_directory(path):
    """Set the default directory for exported reports."""
    _set('report_directory', str(path))


SETTERS = {
    'max_states': set_max_states,
    'max_edges': set_max_edges,
    'workers': set_workers,
    'log_level': set_log_level,
    'report_directory': set_report_directory,
}


def set_value(assignment):
    """Apply a KEY=VALUE assignment.

    Returns:
        Tuple of (success, message)
    """
    key, sep, value = assignment.partition('=')
    key = key.strip()
    if not sep:
        return False, f"Expected KEY=VALUE, got '{assignment}'"
    if key not in SETTERS:
        return False, f"Unknown setting '{key}' (known: {', '.join(SETTERS)})"
    try:
        SETTERS[key](value.strip())
    except ValueError as e:
        return False, f"Failed to set {key}: {str(e)}"
    return True, f"{key} = {load_settings()[key]}"
