# =============================================================================
# nfadlab
#
# LOGGING SUB-MODULE
# =============================================================================

"""
Two log sinks: short colored messages on the console, and the structured
`eliot` run log (actions of every simulation and experiment, plus a copy of
the console messages) appended to a JSON-lines file.
"""

# Python stdlib imports
import logging as _logging
import os as _os
import platform as _platform
import sys as _sys

# External imports
import eliot
import eliot.stdlib

# Re-exported for the submodules
from eliot import start_action

# =============================================================================

# Global submodule constants
LOG_FILE_ENV = "NFADLAB_LOG_FILE"
LOG_LEVEL_ENV = "LOGLEVEL"
DEFAULT_LOG_FILE = "nfadlab.log"
DEFAULT_SCOPE = "nfadlab"

# Global submodule protected attributes
_run_log = None
_run_log_opened = False
_eliot_on_stdout = False
_console_handlers = {}

# =============================================================================

class _ConsoleHandler(_logging.StreamHandler):
    """
    Console handler that falls silent once the `eliot` log is mirrored to
    standard output, so that messages are not printed twice.
    """

    def emit(self, record):
        if not _eliot_on_stdout:
            super(_ConsoleHandler, self).emit(record)


class _ColorFormatter(_logging.Formatter):
    """
    One line per message: a colored level caption, the emitting module and
    its source location relative to the working directory.
    """

    CAPTIONS = [
        ("DEBUG", "blue", "DBUG"),
        ("INFO", "green", "INFO"),
        ("WARNING", "yellow", "WARN"),
        ("ERROR", "red", "ERR."),
    ]

    def __init__(self, *args, **kwargs):
        import blessings as _blessings
        term = _blessings.Terminal()
        self._captions = {
            level: "{}[{}{}{}]".format(
                term.normal, term.bold + getattr(term, color), text, term.normal)
            for (level, color, text) in self.CAPTIONS
        }
        super(_ColorFormatter, self).__init__(*args, **kwargs)

    @staticmethod
    def relative_path(path):
        # type: (str) -> str
        return _os.path.abspath(path).replace(_os.getcwd(), ".", 1)

    def formatMessage(self, record):
        # type: (_logging.LogRecord) -> str
        caption = self._captions.get(record.levelname, self._captions["INFO"])
        return "{} {} (\"{}\", line {}): {}".format(
            caption, record.module, self.relative_path(record.filename),
            record.lineno, record.message)

# =============================================================================

def log_file_path():
    # type: () -> str
    """
    Path of the structured run log; `NFADLAB_LOG_FILE` overrides the default.
    """
    return _os.environ.get(LOG_FILE_ENV, DEFAULT_LOG_FILE)


def _open_run_log():
    # type: () -> None
    global _run_log, _run_log_opened

    if _run_log_opened:
        return
    _run_log_opened = True
    try:
        _run_log = open(log_file_path(), "ab")
    except (IOError, OSError):
        # Read-only working directory: console only
        _run_log = None
        return
    eliot.to_file(_run_log)


def get_logger(name=None):
    # type: (str) -> _logging.Logger
    """
    Logger `name` (the package scope by default), given a console handler
    at the `LOGLEVEL` level and an `eliot` handler the first time it is
    requested.
    """
    name = name or DEFAULT_SCOPE
    logger = _logging.getLogger(name)
    if name in _console_handlers:
        return logger

    console = _ConsoleHandler()
    if _platform.system() != "Windows":
        console.setFormatter(_ColorFormatter())
    console.setLevel(_os.environ.get(LOG_LEVEL_ENV, "INFO"))

    structured = eliot.stdlib.EliotHandler()
    structured.setLevel("DEBUG")

    logger.setLevel("DEBUG")
    logger.addHandler(console)
    logger.addHandler(structured)
    logger.propagate = False

    _console_handlers[name] = console
    _open_run_log()
    return logger


def set_console_level(level):
    # type: (str) -> None
    """
    Change the console verbosity of every logger handed out so far.
    """
    for handler in _console_handlers.values():
        handler.setLevel(level)


def make_verbose():
    # type: () -> bool
    """
    Mirror the full `eliot` log to standard output, replacing the console
    messages.
    """
    global _eliot_on_stdout

    if not _eliot_on_stdout:
        _eliot_on_stdout = True
        eliot.to_file(_sys.stdout)
    return _eliot_on_stdout

# =============================================================================
