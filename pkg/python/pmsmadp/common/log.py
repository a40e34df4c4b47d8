"""Loglevels and the logging mixin shared by all pmsmadp components."""

import inspect
import logging
import sys
from enum import IntEnum

TRACE = 5
NOTE = 25

logging.addLevelName(NOTE, "NOTE")
logging.addLevelName(TRACE, "TRACE")

ROOT_LOGGER = 'pmsmadp'

class Loglevel(IntEnum):
    """Enumeration of the loglevels available in pmsmadp."""

    TRACE = 0
    DEBUG = 1
    INFO = 2
    NOTE = 3
    WARN = 4
    ERROR = 5
    FATAL = 6
    OFF = 7

    def to_logging(self):
        """Returns the severity used for this loglevel by Python's `logging`
        module. TRACE and NOTE map to the custom severities 5 and 25."""
        if self == Loglevel.TRACE:
            return TRACE
        elif self == Loglevel.DEBUG:
            return logging.DEBUG
        elif self == Loglevel.INFO:
            return logging.INFO
        elif self == Loglevel.NOTE:
            return NOTE
        elif self == Loglevel.WARN:
            return logging.WARNING
        elif self == Loglevel.ERROR:
            return logging.ERROR
        elif self == Loglevel.FATAL:
            return logging.CRITICAL
        return logging.CRITICAL + 10

    @classmethod
    def parse(cls, value):
        """Converts a loglevel name (case-insensitive) or a `Loglevel` to a
        `Loglevel`."""
        if isinstance(value, Loglevel):
            return value
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise ValueError("unknown loglevel {!r}".format(value))


class Loggable(object):
    """Mixin for components that log through Python's `logging` module.

    The logger name is `pmsmadp.<component>`, optionally followed by the
    instance name. Messages are formatted with `str.format()` when extra
    positional or keyword arguments are given, otherwise `str()` is applied.
    """

    _component = None

    def __init__(self, name=None):
        super().__init__()
        component = self._component or type(self).__name__.lower()
        logger_name = '{}.{}'.format(ROOT_LOGGER, component)
        if name:
            logger_name = '{}.{}'.format(logger_name, name)
        self._logger_name = logger_name

    @property
    def logger(self):
        """The `logging.Logger` used by this component."""
        return logging.getLogger(self._logger_name)

    def _log(self, level, msg, *args, **kwargs):
        logger = self.logger
        severity = level.to_logging()
        if not logger.isEnabledFor(severity):
            return
        msg = str(msg)
        if args or kwargs:
            msg = msg.format(*args, **kwargs)
        # Attribute the record to the caller of log()/info()/..., not to us.
        frame = inspect.currentframe().f_back.f_back
        rec = logger.makeRecord(
            logger.name, severity,
            frame.f_globals.get('__file__', '?'), frame.f_lineno,
            msg, (), None, frame.f_code.co_name)
        logger.handle(rec)

    def log(self, level, msg, *args, **kwargs):
        """Logs a message with the specified loglevel.

        If any additional positional or keyword arguments are specified, the
        message is formatted using `str.format()`. Otherwise, `str()` is
        applied to the message."""
        if not isinstance(level, Loglevel):
            raise TypeError('level must be a Loglevel')
        self._log(level, msg, *args, **kwargs)

    def trace(self, msg, *args, **kwargs):
        """Convenience function for logging trace messages. See `log()`."""
        self._log(Loglevel.TRACE, msg, *args, **kwargs)

    def debug(self, msg, *args, **kwargs):
        """Convenience function for logging debug messages. See `log()`."""
        self._log(Loglevel.DEBUG, msg, *args, **kwargs)

    def info(self, msg, *args, **kwargs):
        """Convenience function for logging info messages. See `log()`."""
        self._log(Loglevel.INFO, msg, *args, **kwargs)

    def note(self, msg, *args, **kwargs):
        """Convenience function for logging note messages. See `log()`."""
        self._log(Loglevel.NOTE, msg, *args, **kwargs)

    def warn(self, msg, *args, **kwargs):
        """Convenience function for logging warning messages. See `log()`."""
        self._log(Loglevel.WARN, msg, *args, **kwargs)

    def error(self, msg, *args, **kwargs):
        """Convenience function for logging error messages. See `log()`."""
        self._log(Loglevel.ERROR, msg, *args, **kwargs)

    def fatal(self, msg, *args, **kwargs):
        """Convenience function for logging fatal messages. See `log()`."""
        self._log(Loglevel.FATAL, msg, *args, **kwargs)

    warning = warn
    critical = fatal


_FORMAT = '%(asctime)s %(levelname)-5s %(name)s: %(message)s'

def configure_logging(stderr_verbosity=Loglevel.INFO, tee=None):
    """Configures the `pmsmadp` logger hierarchy.

    `stderr_verbosity` is the minimum `Loglevel` a message needs to be
    written to `stderr`. `tee` is an optional `{filename: Loglevel}`
    dictionary; every message passing the given filter is additionally
    written to that file. Previously installed handlers are replaced, so
    this can be called more than once."""
    stderr_verbosity = Loglevel.parse(stderr_verbosity)
    tee = dict(tee or {})
    for key, value in tee.items():
        if not isinstance(key, str):
            raise TypeError("tee file key must be a string")
        if not isinstance(value, Loglevel):
            raise TypeError("tee file value must be a Loglevel")

    root = logging.getLogger(ROOT_LOGGER)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(_FORMAT)
    levels = [stderr_verbosity.to_logging()]
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(stderr_verbosity.to_logging())
    handler.setFormatter(formatter)
    root.addHandler(handler)
    for filename, level in sorted(tee.items()):
        handler = logging.FileHandler(filename)
        handler.setLevel(level.to_logging())
        handler.setFormatter(formatter)
        root.addHandler(handler)
        levels.append(level.to_logging())
    root.setLevel(min(levels))
    root.propagate = False
    return root
