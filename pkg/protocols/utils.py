"""
Utility functions for the protocol commands.

This module maps domain exceptions onto command exit codes and times
protocol runs so that slow ones show up in the log.
"""

import logging
import time

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from hilbert.exceptions import ConfigError, DrivenQEDError, NumericalGuardError

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def command_exception_handler(exc, command):
    """
    Translate an exception raised by a command into a CommandError.

    Args:
        exc: The exception that was raised
        command: Name of the command in which it occurred

    Returns:
        CommandError: carrying the exit code (2 config, 3 numerical guard, 4 I/O),
        or None when the exception is not a known failure
    """
    if isinstance(exc, (ConfigError, ValidationError)):
        returncode = EXIT_CONFIG
    elif isinstance(exc, NumericalGuardError):
        returncode = EXIT_NUMERICAL
    elif isinstance(exc, OSError):
        returncode = EXIT_IO
    elif isinstance(exc, (DrivenQEDError, ValueError)):
        # Layout and regime problems are configuration problems from the command's side.
        returncode = EXIT_CONFIG
    else:
        return None

    logger.error(f"Command Exception: {type(exc).__name__}: {exc} in {command}")
    return CommandError(f"{type(exc).__name__}: {exc}", returncode=returncode)


def slow_run_threshold():
    return float(getattr(settings, 'DRIVENQED_SLOW_RUN_SECONDS', 5.0))


class RunTimer:
    """
    Context manager for monitoring run time.

    Runs longer than DRIVENQED_SLOW_RUN_SECONDS are logged as warnings.
    """

    def __init__(self, label):
        self.label = label
        self.elapsed = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, traceback):
        self.elapsed = time.perf_counter() - self.start_time
        if exc_type is not None:
            logger.error(f"Failed: {self.label} - Error: {exc} - Time: {self.elapsed:.3f}s")
        elif self.elapsed > slow_run_threshold():
            logger.warning(f"Slow Run: {self.label} - Time: {self.elapsed:.3f}s")
        else:
            logger.debug(f"Run: {self.label} - Time: {self.elapsed:.3f}s")
        return False


class DrivenQEDCommand(BaseCommand):
    """
    Base class for the drivenqed management commands.

    Known failures leave through command_exception_handler with their exit code.
    """

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except CommandError:
            raise
        except Exception as exc:
            error = command_exception_handler(exc, self.__module__.rsplit('.', 1)[-1])
            if error is None:
                raise
            raise error from exc
