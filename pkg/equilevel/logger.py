# logger.py
# Verification log: file loads, computation steps, check outcomes, corrections and errors

import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

LOGGER_NAME = "equilevel"

FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CONSOLE_FORMAT = "%(levelname)s - %(message)s"


def _dump(details: Dict[str, Any]) -> str:
    return json.dumps(details, indent=2, default=str, sort_keys=True)


class VerificationLogger:
    """Logger shared by the loaders, the homology routines and the CLI."""

    def __init__(self,
                 log_dir: Optional[str] = None,
                 log_level: Union[int, str] = logging.WARNING,
                 console_output: bool = True):
        """Attach handlers to the package logger, replacing any earlier ones.

        Args:
            log_dir: Directory for a timestamped verification_*.log (none when None)
            log_level: Level name or number
            console_output: Echo records to stderr
        """
        if isinstance(log_level, str):
            log_level = logging.getLevelName(log_level.upper())
        self.log_level = log_level
        self.log_dir = Path(log_dir) if log_dir else None

        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(log_level)
        self.logger.propagate = False

        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            to_file = logging.FileHandler(self.log_dir / f"verification_{stamp}.log")
            to_file.setFormatter(logging.Formatter(FILE_FORMAT))
            self.logger.addHandler(to_file)

        # stdout is reserved for reports
        if console_output:
            to_stderr = logging.StreamHandler(sys.stderr)
            to_stderr.setFormatter(logging.Formatter(CONSOLE_FORMAT))
            self.logger.addHandler(to_stderr)

        if not self.logger.handlers:
            self.logger.addHandler(logging.NullHandler())

    def log_step(self, step: str, details: Optional[str] = None) -> None:
        """Record the start of a computation such as a rank sweep or an E1 page."""
        self.logger.info(f"Computing {step}")
        if details:
            self.logger.debug(f"{step}: {details}")

    def log_load(self, source: str, status: str, details: Optional[str] = None) -> None:
        """Record a complex or chain file being read.

        Args:
            source: Path or builtin reference
            status: 'reading', 'parsed' and so on
            details: Summary of what was loaded
        """
        self.logger.info(f"Load {source}: {status}")
        if details:
            self.logger.debug(f"Loaded from {source}: {details}")

    def log_check(self, check_name: str, passed: bool, details: Optional[Dict[str, Any]] = None) -> None:
        """Record the outcome of a verification check.

        Failed checks log at WARNING so they reach the console at the default level.

        Args:
            check_name: e.g. 'validate CD3'
            passed: Outcome
            details: Counts or witnesses, logged at DEBUG
        """
        if passed:
            self.logger.info(f"Check passed: {check_name}")
        else:
            self.logger.warning(f"Check failed: {check_name}")
        if details:
            self.logger.debug(f"Check details: {_dump(details)}")

    def log_correction(self, subject: str, detail: str) -> None:
        self.logger.info(f"Correction on {subject}: {detail}")

    def log_error(self, error_type: str, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        self.logger.error(f"{error_type}: {message}")
        if details:
            self.logger.error(f"{error_type} context: {_dump(details)}")


default_logger = VerificationLogger()


def configure_logging(settings: Optional[Dict[str, Any]] = None,
                      log_dir: Optional[str] = None,
                      verbose: bool = False) -> VerificationLogger:
    """Rebuild the default logger from the `logging` configuration section.

    Args:
        settings: The `logging` section of system.yml
        log_dir: Overrides settings['log_dir']
        verbose: Forces DEBUG level

    Returns:
        The new default logger
    """
    global default_logger
    settings = settings or {}
    level = "DEBUG" if verbose else settings.get("level", "WARNING")
    default_logger = VerificationLogger(
        log_dir=log_dir or settings.get("log_dir"),
        log_level=level,
        console_output=settings.get("console_output", True),
    )
    return default_logger


# Module-level shortcuts to the current default logger
def log_step(step: str, details: Optional[str] = None) -> None:
    default_logger.log_step(step, details)

def log_load(source: str, status: str, details: Optional[str] = None) -> None:
    default_logger.log_load(source, status, details)

def log_check(check_name: str, passed: bool, details: Optional[Dict[str, Any]] = None) -> None:
    default_logger.log_check(check_name, passed, details)

def log_correction(subject: str, detail: str) -> None:
    default_logger.log_correction(subject, detail)

def log_error(error_type: str, message: str, details: Optional[Dict[str, Any]] = None) -> None:
    default_logger.log_error(error_type, message, details)
