"""
Logging for the BLDL toolkit

Everything logs under the "BLDL" logger. Modules take a child such as
"BLDL.solver" from get_logger, so a run log shows which stage spoke.
The console shows INFO and up; the optional rotating file keeps DEBUG,
which includes the per-iteration solver lines.
"""
import logging
import logging.handlers
from pathlib import Path
from typing import Optional, Union

from config.settings import config
from src.error_handling.exceptions import InvalidConfig

ROOT_NAME = "BLDL"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5


def parse_level(level: Union[str, int]) -> int:
    """Level name or number to a logging level"""
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).strip().upper())
    if not isinstance(value, int):
        raise InvalidConfig(f"unknown log level '{level}'", field="log_level")
    return value


def setup_logging(level: Optional[Union[str, int]] = None,
                  log_file: Optional[Union[str, Path]] = None) -> logging.Logger:
    """
    Configure the BLDL logger once

    Args:
        level: overrides LOG_LEVEL
        log_file: overrides LOG_FILE; an empty value disables the file

    Returns:
        The "BLDL" logger
    """
    logger = logging.getLogger(ROOT_NAME)
    logger.setLevel(parse_level(level if level is not None else config.LOG_LEVEL))
    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    path = config.LOG_FILE if log_file is None else log_file
    if path:
        file_handler = logging.handlers.RotatingFileHandler(
            Path(path), maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS, delay=True
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def get_logger(component: str) -> logging.Logger:
    """Child of the BLDL logger, e.g. get_logger("solver") -> "BLDL.solver" """
    return logging.getLogger(ROOT_NAME).getChild(component)


def set_level(level: Union[str, int]) -> int:
    """Change the BLDL threshold at runtime; returns the numeric level"""
    value = parse_level(level)
    logging.getLogger(ROOT_NAME).setLevel(value)
    return value


logger = setup_logging()
