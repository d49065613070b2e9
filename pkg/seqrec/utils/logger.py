"""Logger configuration for seqrec"""

import sys
from pathlib import Path
from typing import Optional, Union

from loguru import logger

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)


def setup_logger(level: str = "INFO", log_file: Optional[Union[str, Path]] = None):
    """
    Setup logger for a seqrec run

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path; when given, the same records are also written
            there (uncolored) so a run directory keeps its own log

    Returns:
        The configured loguru logger
    """
    logger.remove()

    # evaluation folds log from worker threads
    logger.add(sys.stderr, format=LOG_FORMAT, level=level, colorize=True, enqueue=True)

    if log_file is not None:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(str(log_file), format=LOG_FORMAT, level=level, colorize=False, enqueue=True)

    return logger
