import os
import sys
from datetime import datetime
from typing import Optional

from loguru import logger


def setup_logging(
    level: str = "WARNING",
    log_dir: Optional[str] = None,
    run_id: Optional[str] = None,
    retention: str = "10 days",
    rotation: str = "20 MB",
) -> Optional[str]:
    """Configure Loguru to log to stderr and, if log_dir is given, a per-run file.

    Returns the log file path, or None when only stderr is used.
    """
    # Remove default handler to avoid duplicate logs.
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), backtrace=False, diagnose=False)

    if not log_dir:
        return None

    os.makedirs(log_dir, exist_ok=True)
    log_path = os.path.join(log_dir, f"approxinc_{run_id or make_run_id()}.log")
    # File sink always records DEBUG so a quiet console still leaves a full trace
    logger.add(
        log_path,
        level="DEBUG",
        rotation=rotation,
        retention=retention,
        enqueue=True,
        backtrace=True,
        diagnose=False,
        encoding="utf-8",
    )
    return log_path


def make_run_id(prefix: Optional[str] = None) -> str:
    ts = datetime.now().strftime("%Y%m%d_%H%M%S")
    return f"{prefix}_{ts}" if prefix else ts
