# src/isl/utils/logger.py
import logging
import os
from logging import Logger
from logging.handlers import RotatingFileHandler

LOG_DIR = os.getenv("LOG_DIR", "logs")
LOG_FILE = os.path.join(LOG_DIR, "isl.log")


def _level_from_env() -> int:
    name = os.getenv("ISL_LOG_LEVEL", "INFO").upper()
    return getattr(logging, name, logging.INFO)


def get_logger(name: str = __name__) -> Logger:
    """Component logger: console + rotating file under $LOG_DIR. Idempotent per name."""
    logger = logging.getLogger(f"isl.{name}")
    if logger.handlers:
        return logger
    logger.setLevel(_level_from_env())
    logger.propagate = False

    fmt = logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")

    sh = logging.StreamHandler()
    sh.setFormatter(fmt)
    logger.addHandler(sh)

    try:
        os.makedirs(LOG_DIR, exist_ok=True)
        fh = RotatingFileHandler(LOG_FILE, maxBytes=5_000_000, backupCount=3)
        fh.setFormatter(fmt)
        logger.addHandler(fh)
    except OSError:
        # read-only checkouts still get console logging
        logger.warning("Cannot open log file %s; logging to console only.", LOG_FILE)

    return logger
