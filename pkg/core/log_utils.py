# core/log_utils.py
import logging

from core.settings import LOG_LEVEL


def get_logger(name: str, tag: str) -> logging.Logger:
    """Package logger with the gateway-style single stream handler."""
    logger = logging.getLogger(name)
    if not logger.handlers:
        h = logging.StreamHandler()
        h.setFormatter(logging.Formatter(f"[%(asctime)s] [%(levelname)s] [{tag}] %(message)s", "%H:%M:%S"))
        logger.addHandler(h)
        logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    return logger
