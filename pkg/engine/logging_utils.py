"""JSON-lines logging for library code and sweep workers."""
import json
import logging
import os
from contextlib import contextmanager
from datetime import datetime, timezone
from time import perf_counter
from typing import Any, Dict, Iterator

LOGGER_NAME = "latin_square_morphisms"

# Record attributes copied into the JSON payload when a call passes them via extra=.
LOG_EXTRAS = (
    "order",
    "square",
    "seed",
    "length",
    "stage",
    "detector",
    "pairs",
    "failures",
    "elapsed_seconds",
    "error",
)


class JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp_utc": datetime.fromtimestamp(record.created, timezone.utc).isoformat(timespec="milliseconds"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "pid": record.process,
        }
        payload.update({key: record.__dict__[key] for key in LOG_EXTRAS if key in record.__dict__})
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, default=str)


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


def get_logger(name: str = LOGGER_NAME) -> logging.Logger:
    """Logger with one stderr JSON handler, configured once per process.

    LSM_LOGGING_ENABLED (default true) and LSM_LOG_LEVEL (default INFO) are
    read on first use; sweep workers inherit them through the environment.
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    logger.propagate = False
    if not _env_flag("LSM_LOGGING_ENABLED", True):
        logger.addHandler(logging.NullHandler())
        logger.setLevel(logging.CRITICAL)
        return logger

    level = logging.getLevelName(os.environ.get("LSM_LOG_LEVEL", "INFO").upper())
    logger.setLevel(level if isinstance(level, int) else logging.INFO)
    handler = logging.StreamHandler()
    handler.setFormatter(JsonFormatter())
    logger.addHandler(handler)
    return logger


@contextmanager
def log_stage(logger: logging.Logger, stage: str, **fields: Any) -> Iterator[Dict[str, Any]]:
    """Emit stage_start / stage_end (or stage_error) around a block.

    The yielded dict is merged into the stage_end record, so callers can
    attach results computed inside the block.
    """
    extra = dict(fields, stage=stage)
    logger.info("stage_start", extra=extra)
    started = perf_counter()
    result: Dict[str, Any] = {}
    try:
        yield result
    except Exception as e:
        logger.error(
            "stage_error",
            extra=dict(extra, error=str(e), elapsed_seconds=round(perf_counter() - started, 3)),
        )
        raise
    logger.info("stage_end", extra=dict(extra, elapsed_seconds=round(perf_counter() - started, 3), **result))
