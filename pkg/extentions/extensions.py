# extensions.py
import logging
import logging.config
from concurrent.futures import ThreadPoolExecutor

from mpmath.ctx_mp import MPContext

# Working precision for polynomial coefficients (decimal digits)
COEFFICIENT_DPS = 120

# Shared extended-precision context, never mutated after import
mp_context = MPContext()
mp_context.dps = COEFFICIENT_DPS

LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "keyvalue": {"format": "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"}
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "keyvalue",
        }
    },
    "root": {"level": "WARNING", "handlers": ["stderr"]},
}


def configure_logging(level="WARNING"):
    """Install the key=value stderr logging setup used by the CLI."""
    config = dict(LOGGING_CONFIG)
    config["root"] = {"level": level, "handlers": ["stderr"]}
    logging.config.dictConfig(config)


def worker_pool(max_workers):
    """
    Create the thread pool used for independent solves.

    Args:
        max_workers (int): Upper bound on concurrent workers (at least 1).

    Returns:
        ThreadPoolExecutor: A pool to be used as a context manager.
    """
    return ThreadPoolExecutor(max_workers=max(1, int(max_workers)))
