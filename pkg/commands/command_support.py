import os
from functools import wraps

import click
from flask import current_app

from utils.error_handlers import handle_exception


def guarded(func):
    """
    Run a command body and turn any exception into its exit code.

    Errors are reported as a JSON document on standard error by handle_exception.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as e:
            raise SystemExit(handle_exception(e))

    return wrapper


def common_options(func):
    """The ``--out``, ``--threads`` and ``--seed`` flags shared by every command."""
    func = click.option(
        "--seed",
        type=int,
        default=None,
        help="Seed for randomized self-tests; production commands ignore it.",
    )(func)
    func = click.option(
        "--threads",
        type=click.IntRange(min=1),
        default=None,
        help="Upper bound on worker threads; never changes the outputs.",
    )(func)
    func = click.option(
        "--out",
        type=click.Path(file_okay=False),
        default=".",
        show_default=True,
        help="Directory receiving the output files.",
    )(func)
    return func


def output_path(out, name):
    """Path of ``name`` inside the output directory, creating the directory."""
    os.makedirs(out, exist_ok=True)
    return os.path.join(out, name)


def thread_count(threads):
    return threads if threads is not None else current_app.config["THREADS"]


def seed_value(seed):
    return seed if seed is not None else current_app.config["SEED"]
