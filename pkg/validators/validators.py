# validators.py
import json
from functools import wraps

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from utils.error_handlers import InvalidInputError


def _field_path(error):
    """Dotted path of the offending field, e.g. ``sets.L.radius``."""
    path = ".".join(str(part) for part in error.absolute_path)
    return path or "<root>"


def validate_document(data, schema):
    """
    Validate a parsed JSON document against a schema.

    Args:
        data (dict): The document.
        schema (dict): The JSON schema it must conform to.

    Returns:
        dict: The document itself, when valid.

    Raises:
        InvalidInputError: For the most relevant violation, with its field path.
    """
    error = best_match(Draft7Validator(schema).iter_errors(data))
    if error is not None:
        field = _field_path(error)
        raise InvalidInputError(f"Invalid configuration at {field}: {error.message}", field=field)
    return data


def load_document(path):
    """Read a JSON configuration file, mapping read and parse failures to InvalidInputError."""
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise InvalidInputError(f"Cannot read configuration {path}: {e.strerror}", field="config")
    except json.JSONDecodeError as e:
        raise InvalidInputError(
            f"Configuration {path} is not valid JSON: {e.msg} (line {e.lineno})", field="config"
        )


def validate_config(schema):
    """
    Decorator to validate the configuration file of a command against a given schema.

    The wrapped command receives the ``config`` keyword as a file path; the
    decorator replaces it with the parsed and validated document, so a config with
    an unknown key or an out-of-range value fails before any computation.

    Args:
        schema (dict): The JSON schema that the configuration should conform to.

    Example:
        @bp.cli.command("solve")
        @click.option("--config", required=True)
        @validate_config(SOLVE_CONFIG_SCHEMA)
        def solve(config):
            ...
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            kwargs["config"] = validate_document(load_document(kwargs["config"]), schema)
            return func(*args, **kwargs)

        return wrapper

    return decorator
