import json
import logging

import click

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_REFUSAL = 2
EXIT_EXHAUSTED = 3
EXIT_INVALID = 4


class DoublyUniversalError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = EXIT_FAILURE
    title = "Internal error"

    def to_dict(self):
        """Convert the error into the JSON document written to standard error."""
        return {"error": self.title, "message": str(self)}


class InvalidInputError(DoublyUniversalError, ValueError):
    """A geometric spec, target, window or configuration value is unusable."""

    exit_code = EXIT_INVALID
    title = "Invalid input"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def to_dict(self):
        data = super().to_dict()
        if self.field:
            data["field"] = self.field
        return data


class SeparationError(InvalidInputError):
    """Two grids are too close for their densities to certify disjointness."""

    title = "Sets not separated"


class TargetEvaluationError(InvalidInputError):
    """A target rule cannot be evaluated at a requested point."""

    title = "Target not evaluable"


class CertificateFormatError(DoublyUniversalError):
    """A certificate or coefficient file does not parse."""

    exit_code = EXIT_FAILURE
    title = "Malformed certificate"


class AdmissibilityRefusal(DoublyUniversalError):
    """The sequence ratio looks bounded, so no doubly universal series exists."""

    exit_code = EXIT_REFUSAL
    title = "Bounded-ratio sequence"


class ApproximationFailure(DoublyUniversalError):
    """A degree schedule reached its cap without meeting the requested bounds."""

    exit_code = EXIT_EXHAUSTED
    title = "Degree cap exhausted"

    def __init__(self, message, best_errors=None, trace=None):
        super().__init__(message)
        self.best_errors = best_errors
        self.trace = list(trace or [])

    def to_dict(self):
        data = super().to_dict()
        if self.best_errors is not None:
            data["best_errors"] = list(self.best_errors)
        if self.trace:
            data["trace"] = self.trace
        return data


class CandidatesExhausted(ApproximationFailure):
    """The subsequence walk ended before a window met the threshold."""

    title = "Candidates exhausted"


class SubsequenceExhausted(DoublyUniversalError):
    """The ratio-doubling selection could not be extended within the horizon."""

    exit_code = EXIT_EXHAUSTED
    title = "Horizon too short"


class InternalConsistencyError(DoublyUniversalError, RuntimeError):
    """An identity that holds by construction failed: this is a bug."""

    exit_code = EXIT_FAILURE
    title = "Internal consistency failure"


def handle_error(message, exit_code, /, **extra):
    """
    Report an error as a JSON document on standard error.

    Args:
        message (str): The error message.
        exit_code (int): The process exit code to return.

    Returns:
        int: The exit code, so callers can ``ctx.exit(handle_error(...))``.
    """
    payload = {"error": message}
    payload.update(extra)
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    return exit_code


def handle_exception(exception):
    """
    Report an exception and map it onto the CLI exit-code taxonomy.

    Args:
        exception (Exception): The exception to handle.

    Returns:
        int: The exit code associated with the exception type.
    """
    if isinstance(exception, DoublyUniversalError):
        if isinstance(exception, InternalConsistencyError):
            logger.error("event=internal_consistency_failure", exc_info=exception)
        click.echo(json.dumps(exception.to_dict(), sort_keys=True), err=True)
        return exception.exit_code
    logger.error("event=unexpected_exception", exc_info=exception)
    return handle_error("Internal error", EXIT_FAILURE, message=str(exception))
