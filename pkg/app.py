# app.py
from flask import Flask
from flask.cli import FlaskGroup

from commands.construct_commands import construct_bp
from commands.oracle_commands import oracle_bp
from commands.probe_commands import probe_bp
from commands.solve_commands import solve_bp
from commands.verify_commands import verify_bp
from extentions.extensions import configure_logging

DEFAULT_CONFIG = {
    "SOLVER_TOL": 1e-10,  # relative objective change that ends a Lawson run
    "SOLVER_MAX_ITERS": 500,
    "SOLVER_GAP_TOL": 1e-4,  # relative gap between objective and certified lower bound
    "LP_FACETS": 16,
    "MAX_DEGREE": 2048,
    "MAX_CANDIDATES": 12,
    "SEQUENCE_HORIZON": 4096,
    "THREADS": 1,
    "SEED": 0,
    "LOG_LEVEL": "WARNING",
}


def create_app(config=None):
    """
    Create and configure the application behind the command-line tools.

    Defaults come from DEFAULT_CONFIG, then from ``DUTAYLOR_*`` environment
    variables, then from ``config``. The subcommands are registered as blueprints.

    Args:
        config (dict, optional): Overrides applied last (used by tests).

    Returns:
        Flask app instance
    """
    app = Flask(__name__)
    app.config.update(DEFAULT_CONFIG)
    app.config.from_prefixed_env("DUTAYLOR")
    if config:
        app.config.update(config)
    configure_logging(app.config["LOG_LEVEL"])

    app.register_blueprint(solve_bp)
    app.register_blueprint(construct_bp)
    app.register_blueprint(verify_bp)
    app.register_blueprint(probe_bp)
    app.register_blueprint(oracle_bp)
    return app


cli = FlaskGroup(
    name="dutaylor",
    create_app=create_app,
    add_default_commands=False,
    add_version_option=False,
    load_dotenv=False,
    help="Doubly universal Taylor approximation: solve, construct, verify, probe.",
)


def main():
    """Entry point of the ``dutaylor`` command."""
    cli.main(prog_name="dutaylor")


if __name__ == "__main__":
    main()
