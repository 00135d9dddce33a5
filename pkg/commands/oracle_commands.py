import json

import click
from flask import Blueprint, current_app

from commands.command_support import common_options, guarded, seed_value, thread_count
from services.oracle_service import OracleService
from utils.config_loader import parse_solver
from utils.error_handlers import EXIT_FAILURE

oracle_bp = Blueprint("oracle_commands", __name__, cli_group=None)


@oracle_bp.cli.command("oracle-check")
@click.option(
    "--instances", type=click.IntRange(min=1), default=20, show_default=True, help="Task count."
)
@common_options
@guarded
def oracle_check(instances, out, threads, seed):
    """Compare the Lawson solver with the LP oracle on random small tasks."""
    options = parse_solver(None, current_app.config)
    comparisons = OracleService.run(seed_value(seed), instances, options, thread_count(threads))
    for comparison in comparisons:
        click.echo(json.dumps(comparison.to_dict(), sort_keys=True))
    failures = [c.instance for c in comparisons if not c.agrees]
    if failures:
        current_app.logger.warning("event=oracle_disagreement instances=%s", failures)
        raise SystemExit(EXIT_FAILURE)
