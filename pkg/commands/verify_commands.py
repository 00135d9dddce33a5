import json

import click
from flask import Blueprint, current_app

from commands.command_support import common_options, guarded
from services.construction_service import ConstructionService
from utils.error_handlers import EXIT_FAILURE
from utils.formats.certificate_format import read_certificate

verify_bp = Blueprint("verify_commands", __name__, cli_group=None)


@verify_bp.cli.command("verify")
@click.argument("certificate", type=click.Path(dir_okay=False))
@click.option(
    "--density-mult",
    type=float,
    default=4.0,
    show_default=True,
    help="Factor applied to the certificate density for re-sampling.",
)
@common_options
@guarded
def verify(certificate, density_mult, out, threads, seed):
    """Re-check a certificate on finer grids. Exit 0 on pass, 1 on failure."""
    report = ConstructionService.verify(read_certificate(certificate), density_mult)
    click.echo(json.dumps(report.to_dict(), sort_keys=True))
    if not report.passed:
        current_app.logger.warning("event=verification_failed certificate=%s", certificate)
        raise SystemExit(EXIT_FAILURE)
