import json

import click
from flask import Blueprint, current_app

from commands.command_support import common_options, guarded, output_path
from schemas.schemas import CONSTRUCT_CONFIG_SCHEMA
from services.construction_service import ConstructionService
from utils.config_loader import parse_caps, parse_problem, parse_solver
from utils.formats.certificate_format import write_certificate
from utils.formats.decimal_format import format_float
from validators.validators import validate_config

construct_bp = Blueprint("construct_commands", __name__, cli_group=None)

RATIO_CAVEAT = (
    "the diverging/bounded verdict on lambda_n / n is a heuristic over finitely many "
    "terms; a limsup is not decidable from them"
)


@construct_bp.cli.command("construct")
@click.option("--config", required=True, type=click.Path(dir_okay=False), help="Construct config.")
@common_options
@guarded
@validate_config(CONSTRUCT_CONFIG_SCHEMA)
def construct(config, out, threads, seed):
    """
    Build a doubly universal approximant and write its certificate.

    Exit 0 on success, 2 when lambda_n / n looks bounded, 3 when caps run out.
    """
    problem = parse_problem(config)
    caps = parse_caps(config.get("caps"), current_app.config)
    options = parse_solver(config.get("solver"), current_app.config)
    click.echo(f"note: {RATIO_CAVEAT}", err=True)
    certificate = ConstructionService.construct(problem, caps, options)
    path = output_path(out, "certificate.txt")
    write_certificate(path, certificate)
    current_app.logger.info("event=certificate_written path=%s", path)
    click.echo(
        json.dumps(
            {
                "certificate": path,
                "n0": certificate.n0,
                "mu": certificate.mu,
                "lambda_mu": certificate.lambda_mu,
                "residual_L": format_float(certificate.residual_L),
                "residual_K1": format_float(certificate.residual_K1),
                "residual_K2": format_float(certificate.residual_K2),
            },
            sort_keys=True,
        )
    )
