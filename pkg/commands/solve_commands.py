import json

import click
from flask import Blueprint, current_app

from commands.command_support import common_options, guarded, output_path
from models import DegreeWindow, FitGrid, FitTask
from schemas.schemas import SOLVE_CONFIG_SCHEMA
from services.compact_set_service import CompactSetService
from services.minimax_service import MinimaxService
from services.target_service import TargetService
from utils.config_loader import complex_value, number, parse_set, parse_solver, parse_target
from utils.error_handlers import InternalConsistencyError
from utils.formats.coefficient_format import read_polynomial, write_polynomial
from validators.validators import validate_config

solve_bp = Blueprint("solve_commands", __name__, cli_group=None)


def build_task(config):
    """FitTask described by a validated solve config."""
    density = number(config["density"], "density")
    grids = []
    for k, item in enumerate(config["grids"]):
        spec = parse_set(item["set"], f"grids[{k}].set")
        target = parse_target(item["target"], f"grids[{k}].target")
        grid = CompactSetService.sample(spec, density)
        grids.append(FitGrid(grid=grid, targets=TargetService.evaluate(target, grid.points)))
    for a in range(len(grids)):
        for b in range(a + 1, len(grids)):
            CompactSetService.assert_separated(
                grids[a].grid, grids[b].grid, density, names=(f"grids[{a}]", f"grids[{b}]")
            )
    window = config["window"]
    return FitTask(
        grids=tuple(grids),
        window=DegreeWindow(window["low"], window["high"]),
        center=complex_value(config.get("center", [0, 0]), "center"),
    )


@solve_bp.cli.command("solve")
@click.option("--config", required=True, type=click.Path(dir_okay=False), help="Solve config.")
@common_options
@guarded
@validate_config(SOLVE_CONFIG_SCHEMA)
def solve(config, out, threads, seed):
    """Solve one degree-window minimax problem and write its coefficient file."""
    task = build_task(config)
    options = parse_solver(config.get("solver"), current_app.config)
    result = MinimaxService.solve_window(task, options)
    path = output_path(out, "solution.coeffs")
    write_polynomial(path, result.polynomial)
    if not read_polynomial(path).same_as(result.polynomial):
        raise InternalConsistencyError(f"coefficient file {path} does not reproduce the solution")
    current_app.logger.info("event=solution_written path=%s", path)
    summary = result.to_dict()
    summary["points"] = task.point_count
    summary["coefficients"] = path
    click.echo(json.dumps(summary, sort_keys=True))
