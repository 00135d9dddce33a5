import json

import click
from flask import Blueprint, current_app

from commands.command_support import common_options, guarded, output_path, thread_count
from models import Schedule
from schemas.schemas import PROBE_CONFIG_SCHEMA
from services.compact_set_service import CompactSetService
from services.probe_service import ProbeService
from utils.config_loader import number, parse_set, parse_solver, parse_target
from utils.formats.decimal_format import format_float
from utils.formats.probe_format import probe_csv
from validators.validators import validate_config

probe_bp = Blueprint("probe_commands", __name__, cli_group=None)


def build_schedule(data):
    if "pairs" in data:
        return Schedule(pairs=tuple(tuple(pair) for pair in data["pairs"]))
    return ProbeService.schedule_from_formulas(
        data["tau"], data["sigma"], data["start"], data["stop"]
    )


def _write(out, name, report):
    path = output_path(out, name)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(probe_csv(report))
    current_app.logger.info("event=probe_written path=%s", path)
    return path


@probe_bp.cli.command("probe")
@click.option("--config", required=True, type=click.Path(dir_okay=False), help="Probe config.")
@common_options
@guarded
@validate_config(PROBE_CONFIG_SCHEMA)
def probe(config, out, threads, seed):
    """Tabulate d_{tau,sigma}(f, K, L) along a schedule and write the CSV."""
    density = number(config["density"], "density")
    K = CompactSetService.sample(parse_set(config["sets"]["K"], "sets.K"), density)
    L = CompactSetService.sample(parse_set(config["sets"]["L"], "sets.L"), density)
    target = parse_target(config["target"], "target")
    schedule = build_schedule(config["schedule"])
    options = parse_solver(config.get("solver"), current_app.config)
    workers = thread_count(threads)

    report = ProbeService.probe(target, K, L, schedule, options, workers)
    summary = {
        "csv": _write(out, "probe.csv", report),
        "theta_hat": format_float(report.theta_hat),
        "decay_trend": report.decay_trend(),
    }
    if config.get("companion"):
        companion = ProbeService.probe(
            target, K, L, ProbeService.bounded_companion(schedule), options, workers
        )
        summary["companion_csv"] = _write(out, "probe_companion.csv", companion)
        summary["companion_theta_hat"] = format_float(companion.theta_hat)
    click.echo(json.dumps(summary, sort_keys=True))
