import json
import os

import pytest

from app import DEFAULT_CONFIG, create_app
from models import CenteredPolynomial
from utils.formats.coefficient_format import read_polynomial, write_polynomial

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")

# ------------------------ FIXTURES ------------------------


@pytest.fixture
def app():
    """Application configured for testing."""
    return create_app({"TESTING": True})


@pytest.fixture
def runner(app):
    """CLI runner bound to the test application."""
    return app.test_cli_runner()


@pytest.fixture
def construct_config():
    """Zero targets on the standard three sets; constructs in well under a second."""
    return {
        "format": 1,
        "sets": {
            "L": {"type": "disk", "center": [0, 0], "radius": 0.5},
            "K1": {"type": "disk", "center": [3, 0], "radius": 0.5},
            "K2": {"type": "segment", "endpoint_a": [0, 2], "endpoint_b": [0, 3]},
        },
        "targets": {
            "g": {"type": "polynomial", "coeffs": []},
            "f1": {"type": "polynomial", "coeffs": []},
            "f2": {"type": "polynomial", "coeffs": []},
        },
        "center": [0, 0],
        "sequence": {"type": "formula", "expression": "n**2"},
        "tolerances": {"epsilon": 0.01, "s": 100},
        "density": 10,
    }


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def json_lines(result):
    """JSON documents printed by a command, stdout and stderr alike."""
    return [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]


# ------------------------ APPLICATION ------------------------


def test_create_app_defaults(app):
    for key, value in DEFAULT_CONFIG.items():
        assert app.config[key] == value
    assert app.config["TESTING"] is True


def test_commands_are_registered(app):
    assert {"solve", "construct", "verify", "probe", "oracle-check"} <= set(app.cli.commands)


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("DUTAYLOR_THREADS", "4")
    monkeypatch.setenv("DUTAYLOR_SOLVER_MAX_ITERS", "50")
    app = create_app()
    assert app.config["THREADS"] == 4
    assert app.config["SOLVER_MAX_ITERS"] == 50


def test_explicit_config_wins(monkeypatch):
    monkeypatch.setenv("DUTAYLOR_THREADS", "4")
    assert create_app({"THREADS": 2}).config["THREADS"] == 2


# ------------------------ SOLVE ------------------------


CUBE_SOLVE_CONFIG = {
    "format": 1,
    "grids": [
        {
            "set": {"type": "disk", "center": [0, 0], "radius": 1},
            "target": {"type": "polynomial", "coeffs": [[0, 0], [0, 0], [0, 0], [1, 0]]},
        }
    ],
    "window": {"low": 0, "high": 2},
    "density": 10,
}


def test_solve_writes_coefficients(runner, tmp_path):
    """z**3 on the unit disk against degrees 0..2 has distance 1."""
    config_path = write_config(tmp_path, CUBE_SOLVE_CONFIG)
    result = runner.invoke(args=["solve", "--config", config_path, "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    summary = json_lines(result)[-1]
    assert float(summary["objective"]) == pytest.approx(1.0, rel=0.02)
    assert summary["window"] == [0, 2]
    lines = (tmp_path / "solution.coeffs").read_text().splitlines()
    assert lines[0].startswith("center ")
    assert len(lines) == 4
    assert read_polynomial(str(tmp_path / "solution.coeffs")).length == 3


def test_solve_rejects_a_coefficient_file_that_does_not_read_back(runner, tmp_path, monkeypatch):
    def shifted_writer(path, p):
        write_polynomial(path, CenteredPolynomial(center=p.center + 1, coeffs=p.coeffs))

    monkeypatch.setattr("commands.solve_commands.write_polynomial", shifted_writer)
    config_path = write_config(tmp_path, CUBE_SOLVE_CONFIG)
    result = runner.invoke(args=["solve", "--config", config_path, "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert json_lines(result)[-1]["error"] == "Internal consistency failure"


def test_solve_rejects_underdetermined_window(runner, tmp_path):
    config = {
        "format": 1,
        "grids": [
            {
                "set": {"type": "points", "points": [[1, 0], [0, 1]]},
                "target": {"type": "polynomial", "coeffs": [[1, 0]]},
            }
        ],
        "window": {"low": 0, "high": 4},
        "density": 1,
    }
    result = runner.invoke(
        args=["solve", "--config", write_config(tmp_path, config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 4
    assert json_lines(result)[-1]["field"] == "window"


# ------------------------ CONSTRUCT AND VERIFY ------------------------


def test_construct_and_verify(runner, tmp_path, construct_config):
    result = runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    assert "heuristic" in result.output
    summary = json_lines(result)[-1]
    assert (summary["n0"], summary["mu"], summary["lambda_mu"]) == (2, 2, 4)

    certificate = tmp_path / "certificate.txt"
    verified = runner.invoke(args=["verify", str(certificate)])
    assert verified.exit_code == 0, verified.output
    assert json_lines(verified)[-1]["passed"] is True


@pytest.mark.parametrize("expression", ["2*n", "n+7", "3*n"])
def test_construct_refuses_bounded_ratio(runner, tmp_path, construct_config, expression):
    construct_config["sequence"]["expression"] = expression
    result = runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 2
    assert "bounded" in json_lines(result)[-1]["message"]
    assert not (tmp_path / "certificate.txt").exists()


def test_construct_rejects_unknown_key(runner, tmp_path, construct_config):
    construct_config["tolerances"]["delta"] = 1
    result = runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 4
    assert json_lines(result)[-1]["field"] == "tolerances"


def test_construct_rejects_touching_sets(runner, tmp_path, construct_config):
    construct_config["sets"]["K1"] = {"type": "disk", "center": [0.9, 0], "radius": 0.3}
    result = runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 4
    assert json_lines(result)[-1]["error"] == "Sets not separated"


def test_construct_reports_exhausted_caps(runner, tmp_path, construct_config):
    construct_config["targets"]["f1"] = {"type": "polynomial", "coeffs": [[1, 0]]}
    construct_config["tolerances"] = {"epsilon": 1e-14, "s": 100000000000000}
    construct_config["caps"] = {"max_degree": 16}
    result = runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 3
    assert "best_errors" in json_lines(result)[-1]


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(args=["construct", "--config", str(tmp_path / "absent.json")])
    assert result.exit_code == 4


def test_verify_detects_tampering(runner, tmp_path, construct_config):
    runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    certificate = tmp_path / "certificate.txt"
    lines = certificate.read_text().splitlines()
    f_header = next(k for k, line in enumerate(lines) if line.startswith("polynomial f "))
    lines[f_header + 2] = "0 1.0 0.0"
    certificate.write_text("\n".join(lines) + "\n")

    result = runner.invoke(args=["verify", str(certificate)])
    assert result.exit_code == 1
    report = json_lines(result)[-1]
    assert report["passed"] is False
    assert report["truncation_mu_ok"] is False


def test_verify_rejects_garbage(runner, tmp_path):
    garbage = tmp_path / "certificate.txt"
    garbage.write_text("not a certificate\n")
    result = runner.invoke(args=["verify", str(garbage)])
    assert result.exit_code == 1
    assert json_lines(result)[-1]["error"] == "Malformed certificate"


def test_verify_rejects_coarser_density(runner, tmp_path, construct_config):
    runner.invoke(
        args=["construct", "--config", write_config(tmp_path, construct_config), "--out", str(tmp_path)]
    )
    result = runner.invoke(
        args=["verify", str(tmp_path / "certificate.txt"), "--density-mult", "0.5"]
    )
    assert result.exit_code == 4


# ------------------------ PROBE AND ORACLE ------------------------


def test_probe_writes_csv_files(runner, tmp_path):
    config = {
        "format": 1,
        "target": {
            "type": "rational",
            "numerator": {"coeffs": [[1, 0]]},
            "denominator": {"coeffs": [[-4, 0], [1, 0]]},
        },
        "sets": {
            "K": {"type": "disk", "center": [1.5, 0], "radius": 0.25},
            "L": {"type": "disk", "center": [0, 0], "radius": 1},
        },
        "density": 48,
        "schedule": {"pairs": [[8, 2], [12, 3]]},
        "companion": True,
    }
    result = runner.invoke(
        args=["probe", "--config", write_config(tmp_path, config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    summary = json_lines(result)[-1]
    assert float(summary["theta_hat"]) < 1
    lines = (tmp_path / "probe.csv").read_text().splitlines()
    assert lines[:2] == ["format: 1", "tau,sigma,d_value,d_root,converged"]
    assert [line.split(",")[:2] for line in lines[2:]] == [["8", "2"], ["12", "3"]]
    companion = (tmp_path / "probe_companion.csv").read_text().splitlines()
    assert [line.split(",")[:2] for line in companion[2:]] == [["8", "4"], ["12", "6"]]


def test_probe_rejects_bad_schedule(runner, tmp_path):
    config = {
        "format": 1,
        "target": {"type": "polynomial", "coeffs": [[1, 0]]},
        "sets": {
            "K": {"type": "disk", "center": [3, 0], "radius": 0.5},
            "L": {"type": "disk", "center": [0, 0], "radius": 1},
        },
        "density": 10,
        "schedule": {"pairs": [[4, 4]]},
    }
    result = runner.invoke(
        args=["probe", "--config", write_config(tmp_path, config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 4
    assert json_lines(result)[-1]["field"] == "schedule[0]"


def test_oracle_check(runner):
    result = runner.invoke(args=["oracle-check", "--instances", "3", "--seed", "0"])
    assert result.exit_code == 0, result.output
    comparisons = json_lines(result)
    assert [c["instance"] for c in comparisons] == [0, 1, 2]
    assert all(c["agrees"] for c in comparisons)


# ------------------------ FLAGSHIP ------------------------


@pytest.mark.slow
def test_flagship_certificate_is_thread_independent(runner, tmp_path):
    """Shipped flagship config: identical certificates for 1 and 8 threads, verified at 4x."""
    config = os.path.join(CONFIG_DIR, "flagship_construct.json")
    texts = []
    for threads in ("1", "8"):
        out = tmp_path / f"threads-{threads}"
        result = runner.invoke(
            args=["construct", "--config", config, "--out", str(out), "--threads", threads]
        )
        assert result.exit_code == 0, result.output
        texts.append((out / "certificate.txt").read_bytes())
    assert texts[0] == texts[1]

    verified = runner.invoke(
        args=["verify", str(tmp_path / "threads-1" / "certificate.txt"), "--density-mult", "4"]
    )
    assert verified.exit_code == 0, verified.output
