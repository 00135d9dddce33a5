import numpy as np
import pytest

from models import CenteredPolynomial, Disk, PolynomialTarget, Tolerances
from services.compact_set_service import CompactSetService
from services.polynomial_service import PolynomialService
from services.runge_service import RungeService, degree_schedule
from services.target_service import TargetService
from utils.error_handlers import ApproximationFailure


def constant(value):
    return PolynomialTarget(polynomial=CenteredPolynomial(center=0, coeffs=[value]))


@pytest.fixture
def grids():
    L = CompactSetService.sample(Disk(center=0, radius=0.5), 20)
    K1 = CompactSetService.sample(Disk(center=3, radius=0.5), 20)
    return L, K1


def test_degree_schedule_doubles_from_eight():
    assert degree_schedule(100) == [8, 16, 32, 64]
    assert degree_schedule(8) == [8]


def test_degree_schedule_below_first_degree():
    assert degree_schedule(5) == [5]


def test_zero_targets_give_zero_polynomial(grids):
    L, K1 = grids
    runge = RungeService.joint_approximate(
        constant(0), L, constant(0), K1, Tolerances(epsilon=1e-2, s=100), max_degree=64
    )
    assert runge.degree == -1
    assert runge.polynomial.length == 0
    assert len(runge.trace) == 1


def test_common_polynomial_target_is_reproduced(grids):
    L, K1 = grids
    q = PolynomialTarget(polynomial=CenteredPolynomial(center=1, coeffs=[1, -2, 0.5, 0.1j, 0, 0.01]))
    runge = RungeService.joint_approximate(
        q, L, q, K1, Tolerances(epsilon=1e-6, s=10**6), max_degree=64
    )
    assert runge.trace[0]["degree"] == 8
    assert max(runge.error_L, runge.error_K1) <= 1e-8
    assert runge.degree <= 8


def test_zero_and_one_on_separated_disks(grids):
    """g = 0 on D(0, 1/2) and f1 = 1 on D(3, 1/2) to within 5e-3 each."""
    L, K1 = grids
    tolerances = Tolerances(epsilon=1e-2, s=100)
    runge = RungeService.joint_approximate(
        constant(0), L, constant(1), K1, tolerances, max_degree=512
    )
    assert runge.error_L < 5e-3
    assert runge.error_K1 < 5e-3
    assert runge.polynomial.length == runge.degree + 1
    assert runge.degree == 16
    assert [step["degree"] for step in runge.trace] == [8, 16]

    again = RungeService.joint_approximate(
        constant(0), L, constant(1), K1, tolerances, max_degree=512
    )
    assert again.degree == runge.degree
    assert again.polynomial.same_as(runge.polynomial)

    errors = [max(step["error_L"], step["error_K1"]) for step in runge.trace]
    assert errors == sorted(errors, reverse=True)

    fine_L = CompactSetService.sample(L.spec, 80)
    fine_K1 = CompactSetService.sample(K1.spec, 80)
    assert np.max(np.abs(PolynomialService.evaluate(runge.polynomial, fine_L.points))) < 1e-2
    assert np.max(np.abs(PolynomialService.evaluate(runge.polynomial, fine_K1.points) - 1)) < 1e-2


def test_expansion_center_is_honored(grids):
    L, K1 = grids
    runge = RungeService.joint_approximate(
        constant(0), L, constant(1), K1, Tolerances(epsilon=1e-2, s=100), 512, center=0.2 + 0.1j
    )
    assert complex(runge.polynomial.center) == 0.2 + 0.1j
    values = PolynomialService.evaluate(runge.polynomial, K1.points)
    assert np.max(np.abs(values - TargetService.evaluate(constant(1), K1.points))) < 5e-3


def test_unreachable_tolerance_reports_best_errors(grids):
    L, K1 = grids
    with pytest.raises(ApproximationFailure) as excinfo:
        RungeService.joint_approximate(
            constant(0), L, constant(1), K1, Tolerances(epsilon=1e-14, s=10**14), max_degree=16
        )
    error = excinfo.value
    assert error.exit_code == 3
    assert len(error.best_errors) == 2
    assert [step["degree"] for step in error.trace] == [8, 16]
    assert "trace" in error.to_dict()
