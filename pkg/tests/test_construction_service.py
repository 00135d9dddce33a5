import dataclasses

import pytest

from models import (
    CenteredPolynomial,
    ConstructionProblem,
    Disk,
    FormulaSequence,
    PolynomialTarget,
    Segment,
    Tolerances,
)
from services.compact_set_service import CompactSetService
from services.construction_service import ConstructionService, window_tops
from services.minimax_service import MinimaxService
from services.polynomial_service import PolynomialService
from services.runge_service import RungeService
from tests.baselines import frozen
from utils.error_handlers import AdmissibilityRefusal, InvalidInputError, SeparationError


def polynomial_target(*coeffs, center=0):
    return PolynomialTarget(polynomial=CenteredPolynomial(center=center, coeffs=list(coeffs)))


def make_problem(**overrides):
    values = dict(
        g=polynomial_target(),
        L=Disk(center=0, radius=0.5),
        f1=polynomial_target(),
        K1=Disk(center=3, radius=0.5),
        f2=polynomial_target(),
        K2=Segment(endpoint_a=2j, endpoint_b=3j),
        zeta0=0,
        sequence=FormulaSequence(expression="n**2"),
        tolerances=Tolerances(epsilon=1e-2, s=100),
        density=10.0,
    )
    values.update(overrides)
    return ConstructionProblem(**values)


@pytest.fixture
def zero_certificate():
    return ConstructionService.construct(make_problem())


def test_window_tops_are_economical():
    assert window_tops(33, 1024) == [41, 49, 65, 97, 161, 289, 545, 1024]
    assert window_tops(3, 4) == [4]


def test_zero_targets_give_zero_certificate(zero_certificate):
    cert = zero_certificate
    assert PolynomialService.degree(cert.f, trim_epsilon=0.0) == -1
    assert (cert.residual_L, cert.residual_K1, cert.residual_K2) == (0.0, 0.0, 0.0)
    assert cert.window_error == 0.0
    assert (cert.n0, cert.mu, cert.lambda_mu) == (2, 2, 4)
    assert cert.residual_L <= cert.window_error + cert.runge_error_L + 1e-9


def test_zero_certificate_verifies(zero_certificate):
    report = ConstructionService.verify(zero_certificate, density_multiplier=4.0)
    assert report.passed
    assert report.density == 40.0


def test_verify_rejects_small_multiplier(zero_certificate):
    with pytest.raises(InvalidInputError):
        ConstructionService.verify(zero_certificate, density_multiplier=0.5)


def test_tampered_low_coefficient_fails_truncation(zero_certificate):
    f = zero_certificate.f
    tampered = CenteredPolynomial(center=f.center, coeffs=(f.coeffs[0] + 1,) + f.coeffs[1:])
    report = ConstructionService.verify(dataclasses.replace(zero_certificate, f=tampered))
    assert not report.truncation_mu_ok
    assert not report.passed


def test_coefficient_beyond_lambda_fails_truncation(zero_certificate):
    f = zero_certificate.f
    length = zero_certificate.lambda_mu + 2
    coeffs = list(f.coeffs) + [0] * (length - f.length)
    coeffs[-1] = 1e-3
    tampered = CenteredPolynomial(center=f.center, coeffs=coeffs)
    report = ConstructionService.verify(dataclasses.replace(zero_certificate, f=tampered))
    assert not report.truncation_lambda_ok
    assert not report.window_ok
    assert not report.passed


def test_inconsistent_indices_are_reported(zero_certificate):
    broken = dataclasses.replace(zero_certificate, mu=5, lambda_mu=5)
    report = ConstructionService.verify(broken)
    assert report.messages
    assert not report.passed


def test_second_target_equal_to_runge_polynomial_needs_no_window():
    """When f2 is p itself the window target vanishes and f is p."""
    q = polynomial_target(1, -0.5, 0.25, 0.1j)
    base = make_problem(g=q, f1=q)
    L = CompactSetService.sample(base.L, base.density)
    K1 = CompactSetService.sample(base.K1, base.density)
    p = RungeService.joint_approximate(q, L, q, K1, base.tolerances, 2048).polynomial

    cert = ConstructionService.construct(
        dataclasses.replace(base, f2=PolynomialTarget(polynomial=p))
    )
    assert cert.window_error == 0.0
    assert cert.residual_K2 == 0.0
    assert PolynomialService.max_coefficient_gap(cert.f, p) == 0.0
    assert cert.mu >= PolynomialService.degree(p, trim_epsilon=0.0)


def test_bounded_ratio_is_refused_before_solving(monkeypatch):
    def forbidden(*args, **kwargs):
        raise AssertionError("no solve may run for a refused sequence")

    monkeypatch.setattr(MinimaxService, "solve_window", forbidden)
    monkeypatch.setattr(RungeService, "joint_approximate", forbidden)
    with pytest.raises(AdmissibilityRefusal):
        ConstructionService.construct(make_problem(sequence=FormulaSequence(expression="2*n")))


def test_overlapping_sets_are_rejected():
    with pytest.raises(SeparationError) as excinfo:
        ConstructionService.construct(make_problem(K1=Disk(center=0.9, radius=0.3)))
    assert excinfo.value.field == "K1"


def test_center_outside_L_is_rejected():
    with pytest.raises(InvalidInputError) as excinfo:
        ConstructionService.construct(make_problem(zeta0=0.6))
    assert excinfo.value.field == "center"


def test_sets_meeting_omega_are_rejected():
    with pytest.raises(InvalidInputError) as excinfo:
        ConstructionService.construct(make_problem(omega=Disk(center=3, radius=1)))
    assert excinfo.value.field == "sets.K1"


def flagship(zeta0):
    return make_problem(
        g=polynomial_target(0),
        f1=polynomial_target(1),
        f2=polynomial_target(0, 1),
        zeta0=zeta0,
        density=50.0,
        omega=Disk(center=0, radius=1),
    )


@pytest.mark.slow
@pytest.mark.parametrize(
    "zeta0, run", [(0, "flagship_center_0"), (0.2 + 0.1j, "flagship_center_0.2+0.1j")]
)
def test_flagship_construction(zeta0, run):
    """g = 0 on L, f1 = 1 on K1, f2(z) = z on K2 with lambda_n = n**2."""
    cert = ConstructionService.construct(flagship(zeta0))
    assert cert.residual_L < 1e-2
    assert cert.residual_K1 < 1e-2
    assert cert.residual_K2 < 1e-2
    assert cert.residual_L <= cert.window_error + cert.runge_error_L + 1e-9

    frozen(run, "n0", cert.n0)
    frozen(run, "mu", cert.mu)
    frozen(run, "lambda_mu", cert.lambda_mu)
    frozen(run, "degree_p", PolynomialService.degree(cert.p, trim_epsilon=0.0))
    frozen(run, "f_length", cert.f.length)
    assert cert.mu >= PolynomialService.degree(cert.p, trim_epsilon=0.0)
    assert cert.lambda_mu == cert.mu**2
    assert complex(cert.f.center) == zeta0

    report = ConstructionService.verify(cert, density_multiplier=4.0)
    assert report.truncation_mu_ok
    assert report.truncation_lambda_ok
    assert report.window_ok
    assert report.passed
