import pytest

from models import CenteredPolynomial, Disk, PolynomialTarget, RationalTarget, Schedule, SolverOptions
from services.compact_set_service import CompactSetService
from services.probe_service import PRECISION_FLOOR, ProbeService
from tests.baselines import frozen
from utils.error_handlers import InvalidInputError, SeparationError


def resolvent(numerator=1.0):
    """numerator / (z - 4)."""
    return RationalTarget(
        numerator=CenteredPolynomial(center=0, coeffs=[numerator]),
        denominator=CenteredPolynomial(center=0, coeffs=[-4, 1]),
    )


@pytest.fixture
def grids():
    K = CompactSetService.sample(Disk(center=1.5, radius=0.25), 48)
    L = CompactSetService.sample(Disk(center=0, radius=1), 48)
    return K, L


@pytest.fixture
def short_schedule():
    return Schedule(pairs=((8, 2), (12, 3), (16, 4)))


def test_schedule_from_formulas():
    schedule = ProbeService.schedule_from_formulas("n**2", "n", 4, 6)
    assert schedule.pairs == ((16, 4), (25, 5), (36, 6))


def test_schedule_needs_valid_range():
    with pytest.raises(InvalidInputError):
        ProbeService.schedule_from_formulas("n**2", "n", 0, 6)


def test_schedule_needs_tau_above_sigma():
    with pytest.raises(InvalidInputError) as excinfo:
        ProbeService.schedule_from_formulas("n", "n+1", 1, 3)
    assert excinfo.value.field == "schedule[0]"


def test_bounded_companion_halves_tau():
    companion = ProbeService.bounded_companion(Schedule(pairs=((16, 4), (25, 5))))
    assert companion.pairs == ((16, 8), (25, 12))


def test_zero_target_rows_vanish(grids, short_schedule):
    K, L = grids
    zero = PolynomialTarget(polynomial=CenteredPolynomial(center=0, coeffs=[]))
    report = ProbeService.probe(zero, K, L, short_schedule)
    assert [row.d_value for row in report.rows] == [0.0, 0.0, 0.0]
    assert all(row.precision_limited for row in report.rows)
    assert report.theta_hat == 0.0


def test_origin_must_be_interior_to_L(grids, short_schedule):
    K, _ = grids
    L = CompactSetService.sample(Disk(center=-2, radius=0.5), 20)
    with pytest.raises(InvalidInputError) as excinfo:
        ProbeService.probe(resolvent(), K, L, short_schedule)
    assert excinfo.value.field == "sets.L"


def test_grids_closer_than_the_separation_threshold_are_rejected(short_schedule):
    """The 0.15 gap between D(1.4, 0.25) and D(0, 1) is below the threshold 10 / 40."""
    K = CompactSetService.sample(Disk(center=1.4, radius=0.25), 40)
    L = CompactSetService.sample(Disk(center=0, radius=1), 40)
    with pytest.raises(SeparationError) as excinfo:
        ProbeService.probe(resolvent(), K, L, short_schedule)
    assert excinfo.value.exit_code == 4


def test_rows_follow_schedule_order(grids, short_schedule):
    K, L = grids
    report = ProbeService.probe(resolvent(), K, L, short_schedule)
    assert [(row.tau, row.sigma) for row in report.rows] == list(short_schedule.pairs)
    for row in report.rows:
        assert row.d_value > 0
        assert row.lower_bound <= row.d_value
        assert 0 < row.d_root < 1


def test_thread_count_does_not_change_rows(grids, short_schedule):
    K, L = grids
    single = ProbeService.probe(resolvent(), K, L, short_schedule, threads=1)
    pooled = ProbeService.probe(resolvent(), K, L, short_schedule, threads=3)
    assert single == pooled


@pytest.mark.slow
def test_diverging_schedule_decays_faster_than_bounded_companion():
    """tau = n**2, sigma = n for n = 4..16 against the (tau, tau // 2) companion."""
    K = CompactSetService.sample(Disk(center=1.5, radius=0.25), 48)
    L = CompactSetService.sample(Disk(center=0, radius=1), 48)
    schedule = ProbeService.schedule_from_formulas("n**2", "n", 4, 16)
    options = SolverOptions(max_iters=150, gap_tol=1e-3)

    report = ProbeService.probe(resolvent(), K, L, schedule, options, threads=4)
    assert report.theta_hat < 1
    frozen("decay_resolvent", "theta_hat", report.theta_hat, rel=1e-6)

    # a large prefactor keeps d ** (1 / tau) decreasing along the schedule
    scaled = ProbeService.probe(resolvent(1e6), K, L, schedule, options, threads=4)
    assert scaled.decay_trend()

    companion = ProbeService.probe(
        resolvent(), K, L, ProbeService.bounded_companion(schedule), options, threads=4
    )
    slack = PRECISION_FLOOR
    for diverging, bounded in zip(report.rows, companion.rows):
        assert diverging.tau == bounded.tau
        assert bounded.d_value + slack >= diverging.lower_bound
