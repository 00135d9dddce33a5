import logging

from extentions.extensions import worker_pool
from models import ProbeReport, ProbeRow, Schedule, SolverOptions
from services.compact_set_service import CompactSetService
from services.minimax_service import MinimaxService
from services.sequence_service import SequenceService
from services.target_service import TargetService
from utils.error_handlers import InvalidInputError

logger = logging.getLogger(__name__)

# d values at or below this fraction of sup|f| on K are limited by double precision
PRECISION_FLOOR = 1e-12


class ProbeService:
    """Empirical decay of d_{tau,sigma}(f, K, L) along a degree schedule."""

    @staticmethod
    def schedule_from_formulas(tau, sigma, start, stop):
        """Schedule (tau(n), sigma(n)) for n = start..stop from two sequence formulas."""
        if start < 1 or stop < start:
            raise InvalidInputError("schedule needs 1 <= start <= stop", field="schedule.start")
        return Schedule(
            pairs=tuple(
                (
                    SequenceService.evaluate_formula(tau, n),
                    SequenceService.evaluate_formula(sigma, n),
                )
                for n in range(start, stop + 1)
            )
        )

    @staticmethod
    def bounded_companion(schedule):
        """The bounded-ratio schedule (tau, floor(tau/2)) with the same tops."""
        return Schedule(pairs=tuple((tau, tau // 2) for tau, _ in schedule.pairs))

    @staticmethod
    def probe(f, K, L, schedule, options=None, threads=1):
        """
        Solve d_{tau,sigma}(f, K, L) for every schedule entry.

        Rows are independent solves run on a worker pool and returned in schedule
        order. Rows whose value is below PRECISION_FLOOR * sup|f|_K are flagged as
        precision-limited and left out of theta_hat, the tail-half maximum of
        d_value ** (1 / tau).

        :param f: Target evaluated on the K grid.
        :param K: SampledSet.
        :param L: SampledSet whose spec must contain 0 in its interior, separated from K
            by at least SEPARATION_FACTOR / density at the coarser of the two densities.
        :param schedule: Schedule of (tau, sigma) pairs.
        :param options: SolverOptions.
        :param threads: Worker count; does not change the output.
        :return: ProbeReport.
        :raises SeparationError: If the K and L grids are too close.
        """
        if not CompactSetService.contains_interior(L.spec, 0j):
            raise InvalidInputError("0 must lie in the interior of L", field="sets.L")
        CompactSetService.assert_separated(K, L, min(K.boundary_density, L.boundary_density))
        options = options or SolverOptions()
        f_values = TargetService.evaluate(f, K.points)
        floor = PRECISION_FLOOR * CompactSetService.discrete_sup_norm(f_values)

        def solve_row(pair):
            tau, sigma = pair
            result = MinimaxService.estimate_window_distance(f_values, K, L, tau, sigma, options)
            if not result.converged:
                logger.warning(
                    "event=probe_row_unconverged tau=%d sigma=%d objective=%.3e lower_bound=%.3e",
                    tau,
                    sigma,
                    result.objective,
                    result.lower_bound,
                )
            return ProbeRow(
                tau=tau,
                sigma=sigma,
                d_value=result.objective,
                lower_bound=result.lower_bound,
                converged=result.converged,
                precision_limited=result.objective <= floor,
            )

        with worker_pool(threads) as pool:
            rows = tuple(pool.map(solve_row, schedule.pairs))

        tail = [r.d_root for r in rows[len(rows) // 2 :] if not r.precision_limited]
        theta_hat = max(tail) if tail else 0.0
        logger.info("event=probe_finished rows=%d theta_hat=%.6f", len(rows), theta_hat)
        return ProbeReport(rows=rows, theta_hat=theta_hat)
