import logging

from models import DegreeWindow, FitGrid, FitTask, RungeApproximation
from services.minimax_service import MinimaxService
from services.polynomial_service import PolynomialService
from services.target_service import TargetService
from utils.error_handlers import ApproximationFailure

logger = logging.getLogger(__name__)

FIRST_DEGREE = 8


def degree_schedule(max_degree):
    """Doubling degrees 8, 16, 32, ... not exceeding max_degree."""
    if max_degree < FIRST_DEGREE:
        return [max_degree]
    degrees = []
    n = FIRST_DEGREE
    while n <= max_degree:
        degrees.append(n)
        n *= 2
    return degrees


class RungeService:
    """Joint polynomial approximation of two targets on two compact sets."""

    @staticmethod
    def joint_approximate(g, L, f1, K1, tolerances, max_degree, options=None, center=0j):
        """
        Find p with sup|p - g| < epsilon/2 on the L grid and sup|p - f1| < 1/(2s) on
        the K1 grid.

        Unconstrained windows (0, n) are solved for n in the doubling schedule and the
        first n meeting both bounds is accepted.

        :param g: Target on L.
        :param L: SampledSet.
        :param f1: Target on K1.
        :param K1: SampledSet.
        :param tolerances: Tolerances carrying epsilon and s.
        :param max_degree: Largest degree tried.
        :param options: SolverOptions for each window solve.
        :param center: Expansion center of the returned polynomial.
        :return: RungeApproximation.
        :raises ApproximationFailure: If no degree of the schedule meets both bounds.
        """
        bound_L, bound_K1 = tolerances.runge_bounds
        grids = (
            FitGrid(grid=L, targets=TargetService.evaluate(g, L.points)),
            FitGrid(grid=K1, targets=TargetService.evaluate(f1, K1.points)),
        )
        point_count = len(L) + len(K1)
        trace = []
        best = None
        for n in degree_schedule(max_degree):
            if n + 1 > point_count:
                logger.info("event=runge_grid_exhausted degree=%d points=%d", n, point_count)
                break
            task = FitTask(grids=grids, window=DegreeWindow(0, n), center=center)
            result = MinimaxService.solve_window(task, options)
            error_L, error_K1 = result.per_grid_errors
            trace.append(
                {
                    "degree": n,
                    "error_L": error_L,
                    "error_K1": error_K1,
                    "converged": result.converged,
                }
            )
            if best is None or result.objective < best.objective:
                best = result
            if error_L < bound_L and error_K1 < bound_K1:
                # exact trailing zeros are dropped so the length matches the degree
                degree = PolynomialService.degree(result.polynomial, trim_epsilon=0.0)
                polynomial = PolynomialService.partial_sum(result.polynomial, degree)
                logger.info(
                    "event=runge_accepted degree=%d error_L=%.3e error_K1=%.3e",
                    degree,
                    error_L,
                    error_K1,
                )
                return RungeApproximation(
                    polynomial=polynomial,
                    degree=degree,
                    error_L=error_L,
                    error_K1=error_K1,
                    trace=tuple(trace),
                )

        raise ApproximationFailure(
            f"no degree up to {max_degree} meets the bounds {bound_L:g} on L and "
            f"{bound_K1:g} on K1",
            best_errors=best.per_grid_errors if best is not None else None,
            trace=trace,
        )
