import logging
import math

import numpy as np
from scipy.linalg import qr, solve_triangular
from scipy.optimize import linprog

from extentions.extensions import mp_context
from models import (
    ApproximationResult,
    CenteredPolynomial,
    DegreeWindow,
    FitGrid,
    FitTask,
    OrthogonalBasis,
    SolverOptions,
)
from utils.error_handlers import InternalConsistencyError, InvalidInputError

logger = logging.getLogger(__name__)

# Lawson weights never drop below this before renormalization
WEIGHT_FLOOR = 1e-300

# Columns of the weighted basis with |R_kk| below this (relative) are dropped
RANK_TOLERANCE = 1e-13

# Arnoldi stops extending the basis when a new direction is this small (relative)
BREAKDOWN_TOLERANCE = 1e-13

# Bounds accepted by the LP oracle
LP_MAX_BASIS = 40
LP_MAX_POINTS = 2000


class MinimaxService:
    """Degree-window complex minimax fitting on sampled sets."""

    @staticmethod
    def build_basis(points, center, window):
        """
        Orthogonalize span{(z - center)**k : window.low <= k <= window.high} on points.

        The points are first mapped to w = (z - center) / rho with rho the largest
        distance to the center, so the scaled monomials are bounded by one. Each new
        direction w * q_k is orthogonalized twice (classical Gram-Schmidt with one
        reorthogonalization pass) against the previous columns; the Hessenberg matrix
        accumulates both passes so that the recorded recurrence reproduces the
        columns. If the grid cannot resolve the full window, the basis is truncated
        at the top and the returned window says so.
        """
        points = np.asarray(points, dtype=complex).reshape(-1)
        center = complex(center)
        count = len(points)
        offsets = points - center
        rho = float(np.max(np.abs(offsets))) if count else 0.0
        if rho == 0.0:
            rho = 1.0
        w = offsets / rho

        start = w ** window.low
        start_norm = np.linalg.norm(start) / math.sqrt(count)
        if start_norm == 0.0:
            raise InvalidInputError(
                "every sample point coincides with the basis center", field="grids"
            )

        size = window.size
        values = np.zeros((count, size), dtype=complex)
        hessenberg = np.zeros((size, max(size - 1, 0)), dtype=complex)
        values[:, 0] = start / start_norm
        built = 1
        for k in range(size - 1):
            v = w * values[:, k]
            reference = np.linalg.norm(v)
            h = np.zeros(k + 1, dtype=complex)
            for _ in range(2):
                correction = values[:, : k + 1].conj().T @ v / count
                v = v - values[:, : k + 1] @ correction
                h += correction
            norm = np.linalg.norm(v)
            if norm <= BREAKDOWN_TOLERANCE * max(reference, 1.0):
                logger.debug(
                    "event=arnoldi_breakdown window_low=%d kept_high=%d requested_high=%d",
                    window.low,
                    window.low + k,
                    window.high,
                )
                break
            hessenberg[: k + 1, k] = h
            hessenberg[k + 1, k] = norm / math.sqrt(count)
            values[:, k + 1] = v / hessenberg[k + 1, k]
            built += 1

        effective = DegreeWindow(window.low, window.low + built - 1)
        values = values[:, :built]
        hessenberg = hessenberg[:built, : built - 1]
        values.setflags(write=False)
        hessenberg.setflags(write=False)
        return OrthogonalBasis(
            center=center,
            rho=rho,
            window=effective,
            start_norms=(float(start_norm),),
            hessenberg=hessenberg,
            values=values,
        )

    @staticmethod
    def to_monomial(basis, basis_coeffs):
        """
        Convert orthogonal-basis coefficients into a CenteredPolynomial, exactly
        replaying the Arnoldi recurrence in extended precision.

        The result is centered at the basis center, carries zero coefficients below
        window.low and has length window.high + 1.
        """
        size = basis.window.size
        mpc = mp_context.mpc
        zero = mpc(0)
        hessenberg = [[mpc(complex(x)) for x in row] for row in basis.hessenberg]

        rows = np.empty((size, size), dtype=object)
        rows.fill(zero)
        rows[0, 0] = mpc(1) / mp_context.mpf(basis.start_norms[0])
        for k in range(size - 1):
            shifted = np.empty(size, dtype=object)
            shifted[0] = zero
            shifted[1:] = rows[k, :-1]
            h = np.array([hessenberg[j][k] for j in range(k + 1)], dtype=object)
            v = shifted - h @ rows[: k + 1]
            rows[k + 1] = v / hessenberg[k + 1][k]

        coeffs = np.array([mpc(complex(c)) for c in basis_coeffs], dtype=object)
        in_w = coeffs @ rows if size else np.empty(0, dtype=object)
        inverse_rho = 1 / mp_context.mpf(basis.rho)
        scale = inverse_rho ** basis.window.low
        monomial = [zero] * basis.window.low
        for a in in_w:
            monomial.append(a * scale)
            scale *= inverse_rho
        return CenteredPolynomial(center=basis.center, coeffs=monomial)

    @staticmethod
    def _stack(task):
        points = np.concatenate([g.grid.points for g in task.grids])
        targets = np.concatenate([g.targets for g in task.grids])
        bounds = np.cumsum([0] + [len(g.grid) for g in task.grids])
        return points, targets, bounds

    @staticmethod
    def _per_grid(errors, bounds):
        return tuple(float(np.max(errors[a:b])) for a, b in zip(bounds[:-1], bounds[1:]))

    @staticmethod
    def _check_determined(task):
        if task.point_count < task.window.size:
            raise InvalidInputError(
                f"{task.point_count} points cannot determine a window of "
                f"{task.window.size} coefficients",
                field="window",
            )

    @staticmethod
    def _weighted_least_squares(matrix, rhs, sqrt_weights):
        weighted = sqrt_weights[:, np.newaxis] * matrix
        q_factor, r_factor, pivots = qr(weighted, mode="economic", pivoting=True)
        diagonal = np.abs(np.diag(r_factor))
        rank = int(np.sum(diagonal > RANK_TOLERANCE * diagonal[0])) if diagonal.size else 0
        solution = np.zeros(matrix.shape[1], dtype=complex)
        if rank:
            projected = q_factor[:, :rank].conj().T @ (sqrt_weights * rhs)
            solution[pivots[:rank]] = solve_triangular(r_factor[:rank, :rank], projected)
        return solution

    @staticmethod
    def solve_window(task, options=None):
        """
        Lawson iteratively reweighted least squares for the window minimax problem.

        :param task: FitTask (grids with aligned targets, window, basis center).
        :param options: SolverOptions; defaults apply when omitted.
        :return: ApproximationResult with the best iterate. ``lower_bound`` is the
            largest weighted two-norm residual seen, which never exceeds the discrete
            minimax value.
        """
        options = options or SolverOptions()
        MinimaxService._check_determined(task)
        points, targets, bounds = MinimaxService._stack(task)
        basis = MinimaxService.build_basis(points, task.center, task.window)
        matrix = basis.values
        size = matrix.shape[1]

        if not np.any(targets):
            return ApproximationResult(
                basis=basis,
                basis_coeffs=np.zeros(size, dtype=complex),
                per_grid_errors=tuple(0.0 for _ in task.grids),
                lower_bound=0.0,
                iterations=0,
                converged=True,
            )

        scale = float(np.max(np.abs(targets)))
        weights = np.full(len(points), 1.0 / len(points))
        best = None
        best_errors = None
        best_objective = math.inf
        lower_bound = 0.0
        previous = None
        converged = False
        iterations = 0
        for iterations in range(1, int(options.max_iters) + 1):
            coeffs = MinimaxService._weighted_least_squares(matrix, targets, np.sqrt(weights))
            errors = np.abs(targets - matrix @ coeffs)
            objective = float(np.max(errors))
            lower_bound = max(lower_bound, math.sqrt(float(np.sum(weights * errors**2))))
            if objective < best_objective:
                best, best_errors, best_objective = coeffs, errors, objective
            logger.debug(
                "event=lawson_step iteration=%d objective=%.6e lower_bound=%.6e",
                iterations,
                objective,
                lower_bound,
            )
            if best_objective <= 1e-15 * scale:
                converged = True
                break
            if (best_objective - lower_bound) <= options.gap_tol * best_objective:
                converged = True
                break
            if previous is not None and abs(previous - objective) <= options.tol * objective:
                converged = True
                break
            previous = objective
            weights = np.maximum(weights * errors, WEIGHT_FLOOR)
            weights = weights / np.sum(weights)

        return ApproximationResult(
            basis=basis,
            basis_coeffs=best,
            per_grid_errors=MinimaxService._per_grid(best_errors, bounds),
            lower_bound=min(lower_bound, best_objective),
            iterations=iterations,
            converged=converged,
        )

    @staticmethod
    def lp_oracle(task, facets=16):
        """
        Solve the window minimax problem as a linear program.

        Each modulus constraint |r| <= t is replaced by the regular ``facets``-gon
        inscribed in the circle of radius t, so the reported objective lies between
        the true discrete minimax value and sec(pi / facets) times it.
        """
        facets = int(facets)
        if facets < 3:
            raise InvalidInputError("facets must be at least 3", field="solver.facets")
        MinimaxService._check_determined(task)
        if task.window.size > LP_MAX_BASIS or task.point_count > LP_MAX_POINTS:
            raise InvalidInputError(
                f"LP oracle accepts at most {LP_MAX_BASIS} basis functions and "
                f"{LP_MAX_POINTS} points",
                field="window",
            )
        points, targets, bounds = MinimaxService._stack(task)
        basis = MinimaxService.build_basis(points, task.center, task.window)
        matrix = basis.values
        size = matrix.shape[1]

        angles = 2.0 * np.pi * np.arange(facets) / facets
        cos, sin = np.cos(angles)[:, np.newaxis], np.sin(angles)[:, np.newaxis]
        ar, ai = matrix.real[np.newaxis], matrix.imag[np.newaxis]
        br, bi = targets.real[np.newaxis], targets.imag[np.newaxis]
        apothem = math.cos(math.pi / facets)

        # rows indexed (facet, point); unknowns are Re c, Im c and t
        x_part = -(cos[..., np.newaxis] * ar + sin[..., np.newaxis] * ai)
        y_part = cos[..., np.newaxis] * ai - sin[..., np.newaxis] * ar
        a_ub = np.concatenate(
            [
                x_part.reshape(-1, size),
                y_part.reshape(-1, size),
                np.full((facets * len(points), 1), -apothem),
            ],
            axis=1,
        )
        b_ub = -(cos * br + sin * bi).reshape(-1)
        cost = np.zeros(2 * size + 1)
        cost[-1] = 1.0
        variable_bounds = [(None, None)] * (2 * size) + [(0, None)]
        solution = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=variable_bounds, method="highs")
        if not solution.success:
            raise InternalConsistencyError(f"LP oracle failed: {solution.message}")

        coeffs = solution.x[:size] + 1j * solution.x[size : 2 * size]
        errors = np.abs(targets - matrix @ coeffs)
        return ApproximationResult(
            basis=basis,
            basis_coeffs=coeffs,
            per_grid_errors=MinimaxService._per_grid(errors, bounds),
            lower_bound=float(solution.x[-1]) * apothem,
            iterations=int(getattr(solution, "nit", 0)),
            converged=True,
        )

    @staticmethod
    def window_task(f_values, K, L, n, m, center=0j):
        """The two-grid task behind d_{n,m}(f, K, L): f on K, zero on L."""
        if m > n:
            raise InvalidInputError("window low exceeds window high", field="window")
        return FitTask(
            grids=(
                FitGrid(grid=K, targets=f_values),
                FitGrid(grid=L, targets=np.zeros(len(L), dtype=complex)),
            ),
            window=DegreeWindow(m, n),
            center=center,
        )

    @staticmethod
    def estimate_window_distance(f_values, K, L, n, m, options=None, center=0j):
        """Solve the d_{n,m} task and return the full ApproximationResult."""
        task = MinimaxService.window_task(f_values, K, L, n, m, center)
        return MinimaxService.solve_window(task, options)

    @staticmethod
    def d_estimate(f_values, K, L, n, m, options=None):
        """Discrete surrogate of d_{n,m}(f, K, L)."""
        return MinimaxService.estimate_window_distance(f_values, K, L, n, m, options).objective
