import logging

import numpy as np

from models import (
    ConstructionCaps,
    ConstructionCertificate,
    DegreeWindow,
    FitGrid,
    FitTask,
    SolverOptions,
    VerificationReport,
)
from services.compact_set_service import CompactSetService
from services.minimax_service import MinimaxService
from services.polynomial_service import PolynomialService
from services.runge_service import RungeService
from services.sequence_service import SequenceService
from services.target_service import TargetService
from utils.error_handlers import (
    CandidatesExhausted,
    InternalConsistencyError,
    InvalidInputError,
    SubsequenceExhausted,
)

logger = logging.getLogger(__name__)

# Coefficientwise agreement demanded of the low truncation identity
IDENTITY_TOLERANCE = 1e-12

# First window above mu + 1 has this many extra degrees, doubling afterwards
WINDOW_STEP = 8


def window_tops(low, top_cap):
    """Economical nested window tops low + 8, low + 16, low + 32, ..., ending at top_cap."""
    tops = []
    step = WINDOW_STEP
    while low + step < top_cap:
        tops.append(low + step)
        step *= 2
    tops.append(top_cap)
    return tops


class ConstructionService:
    """Assembly and verification of doubly universal approximants."""

    @staticmethod
    def _sample_problem(problem, density):
        return (
            CompactSetService.sample(problem.L, density),
            CompactSetService.sample(problem.K1, density),
            CompactSetService.sample(problem.K2, density),
        )

    @staticmethod
    def _check_geometry(problem, L, K1, K2):
        CompactSetService.assert_separated(K1, L, problem.density, names=("K1", "L"))
        CompactSetService.assert_separated(K2, L, problem.density, names=("K2", "L"))
        if not CompactSetService.contains_interior(problem.L, problem.zeta0):
            raise InvalidInputError("the center must lie in the interior of L", field="center")
        if problem.omega is not None:
            for name, grid in (("K1", K1), ("K2", K2)):
                if np.any(CompactSetService.interior_mask(problem.omega, grid.points)):
                    raise InvalidInputError(f"{name} meets omega", field=f"sets.{name}")

    @staticmethod
    def _residuals(problem, f, mu, lambda_mu, L, K1, K2):
        """sup |f - g| on L, sup |S_mu f - f1| on K1 and sup |S_lambda_mu f - f2| on K2."""
        approximants = (
            f,
            PolynomialService.partial_sum(f, mu),
            PolynomialService.partial_sum(f, lambda_mu),
        )
        residuals = []
        for approximant, target, grid in zip(
            approximants, (problem.g, problem.f1, problem.f2), (L, K1, K2)
        ):
            difference = PolynomialService.evaluate(approximant, grid.points) - (
                TargetService.evaluate(target, grid.points)
            )
            residuals.append(CompactSetService.discrete_sup_norm(difference))
        return tuple(residuals)

    @staticmethod
    def _identities(f, p, zeta0, mu, lambda_mu):
        """Both truncation identities and the window structure, as three flags."""
        p_at_center = PolynomialService.recenter(p, zeta0)
        mu_ok = (
            f.center == p_at_center.center
            and PolynomialService.max_coefficient_gap(
                PolynomialService.partial_sum(f, mu), p_at_center
            )
            <= IDENTITY_TOLERANCE
        )
        lambda_ok = PolynomialService.partial_sum(f, lambda_mu).same_as(f)
        window_part = PolynomialService.add(f, PolynomialService.scale(p_at_center, -1))
        low = PolynomialService.low_degree(window_part, trim_epsilon=0.0)
        window_ok = (
            PolynomialService.degree(p, trim_epsilon=0.0) <= mu
            and (low == -1 or low >= mu + 1)
            and PolynomialService.degree(f, trim_epsilon=0.0) <= lambda_mu
        )
        return mu_ok, lambda_ok, window_ok

    @staticmethod
    def construct(problem, caps=None, options=None):
        """
        Build f = P(z - zeta0) + p with S_mu(f) = p and S_lambda_mu(f) = f.

        :param problem: ConstructionProblem.
        :param caps: ConstructionCaps (candidate count, degree cap, sequence horizon).
        :param options: SolverOptions for every window solve.
        :return: ConstructionCertificate.
        :raises AdmissibilityRefusal: If lambda_n / n looks bounded (nothing is solved).
        :raises ApproximationFailure: If the Runge step exhausts the degree cap.
        :raises CandidatesExhausted: If no candidate window meets the threshold.
        :raises InternalConsistencyError: If an identity of the assembly fails.
        """
        caps = caps or ConstructionCaps()
        options = options or SolverOptions()
        tolerances = problem.tolerances
        zeta0 = problem.zeta0

        check = SequenceService.refuse_if_bounded(problem.sequence, caps.horizon)
        logger.info(
            "event=sequence_admitted sup_ratio=%.6g attained_at=%d",
            check.sup_ratio,
            check.attained_at,
        )

        L, K1, K2 = ConstructionService._sample_problem(problem, problem.density)
        ConstructionService._check_geometry(problem, L, K1, K2)

        runge = RungeService.joint_approximate(
            problem.g, L, problem.f1, K1, tolerances, caps.max_degree, options, center=zeta0
        )
        p = runge.polynomial

        # shifted frame w = z - zeta0
        K2_shifted = CompactSetService.sample(
            CompactSetService.translate(problem.K2, -zeta0), problem.density
        )
        L_shifted = CompactSetService.sample(
            CompactSetService.translate(problem.L, -zeta0), problem.density
        )
        z_on_K2 = K2_shifted.points + zeta0
        window_targets = TargetService.evaluate(problem.f2, z_on_K2) - PolynomialService.evaluate(
            p, z_on_K2
        )
        grids = (
            FitGrid(grid=K2_shifted, targets=window_targets),
            FitGrid(grid=L_shifted, targets=np.zeros(len(L_shifted), dtype=complex)),
        )
        point_count = len(K2_shifted) + len(L_shifted)
        threshold = tolerances.window_threshold

        subsequence = SequenceService.iter_subsequence(problem.sequence, caps.horizon)
        candidates = [
            (index, mu, lambda_mu)
            for index, (mu, lambda_mu) in enumerate(subsequence, start=1)
            if mu >= runge.degree
        ]
        if not candidates:
            raise SubsequenceExhausted(
                f"no ratio-doubling index up to n={caps.horizon} reaches deg p = {runge.degree}"
            )

        trace = []
        best_objective = None
        accepted = None
        for index, mu, lambda_mu in candidates[: caps.max_candidates]:
            low = mu + 1
            top_cap = min(lambda_mu, caps.max_degree, low + point_count - 1)
            if top_cap < low:
                trace.append({"mu": mu, "lambda_mu": lambda_mu, "skipped": "empty window"})
                if low > caps.max_degree:
                    break
                continue
            for top in window_tops(low, top_cap):
                task = FitTask(grids=grids, window=DegreeWindow(low, top), center=0j)
                result = MinimaxService.solve_window(task, options)
                trace.append(
                    {
                        "mu": mu,
                        "lambda_mu": lambda_mu,
                        "window": [low, top],
                        "objective": result.objective,
                        "lower_bound": result.lower_bound,
                    }
                )
                logger.info(
                    "event=window_solved mu=%d lambda_mu=%d top=%d objective=%.3e threshold=%.3e",
                    mu,
                    lambda_mu,
                    top,
                    result.objective,
                    threshold,
                )
                if best_objective is None or result.objective < best_objective:
                    best_objective = result.objective
                if result.objective < threshold:
                    accepted = (index, mu, lambda_mu, result)
                    break
            if accepted:
                break

        if accepted is None:
            raise CandidatesExhausted(
                f"no candidate window reached the threshold {threshold:g} within "
                f"{caps.max_candidates} candidates and degree {caps.max_degree}",
                best_errors=[best_objective] if best_objective is not None else None,
                trace=trace,
            )

        n0, mu, lambda_mu, result = accepted
        window_polynomial = PolynomialService.translate(result.polynomial, zeta0)
        f = PolynomialService.add(window_polynomial, PolynomialService.recenter(p, zeta0))

        mu_ok, lambda_ok, window_ok = ConstructionService._identities(f, p, zeta0, mu, lambda_mu)
        if not (mu_ok and lambda_ok and window_ok):
            raise InternalConsistencyError(
                f"truncation identities failed (S_mu: {mu_ok}, S_lambda: {lambda_ok}, "
                f"window: {window_ok}) for mu={mu}, lambda_mu={lambda_mu}"
            )

        residual_L, residual_K1, residual_K2 = ConstructionService._residuals(
            problem, f, mu, lambda_mu, L, K1, K2
        )
        bounds = (tolerances.epsilon, 1.0 / tolerances.s, 1.0 / tolerances.s)
        for name, residual, bound in zip(
            ("L", "K1", "K2"), (residual_L, residual_K1, residual_K2), bounds
        ):
            if not residual < bound:
                raise InternalConsistencyError(
                    f"residual on {name} is {residual:.3e}, not below {bound:g}, although "
                    f"both construction steps met their bounds"
                )

        logger.info(
            "event=candidate_accepted n0=%d mu=%d lambda_mu=%d degree=%d window_error=%.3e",
            n0,
            mu,
            lambda_mu,
            f.length - 1,
            result.objective,
        )
        return ConstructionCertificate(
            problem=problem,
            f=f,
            p=p,
            n0=n0,
            mu=mu,
            lambda_mu=lambda_mu,
            residual_L=residual_L,
            residual_K1=residual_K1,
            residual_K2=residual_K2,
            window_error=result.objective,
            runge_error_L=runge.error_L,
            runge_error_K1=runge.error_K1,
            solver=options,
        )

    @staticmethod
    def verify(certificate, density_multiplier=4.0):
        """
        Re-check a certificate on grids ``density_multiplier`` times finer.

        Residuals pass when within twice the certificate bounds; both truncation
        identities and the window structure are re-checked exactly.

        :return: VerificationReport (failures are reported, not raised).
        """
        if not density_multiplier >= 1:
            raise InvalidInputError("density multiplier must be at least 1", field="density-mult")
        problem = certificate.problem
        density = problem.density * density_multiplier
        messages = []

        f, p = certificate.f, certificate.p
        zeta0 = problem.zeta0
        if f.center != PolynomialService.recenter(p, zeta0).center:
            messages.append("f is not expanded about the certificate center")
        if not 0 <= certificate.mu < certificate.lambda_mu:
            messages.append("indices do not satisfy 0 <= mu < lambda_mu")

        mu_ok, lambda_ok, window_ok = ConstructionService._identities(
            f, p, zeta0, certificate.mu, certificate.lambda_mu
        )
        L, K1, K2 = ConstructionService._sample_problem(problem, density)
        residual_L, residual_K1, residual_K2 = ConstructionService._residuals(
            problem, f, certificate.mu, certificate.lambda_mu, L, K1, K2
        )
        report = VerificationReport(
            density=density,
            residual_L=residual_L,
            residual_K1=residual_K1,
            residual_K2=residual_K2,
            bounds=certificate.bounds,
            truncation_mu_ok=mu_ok,
            truncation_lambda_ok=lambda_ok,
            window_ok=window_ok,
            messages=tuple(messages),
        )
        logger.info("event=verified passed=%s density=%r", report.passed, density)
        return report
