import logging
from dataclasses import dataclass

import numpy as np

from extentions.extensions import worker_pool
from models import DegreeWindow, Disk, FitGrid, FitTask, SolverOptions
from services.compact_set_service import CompactSetService
from services.minimax_service import MinimaxService

logger = logging.getLogger(__name__)

RELATIVE_AGREEMENT = 0.05
ABSOLUTE_AGREEMENT = 1e-9


@dataclass(frozen=True)
class OracleComparison:
    instance: int
    window: DegreeWindow
    points: int
    lawson_objective: float
    oracle_objective: float

    @property
    def agrees(self):
        gap = abs(self.lawson_objective - self.oracle_objective)
        return gap <= RELATIVE_AGREEMENT * self.oracle_objective + ABSOLUTE_AGREEMENT

    def to_dict(self):
        return {
            "instance": self.instance,
            "window": [self.window.low, self.window.high],
            "points": self.points,
            "lawson_objective": repr(self.lawson_objective),
            "oracle_objective": repr(self.oracle_objective),
            "agrees": self.agrees,
        }


class OracleService:
    """Randomized cross-checks of the Lawson solver against the LP oracle."""

    @staticmethod
    def random_task(rng):
        """
        A small two-grid window task: a random polynomial on a disk away from the
        origin and zero on a disk about the origin.
        """
        radius_L = rng.uniform(0.3, 0.6)
        radius_K = rng.uniform(0.2, 0.5)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        distance = rng.uniform(1.8, 3.0)
        L = CompactSetService.sample(Disk(center=0j, radius=radius_L), 10.0)
        K = CompactSetService.sample(
            Disk(center=distance * np.exp(1j * angle), radius=radius_K), 10.0
        )
        coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
        targets = np.polynomial.polynomial.polyval(K.points - K.spec.center, coeffs)
        low = int(rng.integers(0, 4))
        high = low + int(rng.integers(2, 12))
        return FitTask(
            grids=(
                FitGrid(grid=K, targets=targets),
                FitGrid(grid=L, targets=np.zeros(len(L), dtype=complex)),
            ),
            window=DegreeWindow(low, high),
        )

    @staticmethod
    def compare(task, options=None, instance=0):
        options = options or SolverOptions()
        lawson = MinimaxService.solve_window(task, options)
        oracle = MinimaxService.lp_oracle(task, options.facets)
        comparison = OracleComparison(
            instance=instance,
            window=task.window,
            points=task.point_count,
            lawson_objective=lawson.objective,
            oracle_objective=oracle.objective,
        )
        logger.info(
            "event=oracle_compared instance=%d lawson=%.6e oracle=%.6e agrees=%s",
            instance,
            comparison.lawson_objective,
            comparison.oracle_objective,
            comparison.agrees,
        )
        return comparison

    @staticmethod
    def run(seed, instances, options=None, threads=1):
        """Compare the two solvers on ``instances`` random tasks drawn from ``seed``."""
        rng = np.random.default_rng(seed)
        tasks = [OracleService.random_task(rng) for _ in range(instances)]
        with worker_pool(threads) as pool:
            return list(
                pool.map(
                    lambda item: OracleService.compare(item[1], options, item[0]),
                    enumerate(tasks),
                )
            )
