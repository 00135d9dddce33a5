import numpy as np
from scipy.spatial import cKDTree

from models import PolynomialTarget, RationalTarget, TableTarget
from services.polynomial_service import PolynomialService
from utils.error_handlers import TargetEvaluationError

# Smallest denominator modulus admitted for rational targets
POLE_GUARD = 1e-8

# Relative distance within which a table point matches a query point
TABLE_MATCH = 1e-12


class TargetService:
    """Evaluation of target rules on sample points."""

    @staticmethod
    def evaluate(target, points):
        """
        Evaluate a target rule at every point.

        :param target: PolynomialTarget, RationalTarget or TableTarget.
        :param points: Complex array of evaluation points.
        :return: Complex ndarray aligned with points.
        """
        points = np.asarray(points, dtype=complex).reshape(-1)
        if isinstance(target, PolynomialTarget):
            values = PolynomialService.evaluate(target.polynomial, points)
        elif isinstance(target, RationalTarget):
            values = TargetService._rational(target, points)
        elif isinstance(target, TableTarget):
            values = TargetService._table(target, points)
        else:
            raise TargetEvaluationError(
                f"unknown target type {type(target).__name__}", field="type"
            )
        if not np.all(np.isfinite(values)):
            raise TargetEvaluationError("target produced non-finite values", field="target")
        return values

    @staticmethod
    def _rational(target, points):
        denominator = PolynomialService.evaluate(target.denominator, points)
        close = np.abs(denominator) < POLE_GUARD
        if np.any(close):
            z = points[np.argmax(close)]
            raise TargetEvaluationError(
                f"rational target has a pole near {z!r} (|denominator| < {POLE_GUARD:g})",
                field="denominator",
            )
        return PolynomialService.evaluate(target.numerator, points) / denominator

    @staticmethod
    def _table(target, points):
        table = np.array(target.points, dtype=complex)
        if table.size == 0:
            raise TargetEvaluationError("target table is empty", field="points")
        tree = cKDTree(np.column_stack([table.real, table.imag]))
        distances, index = tree.query(np.column_stack([points.real, points.imag]), k=1)
        missing = distances > TABLE_MATCH * (1.0 + np.abs(points))
        if np.any(missing):
            z = points[np.argmax(missing)]
            raise TargetEvaluationError(f"target table has no value at {z!r}", field="points")
        return np.array(target.values, dtype=complex)[index]
