import numpy as np

from extentions.extensions import mp_context
from models import CenteredPolynomial, as_mp

# Relative threshold for degree queries
TRIM_RELATIVE = 1e-14

_ZERO = mp_context.mpc(0)


class PolynomialService:
    """Arithmetic on polynomials expanded about an explicit center."""

    @staticmethod
    def evaluate(p, z):
        """
        Evaluate p at z by Horner's rule in extended precision.

        :param p: CenteredPolynomial to evaluate.
        :param z: Complex scalar or array of complex points.
        :return: complex (scalar input) or complex ndarray (array input).
        """
        scalar = np.ndim(z) == 0
        points = np.atleast_1d(np.asarray(z, dtype=complex))
        if not np.all(np.isfinite(points)):
            raise ValueError("evaluation points must be finite")
        if not p.coeffs:
            values = np.zeros(points.shape, dtype=complex)
            return complex(values[0]) if scalar else values
        shifted = np.array([mp_context.mpc(x) - p.center for x in points], dtype=object)
        acc = np.full(points.shape, p.coeffs[-1], dtype=object)
        for coefficient in reversed(p.coeffs[:-1]):
            acc = acc * shifted + coefficient
        values = np.array([complex(v) for v in acc], dtype=complex)
        return complex(values[0]) if scalar else values

    @staticmethod
    def recenter(p, new_center):
        """
        Re-expand p about new_center by repeated synthetic division (Taylor shift).

        The coefficient count is preserved, so the structural degree is unchanged.
        """
        new_center = as_mp(new_center, "new_center")
        if new_center == p.center or len(p.coeffs) < 2:
            return CenteredPolynomial(center=new_center, coeffs=p.coeffs)
        delta = new_center - p.center
        a = list(p.coeffs)
        n = len(a) - 1
        for i in range(n):
            for j in range(n - 1, i - 1, -1):
                a[j] = a[j] + delta * a[j + 1]
        return CenteredPolynomial(center=new_center, coeffs=a)

    @staticmethod
    def translate(p, delta):
        """
        Return q with q(z) = p(z - delta): same coefficients, center moved by delta.

        This is how a window polynomial found in the shifted frame w = z - zeta0 is
        read back in the z frame.
        """
        return CenteredPolynomial(center=p.center + as_mp(delta, "delta"), coeffs=p.coeffs)

    @staticmethod
    def partial_sum(p, N):
        """Taylor partial sum S_N at p's own center: coefficients 0..N retained."""
        if N < 0:
            return CenteredPolynomial(center=p.center, coeffs=())
        if N + 1 >= len(p.coeffs):
            return p
        return CenteredPolynomial(center=p.center, coeffs=p.coeffs[: N + 1])

    @staticmethod
    def _threshold(p, trim_epsilon):
        if trim_epsilon is not None:
            return trim_epsilon
        if not p.coeffs:
            return 0.0
        return TRIM_RELATIVE * max(float(abs(c)) for c in p.coeffs)

    @staticmethod
    def degree(p, trim_epsilon=None):
        """
        Index of the highest coefficient with modulus above the trim threshold.

        The default threshold is 1e-14 times the largest coefficient modulus; pass
        ``trim_epsilon=0.0`` for the exact (structural) degree. Returns -1 for the
        zero polynomial.
        """
        threshold = PolynomialService._threshold(p, trim_epsilon)
        for k in range(len(p.coeffs) - 1, -1, -1):
            if abs(p.coeffs[k]) > threshold:
                return k
        return -1

    @staticmethod
    def low_degree(p, trim_epsilon=None):
        """Index of the lowest coefficient above the trim threshold, -1 for zero."""
        threshold = PolynomialService._threshold(p, trim_epsilon)
        for k, c in enumerate(p.coeffs):
            if abs(c) > threshold:
                return k
        return -1

    @staticmethod
    def add(p, q):
        """Coefficientwise sum, with q re-expanded about p's center first."""
        if q.center != p.center:
            q = PolynomialService.recenter(q, p.center)
        length = max(len(p.coeffs), len(q.coeffs))
        a = list(p.coeffs) + [_ZERO] * (length - len(p.coeffs))
        b = list(q.coeffs) + [_ZERO] * (length - len(q.coeffs))
        return CenteredPolynomial(center=p.center, coeffs=[x + y for x, y in zip(a, b)])

    @staticmethod
    def scale(p, c):
        """Scalar multiple c * p."""
        c = as_mp(c, "c")
        return CenteredPolynomial(center=p.center, coeffs=[c * a for a in p.coeffs])

    @staticmethod
    def max_coefficient_gap(p, q):
        """
        Largest coefficient difference between two polynomials on a common center,
        relative to the largest coefficient modulus of q (absolute when q is zero).
        """
        if q.center != p.center:
            q = PolynomialService.recenter(q, p.center)
        length = max(len(p.coeffs), len(q.coeffs))
        a = list(p.coeffs) + [_ZERO] * (length - len(p.coeffs))
        b = list(q.coeffs) + [_ZERO] * (length - len(q.coeffs))
        if not length:
            return 0.0
        gap = max(float(abs(x - y)) for x, y in zip(a, b))
        reference = max(float(abs(y)) for y in b)
        return gap / reference if reference > 0 else gap
