import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from extentions.extensions import mp_context
from utils.error_handlers import InvalidInputError
from utils.formats.decimal_format import format_mp


def as_complex(value, field_name="value"):
    """Coerce a scalar to a finite Python complex or raise InvalidInputError."""
    try:
        z = complex(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{field_name} is not a complex scalar", field=field_name)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"{field_name} must be finite", field=field_name)
    return z


def as_mp(value, field_name="value"):
    """Coerce a scalar to an extended-precision complex of the shared context."""
    if isinstance(value, type(mp_context.mpc(0))):
        z = value
    elif isinstance(value, type(mp_context.mpf(0))):
        z = mp_context.mpc(value)
    else:
        z = mp_context.mpc(as_complex(value, field_name))
    if not mp_context.isfinite(z):
        raise InvalidInputError(f"{field_name} must be finite", field=field_name)
    return z


def complex_pair(z):
    """Render a complex scalar as the ``[re, im]`` pair used in config documents."""
    z = complex(z)
    return [repr(z.real), repr(z.imag)]


def mp_pair(z):
    """``[re, im]`` pair of an extended-precision value, with every working digit kept."""
    return [format_mp(z.real), format_mp(z.imag)]


# ------------------ POLYNOMIALS ------------------


@dataclass(frozen=True, eq=False)
class CenteredPolynomial:
    """
    Polynomial sum(coeffs[k] * (z - center)**k) with extended-precision coefficients.

    An empty coefficient list is the zero polynomial. Trailing zero coefficients are
    kept: the coefficient layout is what makes degree windows structural.
    """

    center: object
    coeffs: Tuple[object, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "center", as_mp(self.center, "center"))
        object.__setattr__(
            self,
            "coeffs",
            tuple(as_mp(c, f"coeffs[{k}]") for k, c in enumerate(self.coeffs)),
        )

    @property
    def length(self):
        return len(self.coeffs)

    def same_as(self, other):
        """Coefficient-exact equality, including the center."""
        return self.center == other.center and self.coeffs == other.coeffs

    def to_dict(self):
        return {
            "center": mp_pair(self.center),
            "coeffs": [mp_pair(c) for c in self.coeffs],
        }


@dataclass(frozen=True)
class DegreeWindow:
    """The (m, n) pair of ``deg^- p >= m`` and ``deg p <= n``."""

    low: int
    high: int

    def __post_init__(self):
        if int(self.low) < 0:
            raise InvalidInputError("window.low must be non-negative", field="window.low")
        if int(self.high) < int(self.low):
            raise InvalidInputError("window.low must not exceed window.high", field="window")

    @property
    def size(self):
        return self.high - self.low + 1

    def admits(self, low_degree, degree):
        """Window compliance, with the zero polynomial (-1, -1) vacuously compliant."""
        if degree < 0:
            return True
        return low_degree >= self.low and degree <= self.high


# ------------------ COMPACT SETS ------------------


class SetSpec:
    """Base class of the declarative compact set variants."""

    kind = "abstract"

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(SetSpec):
    center: complex
    radius: float
    kind = "disk"

    def __post_init__(self):
        object.__setattr__(self, "center", as_complex(self.center, "center"))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidInputError("disk radius must be positive", field="radius")
        object.__setattr__(self, "radius", float(self.radius))

    def to_dict(self):
        return {"type": "disk", "center": complex_pair(self.center), "radius": repr(self.radius)}


@dataclass(frozen=True)
class Segment(SetSpec):
    endpoint_a: complex
    endpoint_b: complex
    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "endpoint_a", as_complex(self.endpoint_a, "endpoint_a"))
        object.__setattr__(self, "endpoint_b", as_complex(self.endpoint_b, "endpoint_b"))
        if self.endpoint_a == self.endpoint_b:
            raise InvalidInputError("segment endpoints coincide", field="endpoint_b")

    def to_dict(self):
        return {
            "type": "segment",
            "endpoint_a": complex_pair(self.endpoint_a),
            "endpoint_b": complex_pair(self.endpoint_b),
        }


@dataclass(frozen=True)
class Polygon(SetSpec):
    vertices: Tuple[complex, ...]
    filled: bool = True
    kind = "polygon"

    def __post_init__(self):
        vertices = tuple(
            as_complex(v, f"vertices[{k}]") for k, v in enumerate(self.vertices)
        )
        if len(vertices) < 3:
            raise InvalidInputError("polygon needs at least 3 vertices", field="vertices")
        doubled_area = sum(
            (a.conjugate() * b).imag for a, b in zip(vertices, vertices[1:] + vertices[:1])
        )
        if abs(doubled_area) <= 1e-12 * max(abs(v) for v in vertices) ** 2:
            raise InvalidInputError("polygon vertices are collinear", field="vertices")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "filled", bool(self.filled))

    def to_dict(self):
        return {
            "type": "polygon",
            "vertices": [complex_pair(v) for v in self.vertices],
            "filled": self.filled,
        }


@dataclass(frozen=True)
class SetUnion(SetSpec):
    members: Tuple[SetSpec, ...]
    kind = "union"

    def __post_init__(self):
        if not self.members:
            raise InvalidInputError("union needs at least one member", field="members")
        object.__setattr__(self, "members", tuple(self.members))

    def to_dict(self):
        return {"type": "union", "members": [m.to_dict() for m in self.members]}


@dataclass(frozen=True)
class PointSet(SetSpec):
    points: Tuple[complex, ...]
    kind = "points"

    def __post_init__(self):
        points = tuple(as_complex(p, f"points[{k}]") for k, p in enumerate(self.points))
        if not points:
            raise InvalidInputError("point set is empty", field="points")
        object.__setattr__(self, "points", points)

    def to_dict(self):
        return {"type": "points", "points": [complex_pair(p) for p in self.points]}


@dataclass(frozen=True, eq=False)
class SampledSet:
    """Deterministic discretization of a SetSpec."""

    spec: SetSpec
    points: np.ndarray
    boundary_density: float
    interior_density: float

    def __post_init__(self):
        points = np.array(self.points, dtype=complex).reshape(-1)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)


# ------------------ TARGETS ------------------


class TargetFunction:
    """Base class of the evaluable target rules."""

    kind = "abstract"


@dataclass(frozen=True, eq=False)
class PolynomialTarget(TargetFunction):
    polynomial: CenteredPolynomial
    kind = "polynomial"

    def to_dict(self):
        data = self.polynomial.to_dict()
        data["type"] = "polynomial"
        return data


@dataclass(frozen=True, eq=False)
class RationalTarget(TargetFunction):
    numerator: CenteredPolynomial
    denominator: CenteredPolynomial
    kind = "rational"

    def to_dict(self):
        return {
            "type": "rational",
            "numerator": self.numerator.to_dict(),
            "denominator": self.denominator.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class TableTarget(TargetFunction):
    points: Tuple[complex, ...]
    values: Tuple[complex, ...]
    kind = "table"

    def __post_init__(self):
        points = tuple(as_complex(p, f"points[{k}]") for k, p in enumerate(self.points))
        values = tuple(as_complex(v, f"values[{k}]") for k, v in enumerate(self.values))
        if len(points) != len(values):
            raise InvalidInputError("table points and values differ in length", field="values")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    def to_dict(self):
        return {
            "type": "table",
            "points": [complex_pair(p) for p in self.points],
            "values": [complex_pair(v) for v in self.values],
        }


@dataclass(frozen=True)
class Tolerances:
    """The epsilon of the L-bound and the s of the 1/s bounds."""

    epsilon: float
    s: int

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidInputError("epsilon must be positive", field="tolerances.epsilon")
        if int(self.s) != self.s or int(self.s) < 1:
            raise InvalidInputError("s must be a positive integer", field="tolerances.s")
        object.__setattr__(self, "s", int(self.s))

    @property
    def runge_bounds(self):
        """Bounds (on L, on K1) demanded of the Runge polynomial."""
        return self.epsilon / 2.0, 1.0 / (2.0 * self.s)

    @property
    def window_threshold(self):
        return min(self.epsilon / 2.0, 1.0 / (2.0 * self.s))


# ------------------ MINIMAX ------------------


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iters: int = 500
    gap_tol: float = 1e-4
    facets: int = 16

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidInputError("solver.tol must be positive", field="solver.tol")
        if int(self.max_iters) < 1:
            raise InvalidInputError("solver.max_iters must be at least 1", field="solver.max_iters")
        if self.gap_tol < 0:
            raise InvalidInputError("solver.gap_tol must be non-negative", field="solver.gap_tol")
        if int(self.facets) < 3:
            raise InvalidInputError("solver.facets must be at least 3", field="solver.facets")

    def to_dict(self):
        return {
            "tol": repr(float(self.tol)),
            "max_iters": int(self.max_iters),
            "gap_tol": repr(float(self.gap_tol)),
            "facets": int(self.facets),
        }


@dataclass(frozen=True, eq=False)
class FitGrid:
    """One grid of a FitTask with the target values aligned to its points."""

    grid: SampledSet
    targets: np.ndarray

    def __post_init__(self):
        targets = np.array(self.targets, dtype=complex).reshape(-1)
        if len(targets) != len(self.grid):
            raise InvalidInputError("target list length differs from grid length", field="targets")
        if not np.all(np.isfinite(targets)):
            raise InvalidInputError("target values must be finite", field="targets")
        targets.setflags(write=False)
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True, eq=False)
class FitTask:
    grids: Tuple[FitGrid, ...]
    window: DegreeWindow
    center: complex = 0j

    def __post_init__(self):
        if not self.grids:
            raise InvalidInputError("fit task has no grids", field="grids")
        object.__setattr__(self, "grids", tuple(self.grids))
        object.__setattr__(self, "center", as_complex(self.center, "center"))

    @property
    def point_count(self):
        return sum(len(g.grid) for g in self.grids)


@dataclass(frozen=True, eq=False)
class OrthogonalBasis:
    """
    Arnoldi basis of span{(z - center)**k : low <= k <= high} on a sample.

    ``values`` holds the basis at the sample points (columns orthogonal with squared
    norm equal to the point count); ``hessenberg`` and ``start_norms`` record the
    recurrence needed to recover monomial coefficients.
    """

    center: complex
    rho: float
    window: DegreeWindow
    start_norms: Tuple[float, ...]
    hessenberg: np.ndarray
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class ApproximationResult:
    """
    Minimax polynomial of a FitTask together with its achieved discrete errors.

    ``polynomial`` is converted from the orthogonal-basis coefficients on first
    access; errors are measured in the orthogonal basis at the sample points.
    """

    basis: OrthogonalBasis
    basis_coeffs: np.ndarray
    per_grid_errors: Tuple[float, ...]
    lower_bound: float
    iterations: int
    converged: bool

    @property
    def objective(self):
        return max(self.per_grid_errors)

    @property
    def window(self):
        return self.basis.window

    @cached_property
    def polynomial(self):
        from services.minimax_service import MinimaxService

        return MinimaxService.to_monomial(self.basis, self.basis_coeffs)

    def to_dict(self):
        return {
            "objective": repr(float(self.objective)),
            "per_grid_errors": [repr(float(e)) for e in self.per_grid_errors],
            "lower_bound": repr(float(self.lower_bound)),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "window": [self.window.low, self.window.high],
        }


# ------------------ RUNGE STEP ------------------


@dataclass(frozen=True, eq=False)
class RungeApproximation:
    """The Runge polynomial p with its achieved errors and the schedule trace."""

    polynomial: CenteredPolynomial
    degree: int
    error_L: float
    error_K1: float
    trace: Tuple[dict, ...] = ()


# ------------------ SEQUENCES AND CONSTRUCTION ------------------


class Verdict(Enum):
    DIVERGING = "diverging"
    BOUNDED_SO_FAR = "bounded-so-far"


@dataclass(frozen=True)
class RatioCheck:
    sup_ratio: float
    attained_at: int
    verdict: Verdict

    def to_dict(self):
        return {
            "sup_ratio": repr(float(self.sup_ratio)),
            "attained_at": self.attained_at,
            "verdict": self.verdict.value,
        }


class SequenceSpec:
    """Base class of the (lambda_n) sequence rules."""

    kind = "abstract"


@dataclass(frozen=True)
class FormulaSequence(SequenceSpec):
    expression: str
    kind = "formula"

    def to_dict(self):
        return {"type": "formula", "expression": self.expression}


@dataclass(frozen=True)
class TableSequence(SequenceSpec):
    values: Tuple[int, ...]
    kind = "table"

    def __post_init__(self):
        if not self.values:
            raise InvalidInputError("sequence table is empty", field="sequence.values")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def to_dict(self):
        return {"type": "table", "values": list(self.values)}


@dataclass(frozen=True)
class ConstructionCaps:
    max_candidates: int = 12
    max_degree: int = 2048
    horizon: int = 4096

    def __post_init__(self):
        if self.max_candidates < 1 or self.max_degree < 1 or self.horizon < 10:
            raise InvalidInputError("caps out of range", field="caps")

    def to_dict(self):
        return {
            "max_candidates": self.max_candidates,
            "max_degree": self.max_degree,
            "horizon": self.horizon,
        }


@dataclass(frozen=True)
class ConstructionProblem:
    """Everything construct needs, recorded verbatim in the certificate."""

    g: TargetFunction
    L: SetSpec
    f1: TargetFunction
    K1: SetSpec
    f2: TargetFunction
    K2: SetSpec
    zeta0: complex
    sequence: SequenceSpec
    tolerances: Tolerances
    density: float
    omega: Optional[SetSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "zeta0", as_complex(self.zeta0, "center"))
        if not (math.isfinite(self.density) and self.density > 0):
            raise InvalidInputError("density must be positive", field="density")


@dataclass(frozen=True, eq=False)
class ConstructionCertificate:
    problem: ConstructionProblem
    f: CenteredPolynomial
    p: CenteredPolynomial
    n0: int
    mu: int
    lambda_mu: int
    residual_L: float
    residual_K1: float
    residual_K2: float
    window_error: float
    runge_error_L: float
    runge_error_K1: float
    solver: SolverOptions = field(default_factory=SolverOptions)

    @property
    def bounds(self):
        """Bounds (L, K1, K2) the three residuals must satisfy."""
        tol = self.problem.tolerances
        return tol.epsilon, 1.0 / tol.s, 1.0 / tol.s


@dataclass(frozen=True)
class VerificationReport:
    density: float
    residual_L: float
    residual_K1: float
    residual_K2: float
    bounds: Tuple[float, float, float]
    truncation_mu_ok: bool
    truncation_lambda_ok: bool
    window_ok: bool
    messages: Tuple[str, ...] = ()

    @property
    def residuals_ok(self):
        residuals = (self.residual_L, self.residual_K1, self.residual_K2)
        return all(r <= 2.0 * b for r, b in zip(residuals, self.bounds))

    @property
    def passed(self):
        return (
            self.residuals_ok
            and self.truncation_mu_ok
            and self.truncation_lambda_ok
            and self.window_ok
            and not self.messages
        )

    def to_dict(self):
        return {
            "passed": self.passed,
            "density": repr(float(self.density)),
            "residual_L": repr(float(self.residual_L)),
            "residual_K1": repr(float(self.residual_K1)),
            "residual_K2": repr(float(self.residual_K2)),
            "slack_bounds": [repr(2.0 * b) for b in self.bounds],
            "truncation_mu_ok": self.truncation_mu_ok,
            "truncation_lambda_ok": self.truncation_lambda_ok,
            "window_ok": self.window_ok,
            "messages": list(self.messages),
        }


# ------------------ DECAY PROBE ------------------


@dataclass(frozen=True)
class Schedule:
    """(tau, sigma) pairs of window top and window bottom degrees."""

    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(t), int(s)) for t, s in self.pairs)
        if not pairs:
            raise InvalidInputError("schedule is empty", field="schedule")
        for k, (tau, sigma) in enumerate(pairs):
            if sigma < 1 or tau <= sigma:
                raise InvalidInputError(
                    f"schedule entry {k} needs tau > sigma >= 1", field=f"schedule[{k}]"
                )
            if k and tau <= pairs[k - 1][0]:
                raise InvalidInputError(
                    f"schedule tau not strictly increasing at entry {k}", field=f"schedule[{k}]"
                )
        object.__setattr__(self, "pairs", pairs)


@dataclass(frozen=True)
class ProbeRow:
    tau: int
    sigma: int
    d_value: float
    lower_bound: float
    converged: bool
    precision_limited: bool = False

    @property
    def d_root(self):
        if self.d_value <= 0:
            return 0.0
        return self.d_value ** (1.0 / self.tau)


@dataclass(frozen=True)
class ProbeReport:
    rows: Tuple[ProbeRow, ...]
    theta_hat: float

    @property
    def head(self):
        return self.rows[: len(self.rows) // 2]

    @property
    def tail(self):
        return self.rows[len(self.rows) // 2 :]

    def decay_trend(self):
        """True when the tail-half max d_root does not exceed the head-half max."""
        head = [r.d_root for r in self.head if not r.precision_limited] or [0.0]
        tail = [r.d_root for r in self.tail if not r.precision_limited] or [0.0]
        return max(tail) <= max(head)
