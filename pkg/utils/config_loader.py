from contextlib import contextmanager

from extentions.extensions import mp_context
from models import (
    CenteredPolynomial,
    ConstructionCaps,
    ConstructionProblem,
    Disk,
    FormulaSequence,
    PointSet,
    PolynomialTarget,
    Polygon,
    RationalTarget,
    Segment,
    SetUnion,
    SolverOptions,
    TableSequence,
    TableTarget,
    Tolerances,
    complex_pair,
)
from utils.error_handlers import InvalidInputError


@contextmanager
def field_prefix(prefix):
    """Re-raise InvalidInputError with its field placed under ``prefix``."""
    try:
        yield
    except InvalidInputError as e:
        if not e.field:
            field = prefix
        elif e.field.startswith(prefix):
            field = e.field
        else:
            field = f"{prefix}.{e.field}"
        raise InvalidInputError(str(e), field=field) from e


def number(value, field):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{field} is not a number", field=field)


def complex_value(pair, field):
    return complex(number(pair[0], f"{field}[0]"), number(pair[1], f"{field}[1]"))


def mp_value(pair, field):
    """Complex pair at full coefficient precision (decimal strings are not rounded to double)."""
    try:
        return mp_context.mpc(mp_context.mpf(pair[0]), mp_context.mpf(pair[1]))
    except (TypeError, ValueError):
        raise InvalidInputError(f"{field} is not a complex pair", field=field)


def parse_polynomial(data, field):
    center = mp_value(data.get("center", [0, 0]), f"{field}.center")
    coeffs = [mp_value(c, f"{field}.coeffs[{k}]") for k, c in enumerate(data["coeffs"])]
    with field_prefix(field):
        return CenteredPolynomial(center=center, coeffs=coeffs)


def parse_set(data, field):
    kind = data["type"]
    with field_prefix(field):
        if kind == "disk":
            return Disk(
                center=complex_value(data["center"], f"{field}.center"),
                radius=number(data["radius"], f"{field}.radius"),
            )
        if kind == "segment":
            return Segment(
                endpoint_a=complex_value(data["endpoint_a"], f"{field}.endpoint_a"),
                endpoint_b=complex_value(data["endpoint_b"], f"{field}.endpoint_b"),
            )
        if kind == "polygon":
            return Polygon(
                vertices=tuple(
                    complex_value(v, f"{field}.vertices[{k}]")
                    for k, v in enumerate(data["vertices"])
                ),
                filled=data.get("filled", True),
            )
        if kind == "union":
            return SetUnion(
                members=tuple(
                    parse_set(m, f"{field}.members[{k}]") for k, m in enumerate(data["members"])
                )
            )
        if kind == "points":
            return PointSet(
                points=tuple(
                    complex_value(p, f"{field}.points[{k}]") for k, p in enumerate(data["points"])
                )
            )
    raise InvalidInputError(f"unknown set type {kind!r}", field=f"{field}.type")


def parse_target(data, field):
    kind = data["type"]
    if kind == "polynomial":
        return PolynomialTarget(polynomial=parse_polynomial(data, field))
    if kind == "rational":
        return RationalTarget(
            numerator=parse_polynomial(data["numerator"], f"{field}.numerator"),
            denominator=parse_polynomial(data["denominator"], f"{field}.denominator"),
        )
    if kind == "table":
        with field_prefix(field):
            return TableTarget(
                points=tuple(
                    complex_value(p, f"{field}.points[{k}]") for k, p in enumerate(data["points"])
                ),
                values=tuple(
                    complex_value(v, f"{field}.values[{k}]") for k, v in enumerate(data["values"])
                ),
            )
    raise InvalidInputError(f"unknown target type {kind!r}", field=f"{field}.type")


def parse_sequence(data):
    if data["type"] == "formula":
        return FormulaSequence(expression=data["expression"])
    with field_prefix("sequence"):
        return TableSequence(values=tuple(data["values"]))


def parse_tolerances(data):
    with field_prefix("tolerances"):
        return Tolerances(epsilon=number(data["epsilon"], "epsilon"), s=data["s"])


def parse_solver(data, defaults):
    """SolverOptions from the ``solver`` record, falling back to application defaults."""
    data = data or {}
    with field_prefix("solver"):
        return SolverOptions(
            tol=number(data.get("tol", defaults["SOLVER_TOL"]), "tol"),
            max_iters=int(data.get("max_iters", defaults["SOLVER_MAX_ITERS"])),
            gap_tol=number(data.get("gap_tol", defaults["SOLVER_GAP_TOL"]), "gap_tol"),
            facets=int(data.get("facets", defaults["LP_FACETS"])),
        )


def parse_caps(data, defaults):
    data = data or {}
    with field_prefix("caps"):
        return ConstructionCaps(
            max_candidates=int(data.get("max_candidates", defaults["MAX_CANDIDATES"])),
            max_degree=int(data.get("max_degree", defaults["MAX_DEGREE"])),
            horizon=int(data.get("horizon", defaults["SEQUENCE_HORIZON"])),
        )


def parse_problem(data):
    """ConstructionProblem from a validated construct config or certificate record."""
    sets, targets = data["sets"], data["targets"]
    with field_prefix("center"):
        zeta0 = complex_value(data["center"], "center")
    with field_prefix("density"):
        density = number(data["density"], "density")
    return ConstructionProblem(
        g=parse_target(targets["g"], "targets.g"),
        L=parse_set(sets["L"], "sets.L"),
        f1=parse_target(targets["f1"], "targets.f1"),
        K1=parse_set(sets["K1"], "sets.K1"),
        f2=parse_target(targets["f2"], "targets.f2"),
        K2=parse_set(sets["K2"], "sets.K2"),
        zeta0=zeta0,
        sequence=parse_sequence(data["sequence"]),
        tolerances=parse_tolerances(data["tolerances"]),
        density=density,
        omega=parse_set(sets["omega"], "sets.omega") if "omega" in sets else None,
    )


def problem_to_dict(problem):
    """The record parse_problem reads back, with every number as a decimal string."""
    sets = {"L": problem.L.to_dict(), "K1": problem.K1.to_dict(), "K2": problem.K2.to_dict()}
    if problem.omega is not None:
        sets["omega"] = problem.omega.to_dict()
    return {
        "sets": sets,
        "targets": {
            "g": problem.g.to_dict(),
            "f1": problem.f1.to_dict(),
            "f2": problem.f2.to_dict(),
        },
        "center": complex_pair(problem.zeta0),
        "sequence": problem.sequence.to_dict(),
        "tolerances": {"epsilon": repr(float(problem.tolerances.epsilon)), "s": problem.tolerances.s},
        "density": repr(float(problem.density)),
    }
