import json

from models import ConstructionCertificate, SolverOptions
from schemas.schemas import FORMAT_VERSION, PROBLEM_SCHEMA
from utils.config_loader import parse_problem, problem_to_dict
from utils.error_handlers import CertificateFormatError, InvalidInputError
from utils.formats.coefficient_format import parse_polynomial_lines, polynomial_lines
from utils.formats.decimal_format import format_float, parse_float
from validators.validators import validate_document

KIND = "doubly-universal-certificate"

_INTEGER_KEYS = ("n0", "mu", "lambda_mu")
_FLOAT_KEYS = (
    "residual_L",
    "residual_K1",
    "residual_K2",
    "window_error",
    "runge_error_L",
    "runge_error_K1",
)


def _json_line(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def dumps(certificate):
    """
    Render a certificate as text.

    Layout: the format line, the kind, the problem and solver records as one-line
    JSON, the indices and residuals as ``key: value`` lines, then f and p in
    coefficient file format, each announced by ``polynomial <name> <line count>``,
    and a closing ``end``.
    """
    lines = [
        f"format: {FORMAT_VERSION}",
        f"kind: {KIND}",
        f"problem: {_json_line(problem_to_dict(certificate.problem))}",
        f"solver: {_json_line(certificate.solver.to_dict())}",
    ]
    for key in _INTEGER_KEYS:
        lines.append(f"{key}: {int(getattr(certificate, key))}")
    for key in _FLOAT_KEYS:
        lines.append(f"{key}: {format_float(getattr(certificate, key))}")
    for name in ("f", "p"):
        block = polynomial_lines(getattr(certificate, name))
        lines.append(f"polynomial {name} {len(block)}")
        lines.extend(block)
    lines.append("end")
    return "\n".join(lines) + "\n"


class _Reader:
    def __init__(self, text):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.position = 0

    def next(self):
        if self.position >= len(self.lines):
            raise CertificateFormatError("certificate ends early")
        line = self.lines[self.position]
        self.position += 1
        return line

    def value(self, key):
        line = self.next()
        prefix = f"{key}: "
        if not line.startswith(prefix):
            raise CertificateFormatError(
                f"line {self.position}: expected '{key}: ...', got {line[:60]!r}"
            )
        return line[len(prefix) :]

    def block(self, name):
        header = self.next().split(" ")
        if len(header) != 3 or header[:2] != ["polynomial", name] or not header[2].isdigit():
            raise CertificateFormatError(f"line {self.position}: expected 'polynomial {name} N'")
        count = int(header[2])
        return [self.next() for _ in range(count)]


def _json_value(reader, key):
    text = reader.value(key)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"{key} record is not valid JSON: {e.msg}")


def loads(text):
    """
    Parse certificate text produced by ``dumps``.

    :raises CertificateFormatError: On any deviation from the layout.
    """
    reader = _Reader(text)
    if reader.value("format") != str(FORMAT_VERSION):
        raise CertificateFormatError(f"unsupported certificate format, expected {FORMAT_VERSION}")
    if reader.value("kind") != KIND:
        raise CertificateFormatError(f"not a {KIND}")
    problem_data = _json_value(reader, "problem")
    solver_data = _json_value(reader, "solver")
    try:
        problem = parse_problem(validate_document(problem_data, PROBLEM_SCHEMA))
        solver = SolverOptions(
            tol=float(solver_data["tol"]),
            max_iters=int(solver_data["max_iters"]),
            gap_tol=float(solver_data["gap_tol"]),
            facets=int(solver_data["facets"]),
        )
    except InvalidInputError as e:
        raise CertificateFormatError(f"certificate record is invalid: {e}")
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateFormatError(f"solver record is invalid: {e}")

    fields = {}
    for key in _INTEGER_KEYS:
        text_value = reader.value(key)
        if not text_value.isdigit():
            raise CertificateFormatError(f"{key}: {text_value!r} is not a non-negative integer")
        fields[key] = int(text_value)
    for key in _FLOAT_KEYS:
        fields[key] = parse_float(reader.value(key), key)

    f = parse_polynomial_lines(reader.block("f"), field="f")
    p = parse_polynomial_lines(reader.block("p"), field="p")
    if reader.next() != "end" or reader.position != len(reader.lines):
        raise CertificateFormatError("trailing content after the polynomials")
    return ConstructionCertificate(problem=problem, f=f, p=p, solver=solver, **fields)


def write_certificate(path, certificate):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps(certificate))


def read_certificate(path):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except (OSError, UnicodeDecodeError) as e:
        raise CertificateFormatError(f"cannot read certificate {path}: {e}")
    return loads(text)
