from extentions.extensions import mp_context
from models import CenteredPolynomial
from utils.error_handlers import CertificateFormatError
from utils.formats.decimal_format import format_mp, parse_mp


def polynomial_lines(p):
    """
    Coefficient file lines of p: ``center re im`` then ``k re im`` for every
    stored coefficient, zeros included.
    """
    lines = [f"center {format_mp(p.center.real)} {format_mp(p.center.imag)}"]
    for k, c in enumerate(p.coeffs):
        lines.append(f"{k} {format_mp(c.real)} {format_mp(c.imag)}")
    return lines


def parse_polynomial_lines(lines, field="polynomial"):
    """Inverse of polynomial_lines; coefficient indices must run 0, 1, 2, ..."""
    if not lines:
        raise CertificateFormatError(f"{field}: missing center line")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "center":
        raise CertificateFormatError(f"{field}: expected 'center re im', got {lines[0]!r}")
    center = mp_context.mpc(parse_mp(head[1], field), parse_mp(head[2], field))
    coeffs = []
    for k, line in enumerate(lines[1:]):
        parts = line.split(" ")
        if len(parts) != 3 or parts[0] != str(k):
            raise CertificateFormatError(f"{field}: expected coefficient {k}, got {line!r}")
        coeffs.append(mp_context.mpc(parse_mp(parts[1], field), parse_mp(parts[2], field)))
    return CenteredPolynomial(center=center, coeffs=coeffs)


def write_polynomial(path, p):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(polynomial_lines(p)) + "\n")


def read_polynomial(path):
    with open(path, encoding="utf-8") as handle:
        return parse_polynomial_lines(handle.read().splitlines(), field=str(path))
