from mpmath.libmp import repr_dps, to_str

from extentions.extensions import mp_context
from utils.error_handlers import CertificateFormatError

# Digits that make every working-precision value round-trip exactly
ROUND_TRIP_DIGITS = repr_dps(mp_context.prec)


def format_mp(x):
    """Decimal rendering of a working-precision real that parses back to the same value."""
    return to_str(mp_context.mpf(x)._mpf_, ROUND_TRIP_DIGITS)


def format_float(x):
    """Shortest round-trip rendering of a double."""
    return repr(float(x))


def parse_mp(text, field):
    try:
        return mp_context.mpf(text)
    except (TypeError, ValueError):
        raise CertificateFormatError(f"{field}: {text!r} is not a decimal number")


def parse_float(text, field):
    try:
        return float(text)
    except ValueError:
        raise CertificateFormatError(f"{field}: {text!r} is not a decimal number")
