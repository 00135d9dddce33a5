import csv
import io

from schemas.schemas import FORMAT_VERSION
from utils.formats.decimal_format import format_float

PROBE_HEADER = ["tau", "sigma", "d_value", "d_root", "converged"]


def probe_csv(report):
    """CSV text of a probe report, preceded by the format line."""
    buffer = io.StringIO()
    buffer.write(f"format: {FORMAT_VERSION}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PROBE_HEADER)
    for row in report.rows:
        writer.writerow(
            [
                row.tau,
                row.sigma,
                format_float(row.d_value),
                format_float(row.d_root),
                "true" if row.converged else "false",
            ]
        )
    return buffer.getvalue()
