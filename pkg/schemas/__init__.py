"""
Schemas package for configuration and certificate validation.
"""

from schemas.schemas import (
    CONSTRUCT_CONFIG_SCHEMA,
    PROBE_CONFIG_SCHEMA,
    PROBLEM_SCHEMA,
    SOLVE_CONFIG_SCHEMA,
)

__all__ = [
    "CONSTRUCT_CONFIG_SCHEMA",
    "PROBE_CONFIG_SCHEMA",
    "PROBLEM_SCHEMA",
    "SOLVE_CONFIG_SCHEMA",
]
