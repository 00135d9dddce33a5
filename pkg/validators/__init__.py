"""
Validators package for configuration validation.
"""

from validators.validators import validate_config, validate_document

__all__ = [
    "validate_config",
    "validate_document",
]
