"""Exact fair-division workbench: mechanisms, audits, and cake division.

Thin re-export of the compiled core.  Values cross the boundary as
``fractions.Fraction`` (or ints / "p/q" strings on the way in), so every
number you get back is exact.
"""

from _fairdiv import (  # noqa: F401
    CapExceeded,
    ConfigError,
    ParseError,
    allocate,
    audit,
    bic_audit_exact,
    cake_divide,
    positional_interim,
    replicate,
    replication_ids,
    utilities,
    welfare_value,
)

__all__ = [
    "CapExceeded",
    "ConfigError",
    "ParseError",
    "allocate",
    "audit",
    "bic_audit_exact",
    "cake_divide",
    "positional_interim",
    "replicate",
    "replication_ids",
    "utilities",
    "welfare_value",
]
