"""Utility functions for the qlab CLI."""

from .helpers import console, guarded, parse_complex, parse_rational
from .output import format_value, read_csv, write_csv, write_json, write_manifest

__all__ = [
    "console",
    "guarded",
    "parse_complex",
    "parse_rational",
    "format_value",
    "read_csv",
    "write_csv",
    "write_json",
    "write_manifest",
]
