"""
qlab CLI - Quaternion Lattice Lab experiment driver

Builds orders, runs lattice point counts and theta kernel checks, and writes
deterministic CSV / JSON reports.
"""

__version__ = "0.1.0"

from .cli import app

__all__ = ["app"]
