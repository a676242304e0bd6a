#!/usr/bin/env python
"""
qlab - Management Script

Entry point for the Quaternion Lattice Lab experiment driver.

Usage:
    python manage.py invariants --split --level 6 --ell 2
    python manage.py count type1 --level 6 --ell 3 --delta 0.1 --T 2
    python manage.py count type2 --n 1 --T 1.5
    python manage.py theta eval --family maass --z i --s i
    python manage.py theta verify-lift --newform delta --z i
    python manage.py checks --level 6
    python manage.py report results/counts.csv
    python manage.py version
    python manage.py --help

Examples:
    # Sweep an experiment grid with four workers
    python manage.py count type1 --config experiment.json --workers 4

    # Atkin-Lehner relation for every ℓ | 6
    python manage.py theta check-al --level 6
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from qlab_cli.cli import app  # noqa: E402


if __name__ == "__main__":
    app()
