"""Deterministic CSV / JSON report writer."""

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from app.core.rationals import format_rational
from app.core.settings import settings
from ..config import RunManifest


def format_value(value: Any) -> str:
    """
    Render one cell: floats at the configured significant digits,
    rationals as "p/q", complex numbers as "re+imj".
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return format(value, settings.float_format())
    if isinstance(value, complex):
        spec = settings.float_format()
        return f"{format(value.real, spec)}{format(value.imag, '+' + spec)}j"
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, float):
        return float(format(value, settings.float_format()))
    if isinstance(value, complex):
        return format_value(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Dict[str, Any]],
              config_hash: str) -> Path:
    """Write rows in the given column order, each tagged with the config hash."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(list(columns) + ["config_hash"])
        for row in rows:
            writer.writerow([format_value(row.get(c)) for c in columns] + [config_hash])
    return path


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_csv(path: Path) -> List[Dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    return write_json(Path(out_dir) / "manifest.json", manifest.model_dump())
