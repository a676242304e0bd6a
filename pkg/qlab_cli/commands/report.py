"""Report command - aggregate count CSVs into max ratios per bound."""

from pathlib import Path
from typing import Dict, List, Optional

import typer
from rich.table import Table

from app.bounds import BoundReport
from app.core.exceptions import EXIT_CHECK_FAILED, LabException
from app.core.settings import settings
from ..utils import console, read_csv, write_json


class ReportSchemaError(LabException):
    """A CSV that is not a count report."""

    def __init__(self, path: Path, missing: List[str]):
        self.path = path
        self.missing = missing
        super().__init__(f"{path} is not a count report (missing columns: {', '.join(missing)})")


def aggregate(paths: List[Path]) -> Dict[str, Dict[str, float]]:
    """
    Max observed/bound ratio and row count per kind over all rows.

    Args:
        paths: count CSVs written by `count`

    Returns:
        Dict[str, Dict[str, float]]: kind -> {"rows", "max_ratio", "min_first_minimum_ratio"}
    """
    required = BoundReport.columns()
    summary: Dict[str, Dict[str, float]] = {}
    for path in paths:
        rows = read_csv(path)
        if rows:
            missing = [c for c in required if c not in rows[0]]
            if missing:
                raise ReportSchemaError(path, missing)
        for row in rows:
            entry = summary.setdefault(row["kind"], {"rows": 0, "max_ratio": 0.0,
                                                     "min_first_minimum_ratio": float("inf")})
            entry["rows"] += 1
            entry["max_ratio"] = max(entry["max_ratio"], float(row["ratio"]))
            threshold = float(row["threshold"])
            if threshold > 0:
                entry["min_first_minimum_ratio"] = min(entry["min_first_minimum_ratio"],
                                                       float(row["first_minimum"]) / threshold)
    return {kind: summary[kind] for kind in sorted(summary)}


def report_command(paths: List[Path], calibration: Optional[float], out: Optional[Path]) -> None:
    """Print the summary, optionally save it as JSON, exit 1 above the calibration constant."""
    calibration = settings.CALIBRATION_CONSTANT if calibration is None else calibration
    summary = aggregate(paths)
    if not summary:
        console.print("[yellow]⚠️  No report rows found[/yellow]")
    else:
        table = Table(title=f"📈 Max ratios (calibration {calibration:g})")
        table.add_column("kind", style="cyan")
        table.add_column("rows", justify="right")
        table.add_column("max ratio", justify="right")
        table.add_column("verdict", justify="center")
        for kind, entry in summary.items():
            ok = entry["max_ratio"] <= calibration
            table.add_row(kind, str(entry["rows"]), f"{entry['max_ratio']:.6g}",
                          "[green]✓[/green]" if ok else "[red]✗[/red]")
        console.print(table)
    if out is not None:
        payload = {kind: {**entry, "min_first_minimum_ratio": (
            None if entry["min_first_minimum_ratio"] == float("inf") else entry["min_first_minimum_ratio"])}
            for kind, entry in summary.items()}
        write_json(Path(out), {"calibration_constant": calibration, "summary": payload})
    if any(entry["max_ratio"] > calibration for entry in summary.values()):
        raise typer.Exit(EXIT_CHECK_FAILED)
