from typing import Dict, List

from rich.table import Table

from . import constants
from .documents import RunReport

GOOD = ["pass", "smith-iso", "even", "odd", "tate-even", "tate-odd", "tate-parity", "zero", True]
BAD = ["fail", "not-iso", "none", "mixed", False]


def style_verdict(value: object) -> str:
    if not isinstance(value, (bool, str)):
        return str(value)
    if value in GOOD:
        return f"[green]{value}[/green]"
    if value in BAD:
        return f"[red]{value}[/red]"
    return str(value)


def _cell(value: object) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_cell(v)}" for k, v in value.items())
    return style_verdict(value)


def make_table(title: str, rows: List[Dict[str, object]]) -> Table:
    table = Table(title=title, title_justify="left")
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    for i, key in enumerate(columns):
        table.add_column(key, style="cyan" if i == 0 else None, no_wrap=i == 0)
    for row in rows:
        table.add_row(*[_cell(row.get(key, "")) for key in columns])
    return table


def print_report(report: RunReport) -> None:
    constants.console.print(f"[bold]{report.command}[/bold] [dim]{report.tool} input {report.digest}[/dim]")
    for key, value in report.verdicts.items():
        constants.console.print(f"  {key}: {_cell(value)}")
    for title, rows in report.tables.items():
        if rows:
            constants.console.print(make_table(title, rows))
    constants.console.print(f"[dim]{report.timing:.3f}s[/dim]")
