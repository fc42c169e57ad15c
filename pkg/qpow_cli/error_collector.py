"""Collects scenario issues and reference-check failures for display."""
from typing import Iterable, List

from rich.console import Console
from rich.table import Table

from .energy_estimator import CheckResult
from .validator import ERROR, WARNING, ValidationIssue

console = Console(stderr=True)


class ErrorCollector:
    def __init__(self) -> None:
        self.issues: List[ValidationIssue] = []

    def collect(self, issues: Iterable[ValidationIssue]) -> None:
        self.issues.extend(issues)

    def collect_check(self, result: CheckResult) -> None:
        """Record every out-of-tolerance cell; errors when the check is strict."""
        severity = ERROR if result.strict else WARNING
        for cell in result.failures:
            computed = "n/a" if cell.computed is None else f"{cell.computed:.4g}"
            self.issues.append(
                ValidationIssue(
                    file=result.scenario_id,
                    field=f"Table {cell.table} / {cell.row} / {cell.column}",
                    message=(
                        f"computed {computed} vs published {cell.reference:.4g} "
                        f"(relative deviation {cell.deviation:.3g} > {result.tolerance:g})"
                    ),
                    severity=severity,
                )
            )

    @property
    def errors(self) -> List[ValidationIssue]:
        return [i for i in self.issues if i.severity == ERROR]

    @property
    def warnings(self) -> List[ValidationIssue]:
        return [i for i in self.issues if i.severity == WARNING]

    def has_errors(self) -> bool:
        return bool(self.errors)

    def display(self, target: Console = console) -> None:
        """Print all issues as one table; silent when there are none."""
        if not self.issues:
            return
        table = Table(title="Scenario Issues")
        table.add_column("Severity")
        table.add_column("File")
        table.add_column("Field", style="cyan")
        table.add_column("Message")
        for issue in self.issues:
            colour = "red" if issue.severity == ERROR else "yellow"
            table.add_row(f"[{colour}]{issue.severity}[/{colour}]", issue.file, issue.field, issue.message)
        target.print(table)
