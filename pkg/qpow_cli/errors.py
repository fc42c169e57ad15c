from typing import List, Optional, Tuple
from pathlib import Path


class QpowError(Exception):
    """Base class for every error raised by qpow_cli."""


class DomainError(QpowError, ValueError):
    """A numeric input breaks the precondition of a model operation."""


class ConfigurationError(QpowError):
    """A scenario lacks data an operation needs."""


class ResourceLimitError(QpowError):
    """A request exceeds what the desk-scale simulator will allocate."""


class UsageError(QpowError):
    """An unknown method, option or combination of options."""


class ReportWriteError(QpowError, OSError):
    """A report destination cannot be written."""


class ScenarioError(QpowError):
    """Base class for scenario loading failures; always names the file."""

    def __init__(self, path: Optional[Path], message: str, field: Optional[str] = None) -> None:
        self.path = path
        self.field = field
        self.message = message
        location = str(path) if path is not None else "<scenario>"
        if field:
            location = f"{location}: {field}"
        super().__init__(f"{location}: {message}")


class ScenarioNotFoundError(ScenarioError):
    pass


class ScenarioSyntaxError(ScenarioError):
    pass


class ScenarioSchemaError(ScenarioError):
    """Schema violation. `issues` holds every (field, message) pair found."""

    def __init__(self, path: Optional[Path], issues: List[Tuple[str, str]]) -> None:
        self.issues = issues
        first_field, first_message = issues[0]
        extra = f" (+{len(issues) - 1} more)" if len(issues) > 1 else ""
        super().__init__(path, f"{first_message}{extra}", field=first_field)


class ScenarioInvariantError(ScenarioError):
    pass
