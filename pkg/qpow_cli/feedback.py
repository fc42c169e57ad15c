from contextlib import contextmanager
from typing import Iterator

from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

console = Console(stderr=True)


class FeedbackManager:
    """Spinner on stderr for long simulations; silent when `enabled` is False
    so csv and structured output never share a terminal with it."""

    def __init__(self, enabled: bool = True) -> None:
        self.enabled = enabled
        self.console = console

    @contextmanager
    def spinner(self, description: str) -> Iterator[None]:
        if not self.enabled:
            yield
            return
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            TimeElapsedColumn(),
            console=self.console,
            transient=True,
        ) as progress:
            progress.add_task(description, total=None)
            yield
