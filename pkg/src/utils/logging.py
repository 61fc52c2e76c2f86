"""Configuracao de logging com rich para stderr."""

import logging

from rich.console import Console
from rich.logging import RichHandler

from src.config import settings

stderr_console = Console(stderr=True)


def configure_logging(level: str | None = None) -> None:
    """
    Instala um RichHandler no logger raiz do pacote.

    Args:
        level: Nivel (DEBUG, INFO, ...); por omissao usa settings.log_level
    """
    name = (level or settings.log_level).upper()
    handler = RichHandler(
        console=stderr_console,
        show_path=False,
        rich_tracebacks=True,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))

    root = logging.getLogger("src")
    root.handlers = [handler]
    root.setLevel(getattr(logging, name, logging.WARNING))
    root.propagate = False
