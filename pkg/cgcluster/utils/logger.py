import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = 'cgcluster'

# logs go to stderr so that JSON on stdout stays clean
_console = Console(stderr=True)


def setup_logging(level=logging.INFO) -> logging.Logger:
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    if not logger.handlers:
        handler = RichHandler(console=_console, show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter('%(message)s', datefmt='[%X]'))
        logger.addHandler(handler)
    for handler in logger.handlers:
        handler.setLevel(level)
    return logger


def get_logger(name: str) -> logging.Logger:
    if not name.startswith(LOGGER_NAME):
        name = f'{LOGGER_NAME}.{name}'
    return logging.getLogger(name)


def progress_disabled() -> bool:
    return not logging.getLogger(LOGGER_NAME).isEnabledFor(logging.INFO)
