"""
Настройка логирования.
"""

import logging
import sys

import coloredlogs

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(level: str = "INFO", fmt: str = "colored") -> None:
    """Конфигурирует корневой логгер. Логи всегда идут в stderr, данные в stdout."""
    level = level.upper()
    if fmt == "colored":
        coloredlogs.install(
            level=level,
            fmt=LOG_FORMAT,
            datefmt=DATE_FORMAT,
            stream=sys.stderr,
        )
    else:
        logging.basicConfig(
            format=LOG_FORMAT,
            level=level,
            datefmt=DATE_FORMAT,
            stream=sys.stderr,
            force=True,
        )
