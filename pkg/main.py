"""
Точка входа командной строки суперстатистических ансамблей Уишарта-Лагерра.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

# Добавляем корневую директорию в путь
sys.path.append(str(Path(__file__).parent))

from cli.handlers.density_handler import register_density_handler  # noqa: E402
from cli.handlers.fit_handler import register_fit_handler  # noqa: E402
from cli.handlers.sample_handler import register_sample_handler  # noqa: E402
from cli.handlers.selfcheck_handler import register_selfcheck_handler  # noqa: E402
from cli.handlers.spacing_handler import register_spacing_handler  # noqa: E402
from cli.handlers.spacing_mc_handler import register_spacing_mc_handler  # noqa: E402
from cli.handlers.synth_handler import register_synth_handler  # noqa: E402
from config.settings import ExitCodes, get_settings  # noqa: E402
from utils.exceptions import SuperstatError, UsageError  # noqa: E402
from utils.logger import setup_logging  # noqa: E402

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Парсер со всеми подкомандами."""
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="superstat",
        description="Суперстатистические ансамбли Уишарта-Лагерра: теория, Монте-Карло и подгонка",
    )
    log_level = "DEBUG" if settings.debug else settings.log_level
    parser.add_argument("--log-level", default=log_level, help="DEBUG, INFO, WARNING, ERROR")
    parser.add_argument("--log-format", choices=["colored", "plain"], default=settings.log_format)
    subparsers = parser.add_subparsers(dest="command", required=True)

    register_sample_handler(subparsers)
    register_density_handler(subparsers)
    register_spacing_handler(subparsers)
    register_spacing_mc_handler(subparsers)
    register_fit_handler(subparsers)
    register_selfcheck_handler(subparsers)
    register_synth_handler(subparsers)
    return parser


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Разбирает флаги и запускает обработчик; возвращает код завершения."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ExitCodes.USAGE if e.code else ExitCodes.OK

    setup_logging(args.log_level, args.log_format)
    try:
        return args.handler(args, stdout)
    except UsageError as e:
        logger.error(f"❌ Ошибка использования: {e}")
        return ExitCodes.USAGE
    except (SuperstatError, OSError) as e:
        logger.error(f"❌ Ошибка выполнения {args.command}: {e}")
        return ExitCodes.RUNTIME_FAILURE
    except KeyboardInterrupt:
        logger.info("👋 Получен сигнал прерывания, завершение работы...")
        return ExitCodes.RUNTIME_FAILURE


if __name__ == "__main__":
    sys.exit(main())
