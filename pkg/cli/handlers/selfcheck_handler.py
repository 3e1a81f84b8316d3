"""
Обработчик команды selfcheck.
"""

import argparse
from typing import TextIO

from cli.parsers import Command
from config.settings import ExitCodes
from services.selfcheck_service import SelfCheckService, format_report


def handle_selfcheck(args: argparse.Namespace, stdout: TextIO) -> int:
    """Печатает таблицу PASS/FAIL; код 0 только если все проверки пройдены."""
    results = SelfCheckService(quick=args.quick).run()
    stdout.write(format_report(results))
    stdout.flush()
    return ExitCodes.OK if all(result.passed for result in results) else ExitCodes.RUNTIME_FAILURE


def register_selfcheck_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду selfcheck."""
    parser = subparsers.add_parser(Command.SELFCHECK.value, help="Набор самопроверок")
    parser.add_argument("--quick", action="store_true", help="Сокращенные сетки и число выборок")
    parser.set_defaults(handler=handle_selfcheck)
