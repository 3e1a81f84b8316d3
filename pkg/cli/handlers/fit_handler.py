"""
Обработчик команды fit: подгонка γ к спектру корреляций из CSV.
"""

import argparse
from typing import TextIO

from cli.parsers import Command, add_output_argument, seed_type
from config.settings import ExitCodes, get_settings
from services.empirical_service import EmpiricalService, FitFamily, load_returns_csv
from services.experiment_service import ExperimentService
from utils.exceptions import UsageError
from utils.serialization import write_text


def handle_fit(args: argparse.Namespace, stdout: TextIO) -> int:
    """Полный конвейер подгонки; ошибки чтения CSV содержат строку и столбец."""
    trim = get_settings().trim_default if args.trim is None else args.trim
    if trim < 0:
        raise UsageError("--trim должно быть ≥ 0")

    data = load_returns_csv(args.input)
    if trim >= data.n_cols:
        raise UsageError(f"--trim={trim} не меньше числа собственных значений {data.n_cols}")

    service = EmpiricalService(ExperimentService(workers=args.workers, show_progress=False), seed=args.seed)
    result = service.fit_returns(data, FitFamily(args.family), trim)
    write_text(result.to_json(), args.out, stdout)
    return ExitCodes.OK


def register_fit_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду fit."""
    parser = subparsers.add_parser(Command.FIT.value, help="Подгонка γ к эмпирическому спектру")
    parser.add_argument("--input", required=True, help="CSV доходностей: заголовок с метками, строки - время")
    parser.add_argument("--family", choices=[family.value for family in FitFamily], required=True)
    parser.add_argument("--trim", type=int, default=None)
    parser.add_argument("--seed", type=seed_type, default=0, help="Seed Монте-Карло для chi2mc")
    parser.add_argument("--workers", type=int, default=None)
    add_output_argument(parser)
    parser.set_defaults(handler=handle_fit)
