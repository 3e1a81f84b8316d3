"""
Обработчик команды spacing-mc: индивидуальные расстояния s_k по Монте-Карло.
"""

import argparse
from typing import TextIO

from cli.parsers import Command, add_ensemble_arguments, ensemble_config_from, require_min_samples
from config.settings import ExitCodes
from services.experiment_service import MIN_SPACING_SAMPLES, ExperimentService
from utils.exceptions import UsageError
from utils.serialization import write_text


def handle_spacing_mc(args: argparse.Namespace, stdout: TextIO) -> int:
    config = ensemble_config_from(args)
    if not 2 <= args.k <= config.n:
        raise UsageError(f"--k должно лежать в [2, {config.n}], получено {args.k}")
    require_min_samples(args.samples, MIN_SPACING_SAMPLES)

    service = ExperimentService(workers=args.workers, method=args.method)
    report = service.run_spacing_experiment(config, args.k, args.samples, args.bins, args.seed)
    write_text(report.to_json(), args.out, stdout)
    return ExitCodes.OK


def register_spacing_mc_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду spacing-mc."""
    parser = subparsers.add_parser(Command.SPACING_MC.value, help="Распределение s_k по Монте-Карло")
    add_ensemble_arguments(parser, default_samples=MIN_SPACING_SAMPLES)
    parser.add_argument("--k", type=int, required=True, help="Номер расстояния, k ≥ 2")
    parser.set_defaults(handler=handle_spacing_mc)
