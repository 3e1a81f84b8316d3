"""
Обработчик команды sample: эксперимент спектральной плотности Монте-Карло.
"""

import argparse
import logging
from typing import TextIO

from cli.parsers import Command, add_ensemble_arguments, ensemble_config_from, require_min_samples
from config.settings import ExitCodes
from services.experiment_service import MIN_DENSITY_SAMPLES, ExperimentService
from utils.serialization import write_text


def handle_sample(args: argparse.Namespace, stdout: TextIO) -> int:
    """Запускает эксперимент плотности и пишет JSON-отчет."""
    config = ensemble_config_from(args)
    require_min_samples(args.samples, MIN_DENSITY_SAMPLES)

    service = ExperimentService(workers=args.workers, method=args.method, rescale=args.rescale)
    report = service.run_density_experiment(config, args.samples, args.bins, args.seed)
    write_text(report.to_json(), args.out, stdout)

    if report.mean_check is not None:
        logging.info(f"📊 Проверка среднего: z = {report.mean_check.z_score:.3f}")
    return ExitCodes.OK


def register_sample_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду sample."""
    parser = subparsers.add_parser(Command.SAMPLE.value, help="Гистограмма спектральной плотности Монте-Карло")
    add_ensemble_arguments(parser, default_samples=10_000)
    parser.set_defaults(handler=handle_sample)
