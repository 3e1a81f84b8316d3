"""
Обработчик команды synth: синтетические доходности с заданным суперстатистическим спектром.
"""

import argparse
import io
from typing import TextIO

from cli.parsers import Command, add_output_argument, positive_gamma, seed_type
from config.settings import DYSON_INDICES, ExitCodes
from ensembles.models import Family
from services.empirical_service import EmpiricalService
from services.experiment_service import ExperimentService
from utils.exceptions import UsageError
from utils.serialization import write_text


def handle_synth(args: argparse.Namespace, stdout: TextIO) -> int:
    family = Family(args.family)
    positive_gamma(args.gamma, required=family != Family.WL, what=f"--family {family.value}")
    if not 2 <= args.n < args.t:
        raise UsageError(f"Нужно 2 ≤ --n < --t, получено n={args.n}, t={args.t}")

    service = EmpiricalService(ExperimentService(workers=args.workers, show_progress=False), seed=args.seed)
    data = service.generate_synthetic_returns(args.n, args.t, family, args.gamma, args.beta)

    buffer = io.StringIO()
    data.to_csv(buffer)
    write_text(buffer.getvalue(), args.out, stdout)
    return ExitCodes.OK


def register_synth_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду synth."""
    parser = subparsers.add_parser(Command.SYNTH.value, help="Синтетический CSV доходностей")
    parser.add_argument("--n", type=int, default=200, help="Число активов")
    parser.add_argument("--t", type=int, default=800, help="Число наблюдений")
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--family", choices=[family.value for family in Family], default=Family.INV_CHI2.value)
    parser.add_argument("--beta", type=int, choices=DYSON_INDICES, default=1)
    parser.add_argument("--seed", type=seed_type, default=0)
    parser.add_argument("--workers", type=int, default=None)
    add_output_argument(parser)
    parser.set_defaults(handler=handle_synth)
