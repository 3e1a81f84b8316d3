"""
Обработчик команды density: аналитическая кривая плотности в CSV.
"""

import argparse
import io
import logging
from typing import List, TextIO

from cli.parsers import Command, add_output_argument, parse_grid, positive_gamma, unit_interval
from config.settings import ExitCodes
from theory.density import asymptotic_branch, evaluate_density, theta_gamma_zero, theta_map
from theory.models import DensityModel
from utils.exceptions import UsageError
from utils.serialization import write_csv, write_text

MODELS = ("mp", "gen", "gen0")


def _validate(args: argparse.Namespace) -> None:
    unit_interval(args.c, "--c")
    positive_gamma(args.gamma, required=args.model == "gen", what=f"--model {args.model}")
    if args.model == "gen0" and not args.theta:
        raise UsageError("--model gen0 определена только для ϑ-представления, добавьте --theta")
    if args.asymptotic and args.model != "gen":
        raise UsageError("--asymptotic доступен только для --model gen")
    if args.asymptotic and args.theta:
        raise UsageError("--asymptotic и --theta несовместимы")


def handle_density(args: argparse.Namespace, stdout: TextIO) -> int:
    """Пишет строки x,rho[,asymptotic] или y,theta."""
    _validate(args)
    grid = parse_grid(args.grid, allow_negative=args.theta)
    if args.asymptotic and grid[0] <= 0:
        raise UsageError("Асимптотика требует сетку с MIN > 0")

    model = None if args.model == "gen0" else (
        DensityModel.mp(args.c) if args.model == "mp" else DensityModel.generalized(args.gamma, args.c)
    )
    logging.info(f"🔄 Кривая плотности {model.label() if model else 'gen0'}: {grid.size} точек")

    header: List[str]
    if args.theta:
        header = ["y", "theta"]
        if model is None:
            values = [theta_gamma_zero(float(y)) for y in grid]
        else:
            values = [theta_map(float(y), model) for y in grid]
        columns = [grid, values]
    else:
        header = ["x", "rho"]
        columns = [grid, [evaluate_density(model, float(x)) for x in grid]]
        if args.asymptotic:
            header.append("asymptotic")
            columns.append([asymptotic_branch(float(x), model).value for x in grid])

    buffer = io.StringIO()
    write_csv(buffer, header, columns)
    write_text(buffer.getvalue(), args.out, stdout)
    return ExitCodes.OK


def register_density_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду density."""
    parser = subparsers.add_parser(Command.DENSITY.value, help="Аналитическая спектральная плотность")
    parser.add_argument("--model", choices=MODELS, required=True)
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--grid", required=True, help="MIN:MAX:POINTS")
    parser.add_argument("--theta", action="store_true", help="Вывести ϑ(y) = |y|ρ(y²)")
    parser.add_argument("--asymptotic", action="store_true", help="Добавить столбец асимптотики")
    add_output_argument(parser)
    parser.set_defaults(handler=handle_density)
