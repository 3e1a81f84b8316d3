"""
Обработчик команды spacing: аналитический закон расстояний в CSV.
"""

import argparse
import io
from typing import TextIO

from cli.parsers import Command, add_output_argument, parse_grid, positive_gamma
from config.settings import DYSON_INDICES, ExitCodes
from theory.spacing import evaluate_spacing, gen_model, gen_surmise_asymptotics, wd_model, wl2_model
from utils.exceptions import UsageError
from utils.serialization import write_csv, write_text

LAWS = ("wd", "wl2", "gen")


def handle_spacing(args: argparse.Namespace, stdout: TextIO) -> int:
    positive_gamma(args.gamma, required=args.law == "gen", what=f"--law {args.law}")
    if args.m is not None and args.law != "wl2":
        raise UsageError("--m задается только для --law wl2")
    if args.law == "wl2" and args.m is None:
        args.m = 2
    if args.law == "wl2" and args.m < 2:
        raise UsageError("--m должно быть ≥ 2")
    if args.asymptotic and args.law != "gen":
        raise UsageError("--asymptotic доступен только для --law gen")
    grid = parse_grid(args.grid)
    if args.asymptotic and grid[0] <= 0:
        raise UsageError("Асимптотика требует сетку с MIN > 0")

    if args.law == "wd":
        model = wd_model(args.beta)
    elif args.law == "wl2":
        model = wl2_model(args.beta, args.m)
    else:
        model = gen_model(args.beta, args.gamma)

    header = ["s", "p"]
    columns = [grid, [evaluate_spacing(model, float(s)) for s in grid]]
    if args.asymptotic:
        header.append("asymptotic")
        columns.append([gen_surmise_asymptotics(float(s), args.beta, args.gamma).value for s in grid])

    buffer = io.StringIO()
    write_csv(buffer, header, columns)
    write_text(buffer.getvalue(), args.out, stdout)
    return ExitCodes.OK


def register_spacing_handler(subparsers: argparse._SubParsersAction) -> None:
    """Регистрирует подкоманду spacing."""
    parser = subparsers.add_parser(Command.SPACING.value, help="Аналитический закон расстояний")
    parser.add_argument("--law", choices=LAWS, required=True)
    parser.add_argument("--beta", type=int, choices=DYSON_INDICES, required=True)
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--m", type=int, default=None, help="M для закона N = 2 (по умолчанию 2)")
    parser.add_argument("--grid", default="0:5:501", help="MIN:MAX:POINTS")
    parser.add_argument("--asymptotic", action="store_true")
    add_output_argument(parser)
    parser.set_defaults(handler=handle_spacing)
