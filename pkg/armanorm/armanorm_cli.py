#!/usr/bin/env python3
"""
This file is part of armanorm.
Copyright (c) 2022 spezifisch (https://github.com/spezifisch)

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Affero General Public License as
published by the Free Software Foundation, version 3 of the License.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Affero General Public License for more details.

You should have received a copy of the GNU Affero General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""

import sys
from typing import Any, Callable, Dict, List, Optional

import click
import strictyaml
from loguru import logger

import armanorm.armanorm_commands

from .config_schema import ArmanormSchema
from .run_config import RunConfig


def _int_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers: {value}")


def _float_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma separated numbers: {value}")


def run_options(f: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every subcommand; they override the config file."""
    options = [
        click.option("--order", type=int, default=None, help="Truncation order K of series expansions [256]"),
        click.option("--grid-tol", type=float, default=None, help="Relative tolerance of the supnorm grids [1e-4]"),
        click.option("--budget", type=int, default=None, help="Optimizer evaluations per restart [2000]"),
        click.option("--restarts", type=int, default=None, help="Optimizer restarts [8]"),
        click.option("--seed", type=int, default=None, help="Base seed of every random generator [42]"),
        click.option("--json", "as_json", default=False, is_flag=True, help="Write JSON instead of CSV"),
        click.option("--out", default=None, help="Output file (default: stdout)"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _execute(ctx: click.Context, command: Callable[..., Any], common: Dict[str, Any], **params: Any) -> None:
    overrides = dict(common)
    overrides["output_format"] = "json" if overrides.pop("as_json") else None
    try:
        config = RunConfig.from_sources(ctx.obj or {}, overrides)
    except (TypeError, ValueError) as err:
        logger.error(f"invalid run config: {err}")
        sys.exit(1)

    report = armanorm.armanorm_commands.run_command(command, config, **params)
    if report is None:
        sys.exit(1)
    try:
        report.write()
    except OSError as err:
        logger.error(f"couldn't write report: {err}")
        sys.exit(1)
    sys.exit(0 if report.passed else 1)


@click.group()
@click.option("--config", default=None, help="Run config file (YAML)")
@click.option("--debug", default=False, is_flag=True, help="Set loglevel to DEBUG")
@click.option("--trace", default=False, is_flag=True, help="Set loglevel to TRACE (every grid level and restart)")
@click.pass_context
def run(ctx: click.Context, config: Optional[str], debug: bool, trace: bool) -> None:
    logger.remove()
    if trace:
        # print pretty much every step
        logger.add(sys.stderr, level="TRACE")
    elif debug:
        # print full backtraces and per-call summaries
        logger.add(sys.stderr, level="DEBUG")
    else:
        logger.add(sys.stderr, level="INFO", diagnose=False, backtrace=False)

    ctx.obj = {}
    if config is None:
        return
    # load config file
    try:
        args = strictyaml.load(open(config, "r").read(), schema=ArmanormSchema, label=config)
    except OSError as err:
        logger.error(f"couldn't load config file: {err}")
        sys.exit(1)
    except strictyaml.YAMLError as err:
        logger.error(f"config file parsing error:\n{err}")
        sys.exit(1)
    ctx.obj = args.data


@run.command()
@run_options
@click.pass_context
def examples(ctx: click.Context, **common: Any) -> None:
    """Norm comparison, invertibility pair and geometric truncation table."""
    _execute(ctx, armanorm.armanorm_commands.cmd_examples, common)


@run.command()
@click.option("--grid", type=click.IntRange(min=64), default=1024, help="Points on the circle")
@run_options
@click.pass_context
def figure1(ctx: click.Context, grid: int, **common: Any) -> None:
    """Padé and non-Padé errors of log(1+z/2) on the unit circle."""
    _execute(ctx, armanorm.armanorm_commands.cmd_figure1, common, grid=grid)


@run.command()
@click.option("--m", type=click.IntRange(min=0), default=1, help="Numerator degree")
@click.option("--n", type=click.IntRange(min=0), default=1, help="Denominator degree")
@click.option("--target", type=click.Choice(["log", "quotient", "geometric"]), default="log", help="Target function")
@run_options
@click.pass_context
def optimize(ctx: click.Context, m: int, n: int, target: str, **common: Any) -> None:
    """Best sup-norm (m, n) rational approximation, started from Padé."""
    _execute(ctx, armanorm.armanorm_commands.cmd_optimize, common, m=m, n=n, target=target)


@run.command()
@click.option("--budgets", default="2,4,8", callback=_int_list, help="Comma separated parameter budgets")
@click.option("--k-expand", type=click.IntRange(min=1), default=4096, help="Expansion order of log(1+z)")
@run_options
@click.pass_context
def conjecture(ctx: click.Context, budgets: List[int], k_expand: int, **common: Any) -> None:
    """Truncation against ARMA candidates for log(1+z) in ℓ²."""
    _execute(ctx, armanorm.armanorm_commands.cmd_conjecture, common, budgets=budgets, k_expand=k_expand)


@run.command("spectral-check")
@click.option("--ns", default="2,8,64,512", callback=_int_list, help="Comma separated Toeplitz dimensions")
@click.option(
    "--functions",
    "functions",
    type=click.Choice(sorted(armanorm.armanorm_commands.SPECTRAL_FUNCTIONS)),
    multiple=True,
    help="Generator functions (repeatable, default all)",
)
@click.option("--hinf-order", type=click.IntRange(min=64), default=1024, help="Expansion order of h")
@run_options
@click.pass_context
def spectral_check(ctx: click.Context, ns: List[int], functions: List[str], hinf_order: int, **common: Any) -> None:
    """Toeplitz norms against the supnorm and the singular inner function report."""
    selected = tuple(functions) or tuple(armanorm.armanorm_commands.SPECTRAL_FUNCTIONS)
    _execute(
        ctx, armanorm.armanorm_commands.cmd_spectral_check, common, ns=ns, functions=selected, hinf_order=hinf_order
    )


@run.command()
@click.option("--ar", default="", callback=_float_list, help="Comma separated q_1..q_N")
@click.option("--ma", default="1", callback=_float_list, help="Comma separated p_0..p_M")
@click.option("--length", type=click.IntRange(min=1), default=1000, help="Path length")
@click.option("--burn-in", type=click.IntRange(min=0), default=None, help="Dropped steps [10*order+100]")
@run_options
@click.pass_context
def simulate(
    ctx: click.Context, ar: List[float], ma: List[float], length: int, burn_in: Optional[int], **common: Any
) -> None:
    """Gaussian sample path of an ARMA model as single-column CSV."""
    _execute(ctx, armanorm.armanorm_commands.cmd_simulate, common, ar=ar, ma=ma, length=length, burn_in=burn_in)


if __name__ == "__main__":
    run()
