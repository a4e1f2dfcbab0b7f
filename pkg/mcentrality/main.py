"""Command line entry point: ``python -m mcentrality.main COMMAND INPUT [options]``."""

import functools
import logging
from typing import Any, Callable, Optional, Sequence

import click
from sqlalchemy.exc import SQLAlchemyError

from config.config import Config, configure_logging, load_experiment_file
from config.db import init_db
from mcentrality.dtos import (DEFAULT_BETA_FRACTIONS, BetaGrid, EfficiencyNorm,
                              ExperimentConfig, MethodParams, OutputFormat,
                              Preference)
from mcentrality.errors import (EmptyGraphError, GraphParseError, RankingError,
                                UnknownMethodError)
from mcentrality.methods import BASELINES, METHODS
from mcentrality.report import (Table, attack_table, compare_table,
                                mu_sweep_table, ranking_table, rbo_table,
                                sir_table, stats_table, weights_table,
                                write_table)
from mcentrality.services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)

COMMANDS = ("stats", "rank", "weights", "mu-sweep", "attack", "sir", "rbo", "compare")


class CliError(click.ClickException):
    def __init__(self, message: str, exit_code: int = 1) -> None:
        super().__init__(message)
        self.exit_code = exit_code


def exit_code_for(exc: RankingError) -> int:
    if isinstance(exc, GraphParseError):
        return 4
    if isinstance(exc, EmptyGraphError):
        return 3
    if isinstance(exc, UnknownMethodError):
        return 2
    return 1


class MethodList(click.ParamType):
    name = "methods"

    def convert(self, value: Any, param: Any, ctx: Any) -> tuple[str, ...]:
        if isinstance(value, (list, tuple)):
            names = [str(v).strip() for v in value]
        else:
            names = [v.strip() for v in str(value).split(",") if v.strip()]
        if not names:
            self.fail("at least one method is required", param, ctx)
        unknown = [n for n in names if n not in METHODS]
        if unknown:
            self.fail(
                f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHODS)}",
                param,
                ctx,
            )
        return tuple(names)


class FloatList(click.ParamType):
    name = "floats"

    def convert(self, value: Any, param: Any, ctx: Any) -> tuple[float, ...]:
        if isinstance(value, (list, tuple)):
            return tuple(float(v) for v in value)
        try:
            return tuple(float(v) for v in str(value).split(",") if v.strip())
        except ValueError:
            self.fail(f"{value!r} is not a comma separated list of numbers", param, ctx)


METHOD_LIST = MethodList()
FLOAT_LIST = FloatList()


def _load_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> None:
    if not value:
        return
    data = load_experiment_file(value)
    common = data.get("common", {})
    default_map: dict[str, Any] = {k: v for k, v in common.items() if k == "log_level"}
    for command in COMMANDS:
        section = data.get(command, data.get(command.replace("-", "_"), {}))
        default_map[command] = {**common, **section}
    ctx.default_map = default_map


def common_options(fn: Callable) -> Callable:
    options = [
        click.argument("input_path", type=click.Path(exists=True, dir_okay=False)),
        click.option("--lcc/--no-lcc", default=True, help="Restrict to the largest component."),
        click.option("--radius", type=click.IntRange(min=1), default=3, help="Gravity radius."),
        click.option("--ell", type=click.IntRange(min=1), default=3, help="CI ball radius."),
        click.option("--teleport", type=float, default=0.15, help="PageRank teleport probability."),
        click.option(
            "--preference",
            type=click.Choice([p.value for p in Preference]),
            default=Preference.DEGREE.value,
        ),
        click.option(
            "--output-dir",
            envvar="MCENTRALITY_OUTPUT_DIR",
            default=Config.OUTPUT_DIR,
            type=click.Path(file_okay=False),
        ),
        click.option(
            "--format",
            "output_format",
            type=click.Choice([f.value for f in OutputFormat]),
            default=OutputFormat.CSV.value,
        ),
        click.option(
            "--precision",
            type=click.IntRange(min=0),
            default=None,
            help="Fixed decimals; default is 6 significant digits.",
        ),
        click.option("--record/--no-record", default=False, help="Store results in the database."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def handles_errors(fn: Callable) -> Callable:
    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except RankingError as exc:
            raise CliError(str(exc), exit_code_for(exc)) from exc
        except OSError as exc:
            raise CliError(str(exc), 1) from exc
        except SQLAlchemyError as exc:
            raise CliError(f"could not record results: {exc}", 1) from exc

    return wrapper


def build_config(opts: dict[str, Any], **overrides: Any) -> ExperimentConfig:
    params = MethodParams(
        mu=opts.get("mu"),
        radius=opts["radius"],
        ell=opts["ell"],
        teleport=opts["teleport"],
        preference=Preference(opts["preference"]),
    )
    fields: dict[str, Any] = dict(
        input_path=opts["input_path"],
        lcc=opts["lcc"],
        params=params,
        output_dir=opts["output_dir"],
        output_format=OutputFormat(opts["output_format"]),
        precision=opts["precision"],
        record=opts["record"],
        workers=Config.WORKERS,
    )
    fields.update(overrides)
    return ExperimentConfig(**fields)


def emit(service: ExperimentService, command: str, tables: Sequence[Table]) -> None:
    cfg = service.cfg
    for table in tables:
        path = write_table(
            table, cfg.output_dir, cfg.input_path, cfg.output_format, cfg.precision
        )
        click.echo(path)
    if cfg.record:
        init_db()
        service.record(command, tables)


@click.group()
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    is_eager=True,
    expose_value=False,
    callback=_load_config,
    help="TOML experiment file with [common] and per-command tables.",
)
@click.option("--log-level", default=None, help="Logging level, e.g. DEBUG or INFO.")
def cli(log_level: Optional[str]) -> None:
    """Node influence ranking: M-Centrality, baselines and evaluation."""
    configure_logging(log_level)


@cli.command()
@common_options
@handles_errors
def stats(**opts: Any) -> None:
    """Size, degree moments, maximal coreness and epidemic threshold."""
    svc = ExperimentService(build_config(opts))
    emit(svc, "stats", [stats_table(svc.stats())])


@cli.command()
@common_options
@click.option("--method", "methods", type=METHOD_LIST, default="m", help="Comma separated.")
@click.option("--mu", type=click.FloatRange(0.0, 1.0), default=None, help="Fix mu.")
@click.option("--top", type=click.IntRange(min=0), default=None, help="Rows per method.")
@handles_errors
def rank(**opts: Any) -> None:
    """Score and rank nodes with one or more methods."""
    svc = ExperimentService(build_config(opts, methods=opts["methods"], top=opts["top"]))
    tables = []
    for method in opts["methods"]:
        vec, ranking = svc.rank(method)
        parts = svc.m_parts if method == "m" else None
        tables.append(ranking_table(svc.graph, vec, ranking, opts["top"], parts))
    emit(svc, "rank", tables)


@cli.command()
@common_options
@handles_errors
def weights(**opts: Any) -> None:
    """Entropy weights of coreness and degree variation."""
    svc = ExperimentService(build_config(opts))
    emit(svc, "weights", [weights_table(svc.weights())])


@cli.command("mu-sweep")
@common_options
@click.option("--mu", "mu_values", type=FLOAT_LIST, default="0,0.25,0.5,0.75,1")
@click.option("--top", type=click.IntRange(min=1), default=15)
@handles_errors
def mu_sweep(**opts: Any) -> None:
    """Top nodes of M-Centrality for every mu in the sweep."""
    svc = ExperimentService(
        build_config(opts, mu_values=opts["mu_values"], top=opts["top"])
    )
    orders = svc.mu_sweep()
    emit(svc, "mu-sweep", [mu_sweep_table(svc.graph, opts["mu_values"], orders)])


def _read_order_file(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [
            line.split()[0]
            for line in fh
            if line.strip() and not line.lstrip().startswith(("#", "%"))
        ]


@cli.command()
@common_options
@click.option("--method", "methods", type=METHOD_LIST, default="m")
@click.option("--steps", type=click.IntRange(min=0), default=15)
@click.option(
    "--order",
    "order_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="File with one node label per line; replaces --method.",
)
@click.option(
    "--efficiency-norm",
    type=click.Choice([e.value for e in EfficiencyNorm]),
    default=EfficiencyNorm.RESIDUAL.value,
)
@handles_errors
def attack(**opts: Any) -> None:
    """Remove top ranked nodes and track efficiency decline and fragmentation."""
    svc = ExperimentService(build_config(opts, methods=opts["methods"]))
    norm = EfficiencyNorm(opts["efficiency_norm"])
    if opts["order_file"]:
        labels = _read_order_file(opts["order_file"])
        report = svc.attack(None, opts["steps"], order_labels=labels, normalization=norm)
        tables = [attack_table(report, "order")]
    else:
        tables = [
            attack_table(svc.attack(m, opts["steps"], normalization=norm), m)
            for m in opts["methods"]
        ]
    emit(svc, "attack", tables)


@cli.command()
@common_options
@click.option(
    "--method", "methods", type=METHOD_LIST, default=",".join(("m",) + BASELINES)
)
@click.option(
    "--beta-frac",
    "beta_fractions",
    type=FLOAT_LIST,
    default=",".join(str(f) for f in DEFAULT_BETA_FRACTIONS),
)
@click.option("--runs", type=click.IntRange(min=1), default=100)
@click.option("--seed", type=click.IntRange(min=0), default=0)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@handles_errors
def sir(**opts: Any) -> None:
    """Kendall tau between each method and SIR spreading influence."""
    grid = BetaGrid(tuple(opts["beta_fractions"]))
    cfg = build_config(
        opts,
        methods=opts["methods"],
        beta_fractions=grid.fractions,
        runs=opts["runs"],
        master_seed=opts["seed"],
        workers=opts["workers"] or Config.WORKERS,
    )
    svc = ExperimentService(cfg)
    emit(svc, "sir", [sir_table(svc.sir(grid))])


@cli.command()
@common_options
@click.option("--method", "methods", type=METHOD_LIST, default=",".join(BASELINES))
@click.option("--against", type=click.Choice(list(METHODS)), default="m")
@click.option("--p", "ps", type=FLOAT_LIST, default="0.4,0.5,0.6,0.7,0.8,0.9")
@click.option("--depth", type=click.IntRange(min=1), default=None)
@handles_errors
def rbo(**opts: Any) -> None:
    """Rank-biased overlap of each method with a reference ranking."""
    svc = ExperimentService(build_config(opts, methods=opts["methods"]))
    values = svc.rbo(opts["against"], opts["ps"], opts["depth"])
    emit(svc, "rbo", [rbo_table(m, opts["against"], v) for m, v in values.items()])


@cli.command()
@common_options
@click.option("--method", "methods", type=METHOD_LIST, default=",".join(METHODS))
@click.option("--against", type=click.Choice(list(METHODS)), default="m")
@handles_errors
def compare(**opts: Any) -> None:
    """Monotonicity of each ranking and its Kendall tau against a reference."""
    svc = ExperimentService(build_config(opts, methods=opts["methods"]))
    emit(svc, "compare", [compare_table(svc.compare(opts["against"]), opts["against"])])


if __name__ == "__main__":
    cli()
