import typing
from pathlib import Path

import typer

from . import compare, evaluate, optimize, utils

app = typer.Typer(no_args_is_help=True)


def version_callback(show_version: bool):
    """Prints version information."""
    if show_version:
        from .. import __program_name__, __version__

        typer.echo(f"{__program_name__} {__version__}")
        raise typer.Exit()


def license_callback(show_license: bool):
    """Prints license information."""
    if show_license:
        from .. import __license__

        typer.echo(f"{__license__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version",
    ),
    license: bool = typer.Option(
        None,
        "--license",
        callback=license_callback,
        is_eager=True,
        help="Show license",
    ),
): ...


def _config_option(required: bool = True):
    return typer.Option(
        ... if required else None,
        "-c",
        "--config",
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
        resolve_path=True,
        help="Run config (JSON or TOML)",
    )


@app.command("optimize")
def optimize_command(
    config: Path = _config_option(),
    seed: typing.Optional[int] = typer.Option(None, "--seed", help="Override the seed"),
    output_dir: typing.Optional[Path] = typer.Option(
        None, "-o", "--output-dir", help="Directory for the run artifacts"
    ),
    workers: typing.Optional[int] = typer.Option(
        None, "--workers", min=1, help="Concurrent evaluations"
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Verbose output",
    ),
):
    """Run the optimizer selected in the config"""
    with utils.exit_on_error():
        optimize.main(
            config=config, seed=seed, output_dir=output_dir, workers=workers, verbose=verbose
        )


@app.command("compare")
def compare_command(
    config: Path = _config_option(),
    seeds: typing.Optional[str] = typer.Option(
        None, "--seeds", help="Seeds, e.g '1..20' or '1,2,3'"
    ),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help="Seeds run concurrently"),
    output_dir: typing.Optional[Path] = typer.Option(
        None, "-o", "--output-dir", help="Directory for the comparison artifacts"
    ),
    workers: typing.Optional[int] = typer.Option(
        None, "--workers", min=1, help="Concurrent evaluations"
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Verbose output",
    ),
):
    """Run both optimizers on several seeds with equal evaluation budgets"""
    with utils.exit_on_error():
        compare.main(
            config=config,
            seeds=seeds,
            jobs=jobs,
            output_dir=output_dir,
            workers=workers,
            verbose=verbose,
        )


@app.command("eval")
def eval_command(
    config: typing.Optional[Path] = _config_option(required=False),
    values: typing.Optional[str] = typer.Option(
        None, "--values", help="'initial' or a partial assignment, e.g 'R1=5146,C1=2.92'"
    ),
    metrics: typing.Optional[str] = typer.Option(
        None, "--metrics", help="gain_db,power_w,nf_db; bypasses the evaluator"
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Verbose output",
    ),
):
    """Evaluate a single point, or the figure of merit of given metrics"""
    with utils.exit_on_error():
        evaluate.main(config=config, values=values, metrics=metrics, verbose=verbose)


@app.command()
def list_evaluators():
    from rich.console import Console
    from rich.table import Table

    from ..evaluators import EVALUATORS

    table = Table(title="Evaluators")

    table.add_column("Kind", style="cyan", no_wrap=True)
    table.add_column("Parameter", style="magenta")
    table.add_column("Default", style="green")

    for kind, cls in EVALUATORS.items():
        first = True
        for name, default in cls.defaults.items():
            table.add_row(kind.value if first else "", name, repr(default))
            first = False

    console = Console()
    console.print(table)
