"""
Command-line interface for cr-discs.
"""

import logging
import sys
from typing import Callable, List, Optional

import click
from colorama import Fore, Style, init

from . import __version__
from .config import ExperimentConfig
from .errors import CRDiscsError
from .experiments import EXPERIMENTS
from .findings import ExperimentResults, Severity
from .runner import ExperimentRunner

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

SEVERITY_COLORS = {
    Severity.LOW: Fore.GREEN,
    Severity.MEDIUM: Fore.YELLOW,
    Severity.HIGH: Fore.RED,
    Severity.CRITICAL: Fore.RED + Style.BRIGHT,
}


def color(ctx: click.Context, code: str) -> str:
    return "" if ctx.obj.get("no_color") else code


def print_finding(ctx: click.Context, finding) -> None:
    """Print a finding with color-coded severity."""
    reset = color(ctx, Style.RESET_ALL)
    code = color(ctx, SEVERITY_COLORS.get(finding.severity, ""))
    click.echo(f"{code}Finding [{finding.finding_type.value}] - Severity: {finding.severity.value}{reset}")
    click.echo(f"  {finding.stage}: {finding.description}")


def print_results(ctx: click.Context, results: ExperimentResults, paths: List[str]) -> None:
    if ctx.obj.get("quiet"):
        return
    reset = color(ctx, Style.RESET_ALL)
    if results.has_failures():
        status = color(ctx, Fore.RED)
    elif results.findings:
        status = color(ctx, Fore.YELLOW)
    else:
        status = color(ctx, Fore.GREEN)
    click.echo(f"{results.name}: {status}{results.status}{reset}")
    for finding in results.findings:
        print_finding(ctx, finding)
    for path in paths:
        click.echo(f"  wrote {path}")


def load_settings(config_path, out, grid, tol, seed, scenario) -> ExperimentConfig:
    """File configuration with command-line overrides applied."""
    settings = ExperimentConfig.load(config_path) if config_path else ExperimentConfig()
    settings.override(grid=grid, tol=tol, seed=seed, out=out)
    if scenario is not None:
        settings.scenario = scenario
    return settings


EXPERIMENT_OPTIONS = (
    click.option('--config', 'config_path', type=click.Path(), help='JSON or TOML configuration file'),
    click.option('--out', '-o', type=click.Path(), help='Output directory (default ./cr_discs_out)'),
    click.option('--grid', type=int, help='Circle grid size, a power of two >= 16'),
    click.option('--tol', type=float, help='Solver tolerance'),
    click.option('--seed', type=int, help='Seed for randomized sampling'),
    click.option('--scenario', '-s', help='Scenario file or bundled scenario name'),
)


def experiment_options(func):
    """Options shared by every experiment subcommand."""
    for option in reversed(EXPERIMENT_OPTIONS):
        func = option(func)
    return func


def execute(ctx: click.Context, options: dict, batch: Callable[[ExperimentRunner], List[ExperimentResults]]) -> int:
    """Run a batch of experiments, write their reports and return the exit code."""
    try:
        runner = ExperimentRunner(load_settings(**options))
        results_list = batch(runner)
    except CRDiscsError as e:
        click.echo(f"{color(ctx, Fore.RED)}Error: {e.message}{color(ctx, Style.RESET_ALL)}", err=True)
        return e.exit_code

    code = 0
    for results in results_list:
        paths = runner.save(results)
        print_results(ctx, results, paths)
        error = results.payload.get("exit_code")
        if error:
            code = code or int(error)
        elif results.has_failures():
            code = code or 1
    return code


@click.group()
@click.version_option(version=__version__, prog_name="cr-discs")
@click.option('--no-color', is_flag=True, help='Disable colored output')
@click.option('--quiet', '-q', is_flag=True, help='Only log warnings and errors')
@click.option('--verbose', '-v', is_flag=True, help='Log solver iterations')
@click.pass_context
def cli(ctx, no_color, quiet, verbose):
    """cr-discs: analytic discs attached to generic CR manifolds."""
    init()
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    ctx.ensure_object(dict)
    ctx.obj.update(no_color=no_color, quiet=quiet)


def experiment_command(name: str, help_text: str):
    """Register a subcommand running one experiment."""

    @cli.command(name=name, help=help_text)
    @experiment_options
    @click.pass_context
    def command(ctx, **options):
        ctx.exit(execute(ctx, options, lambda runner: runner.run_all([name])))

    return command


bishop = experiment_command("bishop", "Solve Bishop's equation and write the disc.")
defect = experiment_command("defect", "Compute the defect of a disc and check the rank law.")
deform_rank = experiment_command("deform-rank", "Tabulate D'(0) of the deformed family.")
wedge = experiment_command("wedge", "Sample the wedge swept by the deformed family.")
isotopy = experiment_command("isotopy", "Deform a disc off the singular set to a point.")
approx = experiment_command("approx", "Tabulate the Gaussian approximation operator.")
remove = experiment_command("remove", "Run the removability pipeline on a scenario.")
selftest = experiment_command("selftest", "Run the invariant suite on every bundled scenario.")


@cli.command()
@click.argument('directory', required=False, type=click.Path())
@click.option('--experiment', '-e', 'experiments', multiple=True, type=click.Choice(sorted(EXPERIMENTS)),
              help='Experiment to run on each scenario (default: remove, or defect without a removability expectation)')
@experiment_options
@click.pass_context
def scenarios(ctx, directory, experiments, **options):
    """Run experiments on every scenario of DIRECTORY (default: the bundled scenarios)."""
    names = experiments or None
    ctx.exit(execute(ctx, options, lambda runner: runner.run_scenarios(directory, names)))


@cli.command()
def version():
    """Show the version of cr-discs."""
    click.echo(f"cr-discs version {__version__}")


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI on ``argv`` and return the exit code."""
    try:
        code = cli.main(args=argv, prog_name="cr-discs", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    return code if isinstance(code, int) else 0


def main():
    """Main entry point for the CLI."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
