"""hardylab CLI entry point.

Batch front end: one experiment spec file per `run`, reports written to
the output directory, exit status 0 (all checks passed), 1 (a check
failed, see failures.json) or 2 (invalid spec or violated hypothesis).
"""

import sys
import logging

import click
from rich.console import Console
from rich.table import Table

from hardylab import __version__
from hardylab.config import COMMANDS, Config

logger = logging.getLogger(__name__)
console = Console()


@click.group()
@click.version_option(version=__version__, prog_name='hardylab')
def main():
    """hardylab - multipolar Hardy inequalities on space forms."""
    Config.setup_logging()


@main.command()
@click.argument('spec_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--set', 'overrides', multiple=True, metavar='KEY=VALUE',
              help='Override a spec-file key (repeatable).')
@click.option('--output', '-o', 'output_dir', default=None,
              help='Report directory (overrides OUTPUT in the spec).')
@click.option('--format', 'output_format',
              type=click.Choice(['table', 'csv', 'json']),
              default='table', help='Console output format.')
@click.option('--quiet', is_flag=True, help='Suppress console tables and progress bars.')
def run(spec_file, overrides, output_dir, output_format, quiet):
    """Run the experiment described in SPEC_FILE.

    Examples:
        hardylab run specs/thm1_flat.env
        hardylab run specs/sweep_flat.env --set N=4
        hardylab run specs/solve_pm.env --output reports/pm --format json

    Exits 0 when every check passes and 1 when a check fails or the
    grid cannot resolve the experiment. An invalid spec, a violated
    hypothesis or an unexpected crash exits 2.
    """
    from hardylab.errors import DomainError, HardyLabError, HypothesisError, SpecError
    from hardylab.experiment import (
        EXIT_FAILED, EXIT_INVALID, load_spec, parse_overrides, run_experiment,
    )
    from hardylab.formatters import OutputFormatter

    try:
        spec = load_spec(spec_file, overrides=parse_overrides(overrides))
        formatter = None if quiet else OutputFormatter(output_format)
        results = run_experiment(
            spec, output_dir=output_dir, formatter=formatter,
            show_progress=not quiet and output_format == 'table',
        )
    except SpecError as e:
        console.print(f'[red]Invalid spec {spec_file}: {e}[/red]')
        sys.exit(EXIT_INVALID)
    except (HypothesisError, DomainError) as e:
        console.print(f'[red]{e}[/red]')
        sys.exit(EXIT_INVALID)
    except HardyLabError as e:
        console.print(f'[red]FAILED {spec_file}: {e}[/red]')
        sys.exit(EXIT_FAILED)
    except Exception as e:
        logger.exception(f'Experiment {spec_file} crashed')
        console.print(f'[red]Error running {spec_file}: {e}[/red]')
        sys.exit(EXIT_INVALID)

    if output_format == 'table' and not quiet:
        for failure in results['failures']:
            console.print(f'[red]FAILED {failure["check"]}: {failure["message"]}[/red]')
        status = '[bold green]PASSED[/bold green]' if results['passed'] else '[bold red]FAILED[/bold red]'
        console.print(f'{results["command"]}: {status}')
        for path in results['files']:
            console.print(f'  [dim]{path}[/dim]')
    sys.exit(results['exit_code'])


@main.command()
def schema():
    """Show the spec-file keys and experiment commands."""
    from hardylab.experiment import schema_rows

    table = Table(title='Spec File Keys')
    table.add_column('Key', style='bold cyan')
    table.add_column('Meaning')
    for key, description in schema_rows():
        table.add_row(key, description)
    console.print(table)

    commands = Table(title='Commands')
    commands.add_column('COMMAND', style='bold cyan')
    commands.add_column('Description')
    commands.add_column('Requires')
    commands.add_column('Seed')
    for name, entry in COMMANDS.items():
        commands.add_row(
            name,
            entry['description'],
            ', '.join(entry['requires']) or '-',
            'yes' if entry['seeded'] else '-',
        )
    console.print(commands)


# -- Config command group --------------------------------------------------


@main.group()
def config():
    """View configuration."""
    pass


@config.command('show')
def config_show():
    """Show current configuration."""
    table = Table(title='hardylab Configuration')
    table.add_column('Setting', style='bold cyan')
    table.add_column('Value')

    for key, value in Config.as_dict().items():
        table.add_row(key, str(value))

    console.print(table)


if __name__ == '__main__':
    main()
