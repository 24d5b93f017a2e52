"""Rich progress bars for the long-running hardylab workflows.

Sweeps and probes take few slow steps, check suites many fast batches,
solves an unknown share of a fixed iteration budget. Each gets its own
column layout; the runner picks one by style name.
"""

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)


def _lead(spinner, colour):
    return [SpinnerColumn(spinner_name=spinner), TextColumn(f'[bold {colour}]{{task.description}}'), BarColumn()]


def create_sweep_progress(console=None):
    """Progress bar for sharpness sweeps and Rayleigh probes.

    Shows the completed count and elapsed time, since one epsilon entry
    can take several seconds.
    """
    return Progress(*_lead('dots', 'cyan'), MofNCompleteColumn(), TimeElapsedColumn(), console=console)


def create_check_progress(console=None):
    return Progress(*_lead('line', 'green'), TaskProgressColumn(), console=console)


def create_solver_progress(console=None):
    """Progress bar for multi-start solves, with an ETA."""
    return Progress(*_lead('dots2', 'yellow'), TaskProgressColumn(), TimeRemainingColumn(), console=console)


PROGRESS_STYLES = {
    'sweep': create_sweep_progress,
    'check': create_check_progress,
    'solver': create_solver_progress,
}


def create_progress(style, console=None):
    """Return a progress bar for a named style (sweep, check or solver).

    Raises:
        ValueError: If the style is not registered.
    """
    try:
        factory = PROGRESS_STYLES[style]
    except KeyError:
        raise ValueError(
            f'Unknown progress style "{style}". '
            f'Must be one of: {", ".join(PROGRESS_STYLES)}'
        ) from None
    return factory(console)
