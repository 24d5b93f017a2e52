"""Output formatters for hardylab.

Consistent table, CSV and JSON rendering of inequality reports, sweep
records, check summaries, probe results and solver results. Table mode
prints a rich table; CSV and JSON modes print and return the text.
"""

import csv
import io
import logging

from rich.console import Console
from rich.table import Table

from hardylab.reporting import to_json

logger = logging.getLogger(__name__)
console = Console()


class OutputFormatter:
    """Formats result objects in table, CSV, or JSON output modes."""

    def __init__(self, output_format='table'):
        """Initialize the formatter.

        Args:
            output_format: Output mode - 'table', 'csv', or 'json'.
        """
        if output_format not in ('table', 'csv', 'json'):
            raise ValueError(
                f'Unknown format "{output_format}". '
                f'Must be one of: table, csv, json'
            )
        self.format = output_format

    def _render(self, rows, columns, title, styles=None):
        if self.format == 'json':
            output = to_json(rows)
            console.print(output, end='', markup=False, highlight=False)
            return output
        if self.format == 'csv':
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator='\n')
            writer.writerow([label for _, label in columns])
            for row in rows:
                writer.writerow([row.get(key, '') for key, _ in columns])
            content = buffer.getvalue()
            console.print(content, end='', markup=False, highlight=False)
            return content

        table = Table(title=title, show_lines=False)
        for key, label in columns:
            table.add_column(label, justify='left' if key in ('check', 'classification') else 'right')
        for row in rows:
            style = (styles or {}).get(id(row), '')
            table.add_row(*[_cell(row.get(key)) for key, _ in columns], style=style)
        console.print(table)
        return None

    def format_reports(self, reports, title='Hardy Inequality Reports'):
        """Format HardyReports (one row per field/configuration)."""
        rows = []
        styles = {}
        for i, report in enumerate(reports, 1):
            row = {'#': i, 'check': report.config.get('theorem', '')}
            row.update({k: v for k, v in report.to_dict().items() if k != 'config'})
            row['passed'] = report.passed
            styles[id(row)] = 'green' if report.passed else 'bold red'
            rows.append(row)
        columns = [
            ('#', '#'), ('check', 'Check'), ('lhs', 'LHS'),
            ('rhs_pairwise', 'Pairwise'), ('rhs_correction', 'Correction'),
            ('residual', 'Residual'), ('relative_margin', 'Margin'),
            ('tol', 'Tol'), ('passed', 'Pass'),
        ]
        return self._render(rows, columns, title, styles)

    def format_sweep(self, records, title='Sharpness Sweep'):
        """Format SweepRecords with the prediction column added."""
        rows = [record.to_dict() for record in records]
        columns = [
            ('epsilon', 'epsilon'), ('I', 'I'), ('J', 'J'), ('K', 'K'), ('L', 'L'),
            ('ratio', 'Ratio'), ('prediction', 'Prediction'), ('target', 'Target'),
            ('tol', 'Tol'),
        ]
        return self._render(rows, columns, title)

    def format_checks(self, summaries, title='Comparison Checks'):
        """Format CheckSummaries."""
        rows = []
        styles = {}
        for summary in summaries:
            row = summary.to_dict()
            row['check'] = row.pop('name')
            styles[id(row)] = '' if summary.passed else 'bold red'
            rows.append(row)
        columns = [
            ('check', 'Check'), ('count', 'Samples'), ('failures', 'Failures'),
            ('worst_margin', 'Worst margin'), ('tolerance', 'Tol'), ('passed', 'Pass'),
        ]
        return self._render(rows, columns, title, styles)

    def format_solves(self, results, title='Solver Results'):
        """Format SolveResults (field values are not printed)."""
        rows = []
        for i, result in enumerate(results, 1):
            row = {'#': i}
            row.update({k: v for k, v in result.to_dict().items() if k not in ('grid', 'diagnostics')})
            rows.append(row)
        columns = [
            ('#', '#'), ('classification', 'Kind'), ('energy', 'Energy'),
            ('residual_norm', 'Residual'), ('min_value', 'min u'),
            ('max_value', 'max u'), ('iterations', 'Iter'), ('converged', 'Conv'),
        ]
        return self._render(rows, columns, title)

    def format_probe(self, result, title='Rayleigh Probe'):
        """Format a single ProbeResult."""
        row = result.to_dict()
        row['params'] = ' '.join(f'{v:.6g}' for v in row['params'])
        columns = [
            ('family', 'Family'), ('quotient', 'Quotient'), ('bound', 'Bound'),
            ('evaluations', 'Evaluations'), ('params', 'Params'),
        ]
        return self._render([row], columns, title)


def _cell(value):
    """Render a single table cell."""
    if value is None:
        return '-'
    if isinstance(value, bool):
        return '[green]yes[/green]' if value else '[red]no[/red]'
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)
