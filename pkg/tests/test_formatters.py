"""Tests for OutputFormatter and the progress helpers."""

import csv
import io
import json

import pytest
from rich.progress import Progress

from hardylab.comparison import CheckSummary
from hardylab.formatters import OutputFormatter, _cell
from hardylab.hardy import HardyReport
from hardylab.progress import PROGRESS_STYLES, create_progress
from hardylab.sharpness import ProbeResult, SweepRecord


def _report(residual=0.5):
    return HardyReport(1.0, 0.4, 0.1, residual, residual, 1e-12, {'theorem': 'thm1'})


class TestOutputFormatter:
    def test_unknown_format(self):
        with pytest.raises(ValueError, match='Must be one of: table, csv, json'):
            OutputFormatter('xml')

    def test_reports_json(self):
        text = OutputFormatter('json').format_reports([_report(), _report(-1.0)])
        rows = json.loads(text)
        assert [row['passed'] for row in rows] == [True, False]
        assert rows[0]['check'] == 'thm1'
        assert 'config' not in rows[0]

    def test_reports_csv(self):
        text = OutputFormatter('csv').format_reports([_report()])
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0][:3] == ['#', 'Check', 'LHS']
        assert rows[1][1] == 'thm1'

    def test_table_returns_none(self):
        assert OutputFormatter('table').format_reports([_report()]) is None

    def test_sweep_csv_has_prediction(self):
        record = SweepRecord(1e-2, 1.0, 2.0, 0.0, 0.1, 0.55, 0.25, 1e-10, 0.53)
        text = OutputFormatter('csv').format_sweep([record])
        header = text.splitlines()[0].split(',')
        assert 'Prediction' in header

    def test_checks_json(self):
        summary = CheckSummary('toponogov', True, 10, 0, 0.2, 1e-9)
        rows = json.loads(OutputFormatter('json').format_checks([summary]))
        assert rows[0]['check'] == 'toponogov'
        assert 'name' not in rows[0]

    def test_probe_params_joined(self):
        result = ProbeResult('bump', 0.5, [0.0, 1.5], 4, 0.25)
        rows = json.loads(OutputFormatter('json').format_probe(result))
        assert rows[0]['params'] == '0 1.5'

    def test_cell(self):
        assert _cell(None) == '-'
        assert _cell(0.123456789) == '0.123457'
        assert 'yes' in _cell(True)
        assert _cell(3) == '3'


class TestProgress:
    @pytest.mark.parametrize('style', sorted(PROGRESS_STYLES))
    def test_styles(self, style):
        assert isinstance(create_progress(style), Progress)

    def test_unknown_style(self):
        with pytest.raises(ValueError, match='sweep, check, solver'):
            create_progress('spinner')
