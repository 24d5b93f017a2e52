"""Tests for the deterministic report writers."""

import json

import numpy as np
import pandas as pd

from hardylab.model_space import ModelSpace, PoleSet
from hardylab.quadrature import ScalarField, build_axigrid
from hardylab.reporting import (
    GRID_COLUMNS, to_json, write_failures, write_grid_csv, write_json, write_sweep_csv,
)
from hardylab.sharpness import SWEEP_COLUMNS, SweepRecord


def _record(eps):
    return SweepRecord(eps, 1.0, 2.0, 0.0, 0.1, 0.55, 0.25, 1e-10, 0.5)


class TestToJson:
    def test_sorted_keys_and_newline(self):
        text = to_json({'b': 1, 'a': 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith('}\n')

    def test_numpy_values(self):
        data = json.loads(to_json({
            'f': np.float64(0.1), 'i': np.int64(3), 'b': np.bool_(True),
            'arr': np.array([1.0, 2.0]), 'nested': {'t': (np.float32(0.5),)},
        }))
        assert data == {'f': 0.1, 'i': 3, 'b': True, 'arr': [1.0, 2.0], 'nested': {'t': [0.5]}}

    def test_floats_round_trip_exactly(self):
        value = 0.1 + 0.2
        assert json.loads(to_json({'x': value}))['x'] == value


class TestWriters:
    def test_json_is_byte_identical(self, tmp_path):
        payload = {'residual': np.float64(1e-3), 'passed': True}
        a = write_json(tmp_path / 'a' / 'report.json', payload)
        b = write_json(tmp_path / 'b' / 'report.json', payload)
        assert a.read_bytes() == b.read_bytes()

    def test_sweep_csv(self, tmp_path):
        path = write_sweep_csv(tmp_path / 'sweep.csv', [_record(1e-2), _record(1e-3)])
        frame = pd.read_csv(path)
        assert list(frame.columns) == SWEEP_COLUMNS
        assert frame['epsilon'].tolist() == [1e-2, 1e-3]
        assert b'\r\n' not in path.read_bytes()

    def test_grid_csv(self, tmp_path):
        space = ModelSpace(3, 0.0)
        poles = PoleSet.on_axis(space, [-0.5, 0.5])
        grid = build_axigrid(space, poles, 1.0, resolution=(8, 4), rule='uniform')
        values = np.arange(32, dtype=float).reshape(grid.shape)
        path = write_grid_csv(tmp_path / 'field.csv', ScalarField(grid, values))
        frame = pd.read_csv(path)
        assert list(frame.columns) == GRID_COLUMNS
        assert len(frame) == int(grid.active.sum())
        assert frame['value'].max() == 31.0

    def test_failures(self, tmp_path):
        path = write_failures(tmp_path / 'failures.json', 'verify-thm1', [
            {'check': 'thm1', 'message': 'residual below tolerance'},
        ])
        data = json.loads(path.read_text())
        assert data['command'] == 'verify-thm1'
        assert data['failed'] == 1
        assert data['failures'][0]['check'] == 'thm1'
