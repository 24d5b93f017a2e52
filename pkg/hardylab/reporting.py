"""Deterministic report writers.

Identical inputs give byte-identical files: JSON keys are sorted, floats
are written with repr precision, and nothing time-dependent is stored.
CSV files go through pandas with a fixed column order.
"""

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from hardylab.quadrature import grid_frame
from hardylab.sharpness import SWEEP_COLUMNS

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
GRID_COLUMNS = ['r', 'theta', 'weight', 'value']


def _plain(value):
    """Convert numpy scalars and arrays into JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def to_json(payload):
    """Serialize a report payload to its canonical JSON text."""
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + '\n'


def _prepare(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path, payload):
    """Write a JSON report.

    Args:
        path: Target file; parent directories are created.
        payload: Dict of plain values, numpy scalars or arrays.

    Returns:
        The Path written.
    """
    path = _prepare(path)
    path.write_text(to_json(payload), encoding='utf-8')
    logger.info(f'Wrote {path}')
    return path


def write_frame(path, frame, columns):
    """Write a DataFrame with a fixed column order and exact floats."""
    path = _prepare(path)
    frame[columns].to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info(f'Wrote {path} ({len(frame)} rows)')
    return path


def write_sweep_csv(path, records):
    """Sweep CSV with columns epsilon, I, J, K, L, ratio, target, tol."""
    frame = pd.DataFrame([record.to_row() for record in records], columns=SWEEP_COLUMNS)
    return write_frame(path, frame, SWEEP_COLUMNS)


def write_grid_csv(path, field):
    """Active grid nodes of a ScalarField: r, theta, weight, value."""
    return write_frame(path, grid_frame(field), GRID_COLUMNS)


def write_failures(path, command, failures):
    """Machine-readable failure summary.

    Args:
        command: Experiment command kind.
        failures: List of dicts, each with at least 'check' and 'message'.
    """
    return write_json(path, {
        'command': command,
        'failed': len(failures),
        'failures': list(failures),
    })
