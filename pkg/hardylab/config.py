"""Configuration management for hardylab.

Loads settings from a .env file with sensible defaults for all options.
Numerical defaults (grid resolutions, tolerances, solver budgets) live
here so that experiment spec files only need to name what they change.
"""

import os
import logging
from pathlib import Path
from dotenv import load_dotenv


# Load .env from project root
_project_root = Path(__file__).parent.parent
load_dotenv(_project_root / '.env')


class Config:
    """Central configuration for hardylab."""

    # Output
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'reports')
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '20240917'))

    # Verification grids (Gauss-Legendre panels)
    GRID_NR = int(os.getenv('GRID_NR', '160'))
    GRID_NTHETA = int(os.getenv('GRID_NTHETA', '96'))
    GAUSS_ORDER = int(os.getenv('GAUSS_ORDER', '6'))
    EXCLUSION_FACTOR = float(os.getenv('EXCLUSION_FACTOR', '1e-3'))
    VOLUME_TOLERANCE = float(os.getenv('VOLUME_TOLERANCE', '1e-3'))

    # Quasi-Monte Carlo fallback for off-axis pole sets
    QMC_SAMPLES = int(os.getenv('QMC_SAMPLES', '16384'))
    QMC_VOLUME_TOLERANCE = float(os.getenv('QMC_VOLUME_TOLERANCE', '1e-2'))

    # Sharpness sweeps
    SWEEP_PANELS_PER_DECADE = int(os.getenv('SWEEP_PANELS_PER_DECADE', '40'))
    SWEEP_NTHETA = int(os.getenv('SWEEP_NTHETA', '48'))

    # Variational solvers
    SOLVER_NR = int(os.getenv('SOLVER_NR', '200'))
    SOLVER_NTHETA = int(os.getenv('SOLVER_NTHETA', '100'))
    SOLVER_MAX_ITER = int(os.getenv('SOLVER_MAX_ITER', '4000'))
    SOLVER_TOL = float(os.getenv('SOLVER_TOL', '1e-8'))
    PM_RADIUS = float(os.getenv('PM_RADIUS', '8.0'))
    PM_SENSITIVITY_RADIUS = float(os.getenv('PM_SENSITIVITY_RADIUS', '10.0'))

    # Randomized suites and probes
    SAMPLE_COUNT = int(os.getenv('SAMPLE_COUNT', '10000'))
    PROBE_BUDGET = int(os.getenv('PROBE_BUDGET', '200'))

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    @classmethod
    def get_output_dir(cls):
        """Return absolute path to the report output directory."""
        out = Path(cls.OUTPUT_DIR)
        if not out.is_absolute():
            out = _project_root / out
        return str(out)

    @classmethod
    def setup_logging(cls):
        """Configure logging based on settings."""
        logging.basicConfig(
            level=getattr(logging, cls.LOG_LEVEL.upper(), logging.INFO),
            format='%(asctime)s [%(name)s] %(levelname)s: %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S',
        )

    @classmethod
    def as_dict(cls):
        """Return configuration as a dictionary for display."""
        return {
            'OUTPUT_DIR': cls.get_output_dir(),
            'DEFAULT_SEED': cls.DEFAULT_SEED,
            'GRID_NR': cls.GRID_NR,
            'GRID_NTHETA': cls.GRID_NTHETA,
            'GAUSS_ORDER': cls.GAUSS_ORDER,
            'EXCLUSION_FACTOR': cls.EXCLUSION_FACTOR,
            'VOLUME_TOLERANCE': cls.VOLUME_TOLERANCE,
            'QMC_SAMPLES': cls.QMC_SAMPLES,
            'QMC_VOLUME_TOLERANCE': cls.QMC_VOLUME_TOLERANCE,
            'SWEEP_PANELS_PER_DECADE': cls.SWEEP_PANELS_PER_DECADE,
            'SWEEP_NTHETA': cls.SWEEP_NTHETA,
            'SOLVER_NR': cls.SOLVER_NR,
            'SOLVER_NTHETA': cls.SOLVER_NTHETA,
            'SOLVER_MAX_ITER': cls.SOLVER_MAX_ITER,
            'SOLVER_TOL': cls.SOLVER_TOL,
            'PM_RADIUS': cls.PM_RADIUS,
            'PM_SENSITIVITY_RADIUS': cls.PM_SENSITIVITY_RADIUS,
            'SAMPLE_COUNT': cls.SAMPLE_COUNT,
            'PROBE_BUDGET': cls.PROBE_BUDGET,
            'LOG_LEVEL': cls.LOG_LEVEL,
        }


# Experiment command kinds accepted in spec files.
COMMANDS = {
    'verify-thm1': {
        'description': 'Multipolar Hardy inequality with Laplacian correction',
        'requires': [],
        'seeded': False,
    },
    'verify-thm2': {
        'description': 'Curved bipolar Hardy inequality under K >= k0',
        'requires': ['K0'],
        'seeded': False,
    },
    'verify-hemisphere': {
        'description': 'Hardy inequality on the open hemisphere with C(n, beta)',
        'requires': [],
        'seeded': False,
    },
    'verify-remark': {
        'description': 'Curvature improvement on hyperbolic space',
        'requires': [],
        'seeded': False,
    },
    'sweep-sharpness': {
        'description': 'Epsilon-family sweep toward (n-2)^2/4',
        'requires': ['EPSILONS'],
        'seeded': False,
    },
    'check-comparison': {
        'description': 'Toponogov, Laplace and cosine-chain check suites',
        'requires': ['K0'],
        'seeded': True,
    },
    'solve-pm': {
        'description': 'Bipolar Schroedinger problem on hyperbolic space',
        'requires': [],
        'seeded': True,
    },
    'solve-hemisphere': {
        'description': 'Nehari ground state on the upper hemisphere',
        'requires': [],
        'seeded': False,
    },
    'rayleigh-probe': {
        'description': 'Derivative-free search for small Rayleigh quotients',
        'requires': [],
        'seeded': True,
    },
}


def get_command(name):
    """Return the registry entry for an experiment command kind.

    Args:
        name: Command kind as written in a spec file, e.g. 'verify-thm1'.

    Returns:
        Dict with description, required keys and seed requirement.

    Raises:
        ValueError: If the command kind is not supported.
    """
    entry = COMMANDS.get((name or '').strip().lower())
    if entry is None:
        supported = ', '.join(sorted(COMMANDS))
        raise ValueError(
            f'Unknown command "{name}". Supported: {supported}'
        )
    return entry
