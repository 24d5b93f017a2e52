"""Tests for configuration and the command registry."""

import os

import pytest

from hardylab.config import COMMANDS, Config, get_command


class TestConfig:
    def test_as_dict_covers_settings(self):
        settings = Config.as_dict()
        for key in ('GRID_NR', 'SOLVER_TOL', 'QMC_SAMPLES', 'LOG_LEVEL', 'OUTPUT_DIR'):
            assert key in settings

    def test_output_dir_is_absolute(self):
        assert os.path.isabs(Config.get_output_dir())

    def test_numeric_types(self):
        assert isinstance(Config.GRID_NR, int)
        assert isinstance(Config.VOLUME_TOLERANCE, float)


class TestCommands:
    def test_lookup_is_case_insensitive(self):
        assert get_command(' Verify-Thm1 ') is COMMANDS['verify-thm1']

    def test_unknown(self):
        with pytest.raises(ValueError, match='Supported: check-comparison'):
            get_command('verify-thm9')

    def test_seeded_commands(self):
        seeded = {name for name, entry in COMMANDS.items() if entry['seeded']}
        assert seeded == {'check-comparison', 'solve-pm', 'rayleigh-probe'}
