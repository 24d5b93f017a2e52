"""Tests for spec-file parsing and the experiment runner."""

import json
from pathlib import Path

import pytest

from hardylab.errors import HypothesisError, SpecError
from hardylab.experiment import (
    EXIT_FAILED, EXIT_PASS, SPEC_KEYS, ExperimentSpec, load_spec, parse_overrides,
    parse_spec, run_experiment, schema_rows,
)

THM1 = """\
# flat bipolar check
COMMAND=verify-thm1
N=3
CURVATURE=0
POLES=-0.5,0.5
FIELD=zero
GRID_NR=40
GRID_NTHETA=16
"""


def _run(text, tmp_path):
    spec = parse_spec(text)
    return run_experiment(spec, output_dir=tmp_path, show_progress=False)


class TestParseSpec:
    def test_valid(self):
        spec = parse_spec(THM1, name='thm1_flat')
        assert spec.command == 'verify-thm1'
        assert spec.poles == ((-0.5, 0.0), (0.5, 0.0))
        assert spec.resolution == (40, 16)
        assert spec.name == 'thm1_flat'
        assert spec.line_of('FIELD') == 6

    def test_malformed_line(self):
        with pytest.raises(SpecError, match='line 3: expected KEY=VALUE') as info:
            parse_spec('COMMAND=verify-thm1\n\nthis is not a key\n')
        assert info.value.line == 3

    def test_unknown_key(self):
        with pytest.raises(SpecError, match='line 2: unknown key "COLOR"'):
            parse_spec('COMMAND=verify-thm1\nCOLOR=blue\n')

    def test_duplicate_key(self):
        with pytest.raises(SpecError, match='first set on line 2'):
            parse_spec('COMMAND=verify-thm1\nN=3\nN=4\n')

    def test_bad_value_reports_line(self):
        with pytest.raises(SpecError, match='line 2: invalid value "three" for N'):
            parse_spec('COMMAND=verify-thm1\nN=three\n')

    def test_empty_value(self):
        with pytest.raises(SpecError, match='CURVATURE has no value'):
            parse_spec('COMMAND=verify-thm1\nCURVATURE=\n')

    def test_missing_command(self):
        with pytest.raises(SpecError, match='COMMAND is required'):
            parse_spec('N=3\n')

    def test_unknown_command(self):
        with pytest.raises(SpecError, match='line 1: Unknown command'):
            parse_spec('COMMAND=verify-thm9\n')

    def test_required_key(self):
        with pytest.raises(SpecError, match='K0 is required'):
            parse_spec('COMMAND=verify-thm2\nCURVATURE=-1\n')

    def test_seed_mandatory(self):
        with pytest.raises(SpecError, match='SEED is mandatory'):
            parse_spec('COMMAND=check-comparison\nK0=0\n')

    def test_dimension(self):
        with pytest.raises(SpecError, match='line 2: N must be at least 3'):
            parse_spec('COMMAND=verify-thm1\nN=2\n')

    def test_comparison_hypothesis(self):
        with pytest.raises(HypothesisError, match='comparison hypothesis violated'):
            parse_spec('COMMAND=verify-thm2\nCURVATURE=-1\nK0=0.5\n')

    def test_hemisphere_curvature(self):
        with pytest.raises(SpecError, match='CURVATURE > 0'):
            parse_spec('COMMAND=verify-hemisphere\nCURVATURE=-1\n')
        with pytest.raises(SpecError, match='CURVATURE=1'):
            parse_spec('COMMAND=solve-hemisphere\nCURVATURE=2\n')

    def test_pm_curvature(self):
        with pytest.raises(SpecError, match='CURVATURE < 0'):
            parse_spec('COMMAND=solve-pm\nSEED=1\nCURVATURE=0\n')

    def test_b_range(self):
        with pytest.raises(SpecError, match='B must lie'):
            parse_spec('COMMAND=solve-hemisphere\nB=1.5\n')

    def test_sweep_needs_two_poles(self):
        with pytest.raises(SpecError, match='exactly two POLES'):
            parse_spec('COMMAND=sweep-sharpness\nEPSILONS=0.01\nPOLES=-1,0,1\n')

    def test_unknown_field(self):
        with pytest.raises(SpecError, match='Unknown field profile'):
            parse_spec('COMMAND=verify-thm1\nFIELD=gaussian\n')

    def test_pole_syntax(self):
        with pytest.raises(SpecError, match='at least two poles'):
            parse_spec('COMMAND=verify-thm1\nPOLES=0.5\n')
        with pytest.raises(SpecError, match='"t" or "t:s"'):
            parse_spec('COMMAND=verify-thm1\nPOLES=0:1:2,1\n')

    def test_default_curvatures(self):
        assert parse_spec('COMMAND=verify-hemisphere\n').curvature == 1.0
        assert parse_spec('COMMAND=solve-pm\nSEED=1\n').curvature == -1.0
        assert parse_spec('COMMAND=verify-thm1\n').curvature == 0.0

    def test_export_prefix_and_comment(self):
        spec = parse_spec('export COMMAND=verify-thm1\nN=4 # four\n')
        assert spec.n == 4


class TestOverrides:
    def test_override_wins(self):
        spec = parse_spec(THM1, overrides={'n': '4'})
        assert spec.n == 4
        assert spec.line_of('N') is None

    def test_unknown_override(self):
        with pytest.raises(SpecError, match='in --set'):
            parse_spec(THM1, overrides={'COLOR': 'blue'})

    def test_parse_overrides(self):
        assert parse_overrides(['n=4', 'POLES=-1,1']) == {'N': '4', 'POLES': '-1,1'}
        with pytest.raises(SpecError, match='KEY=VALUE'):
            parse_overrides(['N4'])


class TestLoadSpec:
    def test_name_from_stem(self, tmp_path):
        path = tmp_path / 'thm1_flat.env'
        path.write_text(THM1)
        assert load_spec(path).name == 'thm1_flat'

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecError, match='cannot read'):
            load_spec(tmp_path / 'nope.env')


class TestModelObjects:
    def test_off_axis_poles(self):
        spec = parse_spec('COMMAND=verify-thm1\nPOLES=-0.5,0.5:0.3\n')
        poles = spec.pole_set(spec.space())
        assert not poles.is_on_axis()

    def test_hemisphere_poles(self):
        spec = parse_spec('COMMAND=verify-hemisphere\nB=0.6\n')
        space = spec.space()
        poles = spec.pole_set(space)
        assert space.hemisphere
        assert poles[0].coords[-1] == pytest.approx(0.6)

    def test_schema_rows(self):
        rows = dict(schema_rows())
        assert set(rows) == set(SPEC_KEYS)
        assert 'verify-thm1' in rows['COMMAND']

    def test_spec_defaults(self):
        spec = ExperimentSpec(command='verify-thm1')
        assert spec.resolution is None
        assert spec.field == 'bump'


class TestRunner:
    def test_zero_field_passes(self, tmp_path):
        results = _run(THM1, tmp_path)
        assert results['exit_code'] == EXIT_PASS
        assert results['passed']
        report = json.loads((tmp_path / 'report.json').read_text())
        assert report['command'] == 'verify-thm1'
        assert report['results']['reports'][0]['lhs'] == 0.0
        assert not (tmp_path / 'failures.json').exists()

    def test_reports_are_deterministic(self, tmp_path):
        _run(THM1, tmp_path / 'a')
        _run(THM1, tmp_path / 'b')
        assert (tmp_path / 'a' / 'report.json').read_bytes() == (tmp_path / 'b' / 'report.json').read_bytes()

    def test_bump_on_hyperbolic_space(self, tmp_path):
        text = THM1.replace('CURVATURE=0', 'CURVATURE=-1').replace('FIELD=zero', 'FIELD=bump')
        results = _run(text, tmp_path)
        assert results['passed']
        assert results['results']['representation_remainder'] > 0

    def test_singular_field_gets_disc_terms(self, tmp_path):
        text = THM1.replace('FIELD=zero', 'FIELD=truncated-power\nFIELD_POWER=-0.4\nFIELD_RADIUS=0.4')
        results = _run(text, tmp_path)
        config = results['results']['reports'][0]['config']
        assert config['disc_weighted_mass'][0] > 0
        assert config['disc_weighted_mass'][1] == 0.0

    def test_remark_writes_two_reports(self, tmp_path):
        text = 'COMMAND=verify-remark\nFIELD=bump\nGRID_NR=40\nGRID_NTHETA=16\n'
        results = _run(text, tmp_path)
        checks = [r['config']['theorem'] for r in results['results']['reports']]
        assert checks == ['remark', 'hadamard-cosine']

    def test_failed_check_writes_failures(self, tmp_path):
        text = 'COMMAND=sweep-sharpness\nPOLES=-1,1\nEPSILONS=0.01,0.001\nRATIO_TOLERANCE=1e-9\n'
        results = _run(text, tmp_path)
        assert results['exit_code'] == EXIT_FAILED
        assert (tmp_path / 'sweep.csv').exists()
        data = json.loads((tmp_path / 'failures.json').read_text())
        assert data['command'] == 'sweep-sharpness'
        assert data['failures'][0]['check'] == 'sharpness'

    def test_comparison_suite(self, tmp_path):
        text = 'COMMAND=check-comparison\nCURVATURE=-1\nK0=-2\nSAMPLES=200\nSEED=1\n'
        results = _run(text, tmp_path)
        assert results['passed']
        names = [c['name'] for c in results['results']['checks']]
        assert names == ['toponogov', 'cosine-chain', 'laplace-lower']

    def test_probe_needs_trial_family(self, tmp_path):
        spec = parse_spec('COMMAND=rayleigh-probe\nSEED=1\nFIELD=zero\n')
        with pytest.raises(SpecError, match='trial family'):
            run_experiment(spec, output_dir=tmp_path, show_progress=False)

    def test_hemisphere_ground_state(self, tmp_path):
        text = 'COMMAND=solve-hemisphere\nGRID_NR=30\nGRID_NTHETA=12\nSEED=3\n'
        results = _run(text, tmp_path)
        assert (tmp_path / 'ground_state.csv').exists()
        assert results['results']['g0_energy_drift'] <= 1e-12
        assert results['results']['solution']['classification'] == 'nehari'


SPEC_DIR = Path(__file__).parent.parent / 'specs'


@pytest.mark.parametrize('path', sorted(SPEC_DIR.glob('*.env')), ids=lambda p: p.stem)
def test_example_specs_parse(path):
    spec = load_spec(path)
    assert spec.name == path.stem
