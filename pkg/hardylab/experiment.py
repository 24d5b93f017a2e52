"""Experiment spec files and the runner behind `hardylab run`.

A spec file holds one experiment as KEY=VALUE lines in dotenv syntax:

    # bipolar inequality on hyperbolic space
    COMMAND=verify-thm2
    N=3
    CURVATURE=-1
    K0=-4
    POLES=-0.5,0.5
    FIELD=bump

Blank lines and '#' comments are ignored. SPEC_KEYS lists every
accepted key; unknown keys, malformed lines and bad values raise
SpecError with the offending line number.
"""

import io
import logging
import math
import re
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field, fields
from pathlib import Path

import numpy as np
from dotenv import dotenv_values
from rich.console import Console
from rich.panel import Panel

from hardylab.config import COMMANDS, Config, get_command
from hardylab.errors import HypothesisError, SpecError
from hardylab.fields import get_field_profile
from hardylab.model_space import ModelSpace, PoleSet
from hardylab.progress import create_progress
from hardylab.reporting import write_failures, write_grid_csv, write_json, write_sweep_csv

logger = logging.getLogger(__name__)
console = Console()

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _float_list(text):
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError('expected a comma-separated list of numbers')
    return tuple(float(item) for item in items)


def _pole_list(text):
    """Comma-separated poles; 't' is on the axis, 't:s' adds an e_2 offset."""
    poles = []
    for item in (item.strip() for item in text.split(',')):
        if not item:
            continue
        parts = item.split(':')
        if len(parts) > 2:
            raise ValueError(f'pole "{item}" must be "t" or "t:s"')
        poles.append(tuple(float(v) for v in parts) + (0.0,) * (2 - len(parts)))
    if len(poles) < 2:
        raise ValueError('at least two poles are required')
    return tuple(poles)


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise ValueError(f'expected a positive integer, got {value}')
    return value


# key -> (attribute, parser, description)
SPEC_KEYS = {
    'COMMAND': ('command', str.strip, f'Experiment kind: {", ".join(COMMANDS)}'),
    'N': ('n', int, 'Dimension n >= 3 (default 3)'),
    'CURVATURE': ('c', float, 'Sectional curvature c of the model space'),
    'POLES': ('poles', _pole_list, 'Poles as signed axis distances, e.g. -0.5,0.5 (t:s adds an e_2 offset)'),
    'K0': ('k0', float, 'Lower curvature bound k0 <= c'),
    'FIELD': ('field', str.strip, 'Test-field profile (zero, bump, truncated-power, bipolar-bump)'),
    'FIELD_RADIUS': ('field_radius', float, 'Support radius of the test field'),
    'FIELD_POWER': ('field_power', float, 'Exponent of the truncated-power profile'),
    'FIELD_AMPLITUDE': ('field_amplitude', float, 'Amplitude of the test field (default 1)'),
    'REGION_RADIUS': ('region_radius', float, 'Radius of the integration or solver region'),
    'GRID_NR': ('grid_nr', _positive_int, 'Radial node count'),
    'GRID_NTHETA': ('grid_ntheta', _positive_int, 'Angular node count'),
    'EPSILONS': ('epsilons', _float_list, 'Strictly decreasing epsilon values for sweeps'),
    'SEED': ('seed', int, 'Random seed (mandatory for randomized commands)'),
    'SAMPLES': ('samples', _positive_int, 'Sample count of randomized suites'),
    'LOW_FACTOR': ('low_factor', float, 'mu as a multiple of the zero-solution threshold (default 0.5)'),
    'HIGH_FACTOR': ('high_factor', float, 'mu as a multiple of the mu_0 estimate (default 4)'),
    'STARTS': ('starts', _positive_int, 'Number of descent starts (default 10)'),
    'LAMBDA': ('lam', float, 'Hardy coefficient lambda'),
    'MU': ('mu', float, 'Fixed mu; omit to run the two-sided mu check'),
    'P': ('p', float, 'Exponent p of the hemisphere problem (default 3)'),
    'B': ('b', float, 'Height b of the symmetric hemisphere poles (default 0.8)'),
    'BUDGET': ('budget', _positive_int, 'Quotient evaluations of a Rayleigh probe'),
    'RATIO_TOLERANCE': ('ratio_tolerance', float, 'Relative tolerance of the final sweep ratio (default 0.10)'),
    'OUTPUT': ('output', str.strip, 'Report directory (default OUTPUT_DIR/<spec name>)'),
}

_LINE = re.compile(r'^(?:export\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$')

HEMISPHERE_COMMANDS = ('verify-hemisphere', 'solve-hemisphere')
DEFAULT_CURVATURE = {
    'verify-hemisphere': 1.0,
    'solve-hemisphere': 1.0,
    'verify-remark': -1.0,
    'solve-pm': -1.0,
}


@dataclass
class ExperimentSpec:
    """One parsed experiment; None means "use the default"."""

    command: str = None
    n: int = 3
    c: float = None
    poles: tuple = ((-0.5, 0.0), (0.5, 0.0))
    k0: float = None
    field: str = 'bump'
    field_radius: float = None
    field_power: float = None
    field_amplitude: float = 1.0
    region_radius: float = None
    grid_nr: int = None
    grid_ntheta: int = None
    epsilons: tuple = ()
    seed: int = None
    samples: int = None
    low_factor: float = 0.5
    high_factor: float = 4.0
    starts: int = 10
    lam: float = None
    mu: float = None
    p: float = 3.0
    b: float = 0.8
    budget: int = None
    ratio_tolerance: float = 0.10
    output: str = None
    name: str = 'experiment'
    lines: dict = dc_field(default_factory=dict, repr=False)

    @property
    def curvature(self):
        if self.c is not None:
            return self.c
        return DEFAULT_CURVATURE.get(self.command, 0.0)

    @property
    def resolution(self):
        if self.grid_nr is None and self.grid_ntheta is None:
            return None
        defaults = (
            (Config.SOLVER_NR, Config.SOLVER_NTHETA)
            if self.command in ('solve-pm', 'solve-hemisphere')
            else (Config.GRID_NR, Config.GRID_NTHETA)
        )
        return (self.grid_nr or defaults[0], self.grid_ntheta or defaults[1])

    def line_of(self, key):
        return self.lines.get(key)

    def validate(self):
        """Check internal consistency.

        Raises:
            SpecError: For missing or inconsistent keys.
            HypothesisError: If k0 exceeds the curvature.
        """
        if not self.command:
            raise SpecError('COMMAND is required')
        try:
            entry = get_command(self.command)
        except ValueError as e:
            raise SpecError(str(e), self.line_of('COMMAND')) from None
        self.command = self.command.strip().lower()
        for key in entry['requires']:
            attr = SPEC_KEYS[key][0]
            if getattr(self, attr) in (None, ()):
                raise SpecError(f'{key} is required for {self.command}')
        if entry['seeded'] and self.seed is None:
            raise SpecError(f'SEED is mandatory for the randomized command {self.command}')
        if self.n < 3:
            raise SpecError(f'N must be at least 3, got {self.n}', self.line_of('N'))
        c = self.curvature
        if self.command in HEMISPHERE_COMMANDS and c <= 0:
            raise SpecError(f'{self.command} needs CURVATURE > 0, got {c}', self.line_of('CURVATURE'))
        if self.command == 'solve-hemisphere' and c != 1.0:
            raise SpecError('solve-hemisphere runs on the unit hemisphere (CURVATURE=1)', self.line_of('CURVATURE'))
        if self.command in ('solve-pm', 'verify-remark') and c >= 0:
            raise SpecError(f'{self.command} needs CURVATURE < 0, got {c}', self.line_of('CURVATURE'))
        if self.command in ('verify-thm2', 'check-comparison') and self.k0 > c:
            raise HypothesisError(
                f'comparison hypothesis violated: K0 = {self.k0} exceeds CURVATURE = {c}',
                'sectional curvature K >= k0',
            )
        if self.command in HEMISPHERE_COMMANDS and not 0 < self.b < 1:
            raise SpecError(f'B must lie in (0, 1), got {self.b}', self.line_of('B'))
        if self.command == 'sweep-sharpness' and len(self.poles) != 2:
            raise SpecError('sweep-sharpness needs exactly two POLES', self.line_of('POLES'))
        if self.command != 'rayleigh-probe':
            try:
                get_field_profile(self.field)
            except ValueError as e:
                raise SpecError(str(e), self.line_of('FIELD')) from None
        return self

    # model objects

    def space(self):
        c = self.curvature
        return ModelSpace(self.n, c, hemisphere=c > 0)

    def pole_set(self, space):
        if self.command in HEMISPHERE_COMMANDS:
            beta = math.acos(self.b) / math.sqrt(space.c)
            return PoleSet.symmetric(space, beta)
        if all(s == 0.0 for _, s in self.poles):
            return PoleSet.on_axis(space, [t for t, _ in self.poles])
        origin = space.origin()
        points = []
        for t, s in self.poles:
            v = t * space.axis_vector(0) + s * space.axis_vector(1)
            points.append(space.exp(origin, v))
        return PoleSet(points)

    def test_field(self, space, poles):
        cls = get_field_profile(self.field)
        return cls.from_spec(
            space, poles, radius=self.field_radius, power=self.field_power,
            amplitude=self.field_amplitude,
        )


def _convert(key, raw, line):
    attr, parser, _ = SPEC_KEYS[key]
    try:
        return attr, parser(raw)
    except (TypeError, ValueError) as e:
        raise SpecError(f'invalid value "{raw}" for {key}: {e}', line) from None


def parse_spec(text, overrides=None, name='experiment'):
    """Parse spec-file text into a validated ExperimentSpec.

    Args:
        text: Spec-file contents.
        overrides: Optional mapping KEY -> raw string applied after the
            file (the CLI --set values).
        name: Name used for the default output directory.

    Raises:
        SpecError: With the line number of the first bad line.
        HypothesisError: If the experiment violates a hypothesis.
    """
    lines = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        match = _LINE.match(stripped)
        if match is None:
            raise SpecError(f'expected KEY=VALUE, got "{stripped}"', number)
        key = match.group(1)
        if key not in SPEC_KEYS:
            raise SpecError(f'unknown key "{key}"', number)
        if key in lines:
            raise SpecError(f'duplicate key "{key}" (first set on line {lines[key]})', number)
        lines[key] = number

    values = {}
    for key, raw in dotenv_values(stream=io.StringIO(text)).items():
        if raw is None or not raw.strip():
            raise SpecError(f'{key} has no value', lines.get(key))
        attr, value = _convert(key, raw, lines.get(key))
        values[attr] = value
    for key, raw in (overrides or {}).items():
        key = key.strip().upper()
        if key not in SPEC_KEYS:
            raise SpecError(f'unknown key "{key}" in --set')
        attr, value = _convert(key, raw, None)
        values[attr] = value
        lines.pop(key, None)

    known = {f.name for f in fields(ExperimentSpec)}
    spec = ExperimentSpec(**{k: v for k, v in values.items() if k in known}, name=name, lines=lines)
    return spec.validate()


def load_spec(path, overrides=None):
    """Read and parse a spec file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise SpecError(f'cannot read spec file {path}: {e}') from None
    return parse_spec(text, overrides=overrides, name=path.stem)


def parse_overrides(items):
    """Turn --set KEY=VALUE strings into a dict."""
    out = {}
    for item in items or ():
        if '=' not in item:
            raise SpecError(f'--set expects KEY=VALUE, got "{item}"')
        key, value = item.split('=', 1)
        out[key.strip().upper()] = value.strip()
    return out


class ExperimentRunner:
    """Runs one ExperimentSpec and writes its reports.

    Every command returns a results dict with 'command', 'passed',
    'failures' and 'files'; report.json is always written and
    failures.json whenever a check fails.
    """

    def __init__(self, spec, output_dir=None, formatter=None, show_progress=True):
        self.spec = spec
        out = output_dir or spec.output
        self.output_dir = Path(out) if out else Path(Config.get_output_dir()) / spec.name
        self.formatter = formatter
        self.show_progress = show_progress
        self.files = []

    @contextmanager
    def _progress(self, style, description, total):
        if not self.show_progress:
            yield None
            return
        with create_progress(style, console=console) as progress:
            task = progress.add_task(description, total=total)

            def on_progress(completed, total):
                progress.update(task, completed=completed, total=total)

            yield on_progress

    def _write(self, writer, filename, *args):
        path = writer(self.output_dir / filename, *args)
        self.files.append(str(path))
        return path

    def _show(self, method, *args):
        if self.formatter is not None:
            getattr(self.formatter, method)(*args)

    def run(self):
        """Run the experiment.

        Returns:
            Results dict; 'exit_code' is 0 when every check passed and 1
            otherwise.
        """
        spec = self.spec
        logger.info(f'Running {spec.command} ({spec.name})')
        if self.show_progress:
            console.print(
                Panel(
                    f'[bold]Command:[/bold] {spec.command}\n'
                    f'[bold]Space:[/bold] n={spec.n}, c={spec.curvature:g}\n'
                    f'[bold]Output:[/bold] {self.output_dir}',
                    title=f'[bold cyan]hardylab - {COMMANDS[spec.command]["description"]}[/bold cyan]',
                    border_style='cyan',
                )
            )
        runner = getattr(self, '_run_' + spec.command.replace('-', '_'))
        payload, failures = runner()
        passed = not failures
        report = {
            'command': spec.command,
            'passed': passed,
            'spec': {f.name: getattr(spec, f.name) for f in fields(spec) if f.name not in ('lines', 'output')},
            'results': payload,
        }
        self._write(write_json, 'report.json', report)
        if failures:
            self._write(write_failures, 'failures.json', spec.command, failures)
            logger.warning(f'{spec.command}: {len(failures)} check(s) failed')
        return {
            'command': spec.command,
            'passed': passed,
            'exit_code': EXIT_PASS if passed else EXIT_FAILED,
            'failures': failures,
            'files': list(self.files),
            'results': payload,
        }

    # inequality verification

    def _rule(self, space, poles, field_obj):
        from hardylab.quadrature import build_axigrid, build_qmc_rule

        spec = self.spec
        region = spec.region_radius
        if region is None:
            support = float(field_obj.support_bound(space.origin()))
            if support <= 0 or not math.isfinite(support):
                support = poles.max_origin_distance() + poles.min_distance
            region = 1.05 * support
            if space.c > 0:
                region = min(region, 0.999 * space.max_distance / 2)
        exponents = field_obj.local_exponents(poles)
        if poles.is_on_axis():
            return build_axigrid(space, poles, region, resolution=spec.resolution,
                                 local_exponent=exponents)
        seed = Config.DEFAULT_SEED if spec.seed is None else spec.seed
        return build_qmc_rule(space, poles, region, samples=spec.samples, seed=seed,
                              local_exponent=exponents)

    def _setup(self):
        space = self.spec.space()
        poles = self.spec.pole_set(space)
        field_obj = self.spec.test_field(space, poles)
        return space, poles, field_obj, self._rule(space, poles, field_obj)

    def _reports(self, reports, extra=None):
        self._show('format_reports', reports)
        failures = [
            {
                'check': r.config.get('theorem'),
                'message': f'residual {r.residual:.6e} below -tol = {-r.tol:.3e}',
                'residual': r.residual,
                'tol': r.tol,
            }
            for r in reports if not r.passed
        ]
        payload = {'reports': [r.to_dict() for r in reports]}
        payload.update(extra or {})
        return payload, failures

    def _run_verify_thm1(self):
        from hardylab.hardy import representation_remainder, verify_theorem1

        space, poles, field_obj, rule = self._setup()
        report = verify_theorem1(space, poles, field_obj, rule)
        remainder = representation_remainder(space, poles, field_obj, rule)
        return self._reports([report], {'representation_remainder': remainder})

    def _run_verify_thm2(self):
        from hardylab.hardy import verify_theorem2

        space, poles, field_obj, rule = self._setup()
        return self._reports([verify_theorem2(space, poles, field_obj, rule, self.spec.k0)])

    def _run_verify_hemisphere(self):
        from hardylab.hardy import verify_hemisphere

        space, poles, field_obj, rule = self._setup()
        return self._reports([verify_hemisphere(space, poles, field_obj, rule)])

    def _run_verify_remark(self):
        from hardylab.hardy import verify_hadamard_cosine, verify_remark_c

        space, poles, field_obj, rule = self._setup()
        reports = [
            verify_remark_c(space, poles, field_obj, rule),
            verify_hadamard_cosine(space, poles, field_obj, rule),
        ]
        return self._reports(reports)

    # sharpness

    def _run_sweep_sharpness(self):
        from hardylab.sharpness import assess_sweep, sharpness_sweep

        spec = self.spec
        space = spec.space()
        poles = spec.pole_set(space)
        with self._progress('sweep', 'Sweeping epsilon', len(spec.epsilons)) as callback:
            records = sharpness_sweep(space, poles, spec.epsilons, progress_callback=callback)
        self._write(write_sweep_csv, 'sweep.csv', records)
        self._show('format_sweep', records)
        assessment = assess_sweep(records, ratio_tolerance=spec.ratio_tolerance)
        failures = []
        if space.c > 0:
            for message in assessment['failures']:
                logger.warning(f'exploratory sweep: {message}')
        else:
            failures = [{'check': 'sharpness', 'message': m} for m in assessment['failures']]
        payload = {
            'records': [r.to_dict() for r in records],
            'assessment': assessment,
            'exploratory': space.c > 0,
        }
        return payload, failures

    def _run_rayleigh_probe(self):
        from hardylab.sharpness import TRIAL_FAMILIES, default_probe_rule, rayleigh_probe

        spec = self.spec
        if spec.field not in TRIAL_FAMILIES:
            supported = ', '.join(sorted(TRIAL_FAMILIES))
            raise SpecError(f'FIELD must be a trial family ({supported}) for rayleigh-probe', spec.line_of('FIELD'))
        space = spec.space()
        poles = spec.pole_set(space)
        rule = default_probe_rule(space, poles, spec.region_radius)
        budget = spec.budget or Config.PROBE_BUDGET
        with self._progress('sweep', f'Probing {spec.field}', budget) as callback:
            result = rayleigh_probe(
                space, poles, family=spec.field, budget=budget, seed=spec.seed,
                rule=rule, progress_callback=callback,
            )
        self._show('format_probe', result)
        failures = []
        slack = 10.0 * max(rule.volume_error, Config.VOLUME_TOLERANCE) * result.bound
        if space.c <= 0 and result.quotient < result.bound - slack:
            failures.append({
                'check': 'rayleigh-probe',
                'message': f'quotient {result.quotient:.6f} below the bound {result.bound:.6f}',
            })
        return {'probe': result.to_dict()}, failures

    # comparison geometry

    def _run_check_comparison(self):
        from hardylab.comparison import cosine_chain_suite, laplace_comparison_check, toponogov_suite

        spec = self.spec
        space = spec.space()
        poles = spec.pole_set(space)
        samples = spec.samples or Config.SAMPLE_COUNT
        with self._progress('check', 'Comparison checks', 3) as callback:
            summaries = [toponogov_suite(space, spec.k0, samples, spec.seed)]
            if callback:
                callback(1, 3)
            summaries.append(cosine_chain_suite(space, poles, spec.k0, samples, spec.seed))
            if callback:
                callback(2, 3)
            r_grid = np.linspace(1e-3, 20.0, 4000)
            summaries.append(laplace_comparison_check(space.c, spec.k0, 'lower', r_grid, n=space.n))
            if callback:
                callback(3, 3)
        self._show('format_checks', summaries)
        failures = [
            {
                'check': s.name,
                'message': f'{s.failures} of {s.count} samples failed (worst margin {s.worst_margin:.3e})',
            }
            for s in summaries if not s.passed
        ]
        return {'checks': [s.to_dict() for s in summaries]}, failures

    # variational problems

    def _pm_config(self, mu):
        from hardylab.variational import pm_config

        spec = self.spec
        return pm_config(
            mu, lam=spec.lam, positions=[t for t, _ in spec.poles], n=spec.n,
            c=spec.curvature, region=spec.region_radius, resolution=spec.resolution,
        )

    def _solve_pm(self, config, label):
        from hardylab.variational import solve_pm

        spec = self.spec
        with self._progress('solver', f'Solving mu={config.mu:.4g}', spec.starts + 1) as callback:
            results = solve_pm(config, starts=spec.starts, seed=spec.seed, progress_callback=callback)
        self._show('format_solves', results, f'Solver Results ({label})')
        return results

    def _run_solve_pm(self):
        from hardylab.variational import mu0_estimate, truncation_sensitivity, zero_solution_threshold

        spec = self.spec
        failures = []
        tol = Config.SOLVER_TOL
        payload = {}

        def nonnegative(results, label):
            for k, r in enumerate(results):
                if r.min_value < -tol:
                    failures.append({
                        'check': 'nonnegative',
                        'message': f'{label} run {k} has min value {r.min_value:.3e}',
                    })

        if spec.mu is not None:
            config = self._pm_config(spec.mu)
            results = self._solve_pm(config, f'mu={spec.mu:g}')
            nonnegative(results, 'fixed')
            for k, r in enumerate(results):
                if not r.converged:
                    failures.append({'check': 'converged', 'message': f'run {k} ({r.classification}) did not converge'})
            payload['fixed'] = [r.to_dict() for r in results]
            best = min(results, key=lambda r: r.energy)
            self._write(write_grid_csv, 'solution.csv', best.field)
            return payload, failures

        probe = self._pm_config(0.0)
        threshold = zero_solution_threshold(probe)
        mu0, _ = mu0_estimate(probe)
        payload['zero_threshold'] = threshold
        payload['mu0_estimate'] = mu0

        low = self._solve_pm(self._pm_config(spec.low_factor * threshold), 'below threshold')
        nonnegative(low, 'low-mu')
        nonzero = [k for k, r in enumerate(low) if r.classification != 'zero']
        if nonzero:
            failures.append({
                'check': 'zero-only',
                'message': f'runs {nonzero} did not reach the zero solution below the threshold',
            })
        payload['low'] = [r.to_dict() for r in low]

        high_config = self._pm_config(spec.high_factor * mu0)
        high = self._solve_pm(high_config, 'above mu_0')
        nonnegative(high, 'high-mu')
        payload['high'] = [r.to_dict() for r in high]
        minima = [r for r in high if r.classification == 'global-min' and r.energy < -1e-6]
        passes = [r for r in high if r.classification == 'mountain-pass']
        if not minima:
            failures.append({'check': 'global-min', 'message': 'no run reached energy below -1e-6'})
        else:
            self._write(write_grid_csv, 'global_min.csv', minima[0].field)
            payload['truncation_sensitivity'] = truncation_sensitivity(high_config, minima[0])
        if not passes or not passes[0].converged:
            failures.append({
                'check': 'mountain-pass',
                'message': 'no confirmed mountain-pass candidate (energy > 0, residual < tol, distinct)',
            })
        if passes:
            self._write(write_grid_csv, 'mountain_pass.csv', passes[0].field)
        return payload, failures

    def _run_solve_hemisphere(self):
        from hardylab.variational import energy_hemisphere, g0_rotation, hemisphere_config, solve_hemisphere

        spec = self.spec
        config = hemisphere_config(b=spec.b, lam=spec.lam, p=spec.p, n=spec.n, resolution=spec.resolution)
        with self._progress('solver', 'Nehari descent', Config.SOLVER_MAX_ITER) as callback:
            result = solve_hemisphere(config, progress_callback=callback)
        self._show('format_solves', [result])
        self._write(write_grid_csv, 'ground_state.csv', result.field)

        seed = Config.DEFAULT_SEED if spec.seed is None else spec.seed
        rotation = g0_rotation(config.space, np.random.default_rng(seed))
        rotated = energy_hemisphere(config, result.field, rotation=rotation)
        drift = abs(rotated - result.energy) / max(abs(result.energy), 1e-300)

        failures = []
        if not result.converged:
            failures.append({
                'check': 'nehari',
                'message': f'ground state not confirmed (residual {result.residual_norm:.2e})',
            })
        if np.any(result.field.values[-1] != 0.0):
            failures.append({'check': 'equator', 'message': 'solution does not vanish on the equator'})
        if drift > 1e-12:
            failures.append({'check': 'g0-invariance', 'message': f'rotated energy differs by {drift:.2e}'})
        return {'solution': result.to_dict(), 'g0_energy_drift': drift}, failures


def run_experiment(spec, output_dir=None, formatter=None, show_progress=True):
    """Run a parsed spec; see ExperimentRunner.run."""
    return ExperimentRunner(spec, output_dir, formatter, show_progress).run()


def schema_rows():
    """(key, description) pairs for `hardylab schema`."""
    return [(key, desc) for key, (_, _, desc) in SPEC_KEYS.items()]


__all__ = [
    'EXIT_FAILED',
    'EXIT_INVALID',
    'EXIT_PASS',
    'ExperimentRunner',
    'ExperimentSpec',
    'SPEC_KEYS',
    'load_spec',
    'parse_overrides',
    'parse_spec',
    'run_experiment',
    'schema_rows',
]
