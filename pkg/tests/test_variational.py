"""Tests for the bipolar Schroedinger solvers on small grids."""

import math

import numpy as np
import pytest

from hardylab.errors import DomainError, HypothesisError
from hardylab.fields import RadialBump
from hardylab.model_space import ModelSpace, PoleSet
from hardylab.quadrature import ScalarField
from hardylab.variational import (
    SchrodingerConfig, check_pm_hypotheses, default_F, default_f, default_fprime,
    energy_hemisphere, energy_pm, g0_rotation, gradient_pm, hemisphere_config,
    mu0_estimate, nehari_projection, nonlinearity_constant, pm_config,
    smallest_eigenvalue, solve_hemisphere, solve_pm, truncation_sensitivity,
    zero_solution_threshold,
)

SMALL = (30, 12)


def _bump_vector(config, t=0.0, radius=2.0):
    space = config.space
    system = config.system
    field = ScalarField.from_field(system.grid, RadialBump(space, space.axis_point(t), radius))
    return system.to_vector(field)


@pytest.fixture(scope='module')
def pm_small():
    return pm_config(mu=5.0, resolution=SMALL)


@pytest.fixture(scope='module')
def hemi_small():
    return hemisphere_config(b=0.8, resolution=SMALL)


class TestNonlinearity:
    def test_primitive(self):
        s = np.linspace(0.1, 5.0, 30)
        h = 1e-6
        assert np.allclose((default_F(s + h) - default_F(s - h)) / (2 * h), default_f(s), atol=1e-8)
        assert np.allclose((default_f(s + h) - default_f(s - h)) / (2 * h), default_fprime(s), atol=1e-8)

    def test_vanishes_for_negative_argument(self):
        assert default_f(-2.0) == 0.0
        assert default_F(-2.0) == 0.0

    def test_constant(self, pm_small):
        exact = 2 ** (-1 / 3) / 1.5
        assert nonlinearity_constant(pm_small) == pytest.approx(exact, rel=1e-8)
        assert exact == pytest.approx(0.529, abs=1e-3)

    def test_zero_threshold(self, pm_small):
        c_f = nonlinearity_constant(pm_small)
        assert zero_solution_threshold(pm_small) == pytest.approx(1.0 / c_f, rel=1e-6)

    def test_hypotheses_report(self, pm_small):
        diag = check_pm_hypotheses(pm_small)
        assert diag['V_0'] == 1.0
        assert diag['W_sup'] == 1.0
        assert diag['V_at_region'] == pytest.approx(65.0)

    def test_linear_f_rejected(self):
        config = pm_config(mu=1.0, resolution=SMALL)
        config.f = lambda s: np.asarray(s, dtype=float)
        with pytest.raises(HypothesisError, match='o\\(s\\)'):
            check_pm_hypotheses(config)


class TestConfigValidation:
    def test_lambda_range_pm(self):
        with pytest.raises(HypothesisError, match='lambda'):
            pm_config(mu=1.0, lam=1.0)

    def test_negative_mu(self):
        with pytest.raises(HypothesisError, match='negative'):
            pm_config(mu=-1.0)

    def test_pm_needs_hyperbolic(self):
        with pytest.raises(DomainError, match='c < 0'):
            pm_config(mu=1.0, c=0.0)

    def test_lambda_range_hemisphere(self):
        with pytest.raises(HypothesisError, match='lambda'):
            hemisphere_config(lam=0.25)

    @pytest.mark.parametrize('p', [2.0, 6.0, 7.0])
    def test_exponent_range(self, p):
        with pytest.raises(HypothesisError, match='2 < p < 2\\*'):
            hemisphere_config(p=p)

    def test_b_range(self):
        with pytest.raises(DomainError, match='b must lie'):
            hemisphere_config(b=1.0)

    def test_two_poles(self):
        space = ModelSpace(3, -1.0)
        poles = PoleSet.on_axis(space, [-1.0, 0.0, 1.0])
        with pytest.raises(DomainError, match='two poles'):
            SchrodingerConfig('pm', space, poles, 0.5, mu=1.0)

    def test_unknown_kind(self):
        space = ModelSpace(3, -1.0)
        poles = PoleSet.on_axis(space, [-0.5, 0.5])
        with pytest.raises(ValueError, match='pm, hemisphere'):
            SchrodingerConfig('dirichlet', space, poles, 0.5)

    def test_defaults(self, hemi_small):
        assert hemi_small.lam == pytest.approx(1 / 8)
        assert hemi_small.region == pytest.approx(math.pi / 2)
        assert pm_config(mu=1.0).lam == 0.5


class TestDiscreteSystem:
    def test_stiffness_symmetric_psd(self, pm_small):
        A = pm_small.system.stiffness
        assert abs(A - A.T).max() < 1e-12
        u = np.random.default_rng(0).standard_normal(pm_small.system.size)
        assert float(u @ (A @ u)) > 0

    def test_zero_field(self, pm_small):
        system = pm_small.system
        zero = np.zeros(system.size)
        assert system.energy(zero) == 0.0
        assert np.all(system.gradient(zero) == 0.0)

    @pytest.mark.parametrize('which', ['pm', 'hemisphere'])
    def test_gradient_matches_difference_quotient(self, which, pm_small, hemi_small):
        config = pm_small if which == 'pm' else hemi_small
        system = config.system
        u = _bump_vector(config, radius=1.0 if which == 'hemisphere' else 2.0) * 1.5
        h = np.abs(np.random.default_rng(1).standard_normal(system.size)) * 0.1
        eps = 1e-6
        fd = (system.energy(u + eps * h) - system.energy(u - eps * h)) / (2 * eps)
        assert fd == pytest.approx(float(system.gradient(u) @ h), rel=1e-6, abs=1e-10)

    def test_hessian_matches_gradient_difference(self, pm_small):
        system = pm_small.system
        u = _bump_vector(pm_small) * 2.0
        h = _bump_vector(pm_small, t=0.5, radius=1.5)
        eps = 1e-6
        fd = (system.gradient(u + eps * h) - system.gradient(u - eps * h)) / (2 * eps)
        assert np.allclose(fd, system.hessian(u) @ h, atol=1e-7 * np.abs(fd).max())

    def test_public_energy_and_gradient(self, pm_small):
        system = pm_small.system
        field = system.to_field(_bump_vector(pm_small))
        assert energy_pm(pm_small, field) == pytest.approx(system.energy(system.to_vector(field)))
        grad = gradient_pm(pm_small, field)
        assert np.all(grad.values[-1] == 0)
        with pytest.raises(ValueError, match='expected a pm problem'):
            energy_pm(hemisphere_config(resolution=SMALL), field)

    def test_wrong_vector_size(self, pm_small):
        with pytest.raises(ValueError, match='interior values'):
            pm_small.system.to_vector(np.zeros(3))

    def test_quadratic_part_positive(self, pm_small):
        assert smallest_eigenvalue(pm_small, seed=1) > 0


class TestMu0:
    def test_estimate_is_attained(self, pm_small):
        estimate, field = mu0_estimate(pm_small)
        system = pm_small.system
        u = system.to_vector(field)
        norm2 = float(u @ (system.preconditioner @ u))
        mass = float(np.sum(system.w * system.W * default_F(u)))
        assert estimate == pytest.approx(norm2 / (2 * mass), rel=1e-9)
        assert estimate > zero_solution_threshold(pm_small)

    def test_larger_family_lowers_estimate(self, pm_small):
        base, _ = mu0_estimate(pm_small)
        extra = [pm_small.system.to_field(_bump_vector(pm_small, t=0.3, radius=1.5))]
        from hardylab.variational import default_trial_fields
        lowered, _ = mu0_estimate(pm_small, default_trial_fields(pm_small) + extra)
        assert lowered <= base

    def test_no_positive_mass(self, pm_small):
        zero = ScalarField.zeros(pm_small.system.grid)
        with pytest.raises(HypothesisError, match='int W F'):
            mu0_estimate(pm_small, [zero])


class TestSolvePm:
    def test_small_mu_gives_zero(self):
        config = pm_config(mu=0.5, resolution=SMALL)
        results = solve_pm(config, starts=3, seed=1)
        assert len(results) == 3
        assert all(r.classification != 'mountain-pass' for r in results)
        for r in results:
            assert r.energy >= -1e-10
            assert np.max(np.abs(r.field.values)) < 1e-5

    def test_large_mu_gives_two_critical_points(self):
        probe = pm_config(mu=1.0, resolution=SMALL)
        mu0, _ = mu0_estimate(probe)
        config = pm_config(mu=2.0 * mu0, resolution=SMALL)
        calls = []
        results = solve_pm(config, starts=3, seed=1,
                           progress_callback=lambda done, total: calls.append((done, total)))
        assert len(results) == 4
        assert results[-1].classification == 'mountain-pass'
        assert results[-1].diagnostics['candidate'] is True
        best = min(results[:-1], key=lambda r: r.energy)
        assert best.classification == 'global-min'
        assert best.energy < 0
        assert calls[-1] == (4, 4)
        data = best.to_dict()
        assert data['grid']['shape'] == list(SMALL)
        assert data['diagnostics']['mu'] == pytest.approx(2.0 * mu0)

        change = truncation_sensitivity(config, best, radius=10.0)
        assert 0 <= change < 0.05


class TestHemisphere:
    def test_rotation_fixes_axis_and_north_pole(self, hemi_small):
        space = hemi_small.space
        rot = g0_rotation(space, np.random.default_rng(0))
        assert np.allclose(rot @ rot.T, np.eye(space.dim))
        assert np.allclose(rot @ space.axis_vector(0), space.axis_vector(0))
        assert np.allclose(rot @ space.origin().coords, space.origin().coords)

    def test_rotation_needs_sphere(self):
        with pytest.raises(DomainError, match='sphere'):
            g0_rotation(ModelSpace(3, -1.0), np.random.default_rng(0))

    def test_energy_invariant_under_rotation(self, hemi_small):
        field = hemi_small.system.to_field(_bump_vector(hemi_small, radius=1.0))
        base = energy_hemisphere(hemi_small, field)
        rng = np.random.default_rng(3)
        for _ in range(3):
            rotated = energy_hemisphere(hemi_small, field, g0_rotation(hemi_small.space, rng))
            assert abs(rotated - base) <= 1e-12 * max(1.0, abs(base))

    def test_nehari_projection_is_stationary(self, hemi_small):
        system = hemi_small.system
        field = system.to_field(_bump_vector(hemi_small, radius=1.0))
        t, projected = nehari_projection(hemi_small, field)
        u = system.to_vector(projected)
        quad = float(u @ (system.quadratic @ u))
        power = float(np.sum(system.w * np.abs(u) ** hemi_small.p))
        assert t > 0
        assert quad == pytest.approx(power, rel=1e-10)

    def test_zero_field_has_no_projection(self, hemi_small):
        with pytest.raises(DomainError, match='Nehari'):
            nehari_projection(hemi_small, ScalarField.zeros(hemi_small.system.grid))

    def test_ground_state(self, hemi_small):
        result = solve_hemisphere(hemi_small)
        diag = result.diagnostics
        assert result.classification == 'nehari'
        assert result.energy > 0
        assert abs(diag['nehari_defect']) < 1e-6
        assert diag['ground_level'] == pytest.approx(result.energy, rel=1e-6)
        assert diag['beta'] == pytest.approx(math.acos(0.8), rel=1e-12)
        assert result.min_value >= -1e-8
        assert np.all(result.field.values[-1] == 0)
