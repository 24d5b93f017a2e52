"""Tests for the space-form geometry."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.comparison import random_points
from hardylab.curvature_fn import ct_c
from hardylab.errors import DomainError, SpaceMismatchError
from hardylab.model_space import (
    ModelPoint, ModelSpace, PoleSet, angle_cosine, cosine_law_angle, distance,
    exp_map, grad_distance, laplacian_distance, log_map, midpoint,
)

SPACES = [
    ModelSpace(3, 0.0),
    ModelSpace(3, 1.0, hemisphere=True),
    ModelSpace(3, -1.0),
    ModelSpace(4, -4.0),
    ModelSpace(4, 0.25, hemisphere=True),
]


def _ids(space):
    return f'n{space.n}-c{space.c:g}'


class TestModelSpace:
    def test_dimension_guard(self):
        with pytest.raises(DomainError, match='>= 3'):
            ModelSpace(2, 0.0)

    def test_hemisphere_needs_positive_curvature(self):
        with pytest.raises(DomainError, match='hemisphere'):
            ModelSpace(3, -1.0, hemisphere=True)

    def test_kind(self):
        assert ModelSpace(3, 0).kind == 'euclidean'
        assert ModelSpace(3, 2).kind == 'spherical'
        assert ModelSpace(3, -2).kind == 'hyperbolic'

    def test_embedding_dimension(self):
        assert ModelSpace(3, 0.0).dim == 3
        assert ModelSpace(3, -1.0).dim == 4

    def test_origin_is_north_pole(self):
        o = ModelSpace(3, 4.0).origin()
        assert np.allclose(o.coords, [0, 0, 0, 0.5])

    def test_axis_point_distance(self):
        for space in SPACES:
            p = space.axis_point(0.7)
            assert distance(space.origin(), p) == pytest.approx(0.7, rel=1e-12)
            assert p.coords[0] > 0


class TestModelPoint:
    def test_off_sphere_rejected(self):
        with pytest.raises(DomainError, match='sphere'):
            ModelPoint([1.0, 1.0, 0.0, 0.0], ModelSpace(3, 1.0))

    def test_lower_sheet_rejected(self):
        with pytest.raises(DomainError, match='hyperboloid'):
            ModelPoint([0.0, 0.0, 0.0, -1.0], ModelSpace(3, -1.0))

    def test_southern_point_rejected_on_hemisphere(self):
        with pytest.raises(DomainError, match='hemisphere'):
            ModelPoint([0.0, 0.0, 0.6, -0.8], ModelSpace(3, 1.0, hemisphere=True))

    def test_wrong_shape(self):
        with pytest.raises(ValueError, match='shape'):
            ModelPoint([1.0, 2.0], ModelSpace(3, 0.0))

    def test_coords_are_read_only(self):
        p = ModelPoint([1.0, 2.0, 3.0], ModelSpace(3, 0.0))
        with pytest.raises(ValueError):
            p.coords[0] = 5.0

    def test_batch_indexing(self):
        space = ModelSpace(3, 0.0)
        batch = ModelPoint(np.eye(3), space)
        assert batch.is_batch
        assert len(batch) == 3
        assert np.array_equal(batch[1].coords, [0.0, 1.0, 0.0])

    def test_project_repairs_drift(self):
        space = ModelSpace(3, -1.0)
        p = space.point([0.3, 0.2, 0.1, 1.0], project=True)
        assert space.inner(p.coords, p.coords) == pytest.approx(-1.0, rel=1e-14)


class TestDistance:
    def test_euclidean(self):
        space = ModelSpace(3, 0.0)
        assert distance(ModelPoint([0, 0, 0], space), ModelPoint([3, 4, 0], space)) == 5.0

    def test_quarter_great_circle(self):
        space = ModelSpace(3, 1.0)
        north = space.origin()
        equator = ModelPoint([1.0, 0.0, 0.0, 0.0], space)
        assert distance(north, equator) == pytest.approx(math.pi / 2, rel=1e-14)

    def test_hyperboloid(self):
        space = ModelSpace(3, -1.0)
        y = ModelPoint([math.sinh(1), 0, 0, math.cosh(1)], space)
        assert distance(space.origin(), y) == pytest.approx(1.0, rel=1e-14)

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            distance(ModelSpace(3, 0.0).origin(), ModelSpace(4, 0.0).origin())

    @pytest.mark.parametrize('space', SPACES, ids=_ids)
    def test_symmetry_and_triangle_inequality(self, space):
        rng = np.random.default_rng(7)
        x, y, z = (random_points(space, 500, rng) for _ in range(3))
        dxy = distance(x, y)
        assert np.allclose(dxy, distance(y, x), rtol=1e-12, atol=0)
        assert np.all(distance(x, z) <= dxy + distance(y, z) + 1e-12)

    def test_zero_iff_equal(self):
        space = ModelSpace(3, -1.0)
        p = space.axis_point(1.3)
        assert distance(p, p) == 0.0


class TestLogExp:
    @pytest.mark.parametrize('space', SPACES, ids=_ids)
    def test_exp_inverts_log(self, space):
        rng = np.random.default_rng(11)
        x = random_points(space, 300, rng)
        y = random_points(space, 300, rng)
        back = exp_map(x, log_map(x, y))
        assert np.max(np.abs(back.coords - y.coords)) < 1e-9

    @pytest.mark.parametrize('space', SPACES, ids=_ids)
    def test_norm_and_tangency(self, space):
        rng = np.random.default_rng(12)
        x = random_points(space, 300, rng)
        y = random_points(space, 300, rng)
        v = log_map(x, y)
        assert np.allclose(np.sqrt(space.inner(v, v)), distance(x, y), rtol=1e-10)
        if space.c != 0:
            assert np.max(np.abs(space.inner(v, x.coords))) < 1e-10

    def test_flat_log_is_difference(self):
        space = ModelSpace(3, 0.0)
        x = ModelPoint([1.0, 2.0, 3.0], space)
        y = ModelPoint([0.5, -1.0, 2.0], space)
        assert np.array_equal(log_map(x, y), y.coords - x.coords)

    def test_sphere_log_to_equator(self):
        space = ModelSpace(3, 1.0)
        y = ModelPoint([0.0, 1.0, 0.0, 0.0], space)
        v = log_map(space.origin(), y)
        assert np.allclose(v, [0.0, math.pi / 2, 0.0, 0.0], atol=1e-14)

    def test_coincident_points(self):
        space = ModelSpace(3, -1.0)
        with pytest.raises(DomainError, match='coincide'):
            log_map(space.origin(), space.origin())

    def test_midpoint(self):
        for space in SPACES:
            a, b = space.axis_point(-0.4), space.axis_point(0.6)
            m = midpoint(a, b)
            assert distance(m, a) == pytest.approx(0.5, rel=1e-10)
            assert distance(m, b) == pytest.approx(0.5, rel=1e-10)


class TestGradient:
    @pytest.mark.parametrize('space', SPACES, ids=_ids)
    def test_eikonal(self, space):
        rng = np.random.default_rng(3)
        x = random_points(space, 10000, rng)
        pole = space.axis_point(0.3)
        g = grad_distance(x, pole)
        assert np.max(np.abs(np.sqrt(space.inner(g, g)) - 1.0)) < 1e-10

    def test_flat_gradient(self):
        space = ModelSpace(3, 0.0)
        x = ModelPoint([3.0, 4.0, 0.0], space)
        assert np.allclose(grad_distance(x, space.origin()), [0.6, 0.8, 0.0])

    def test_sphere_printed_formula(self):
        """grad d = (x cos d - pole)/sin d on the unit sphere."""
        space = ModelSpace(3, 1.0)
        rng = np.random.default_rng(5)
        x = random_points(space, 200, rng)
        pole = space.axis_point(0.5)
        d = distance(x, pole)
        expected = (x.coords * np.cos(d)[:, None] - pole.coords) / np.sin(d)[:, None]
        assert np.allclose(grad_distance(x, pole), expected, atol=1e-10)

    def test_at_pole(self):
        space = ModelSpace(3, 0.0)
        with pytest.raises(DomainError):
            grad_distance(space.origin(), space.origin())


class TestLaplacian:
    def test_values(self):
        assert laplacian_distance(ModelSpace(3, 0.0), 2.0) == 1.0
        assert laplacian_distance(ModelSpace(3, 1.0), math.pi / 2) == pytest.approx(0.0, abs=1e-15)
        assert laplacian_distance(ModelSpace(4, -1.0), 1.0) == pytest.approx(3 / math.tanh(1.0))

    def test_comparison_ordering(self):
        """(n-1) ct_c' <= (n-1) ct_c whenever c <= c'."""
        r = np.linspace(0.01, 3.0, 300)
        for c, c_prime in [(-4.0, -1.0), (-1.0, 0.0), (0.0, 1.0)]:
            assert np.all(ct_c(c_prime, r) <= ct_c(c, r))


class TestCosines:
    def test_between_poles_is_minus_one(self):
        space = ModelSpace(3, 0.0)
        x = ModelPoint([0.2, 0.0, 0.0], space)
        assert angle_cosine(x, space.axis_point(-1.0), space.axis_point(1.0)) == pytest.approx(-1.0)

    def test_beyond_pole_is_plus_one(self):
        space = ModelSpace(3, 0.0)
        x = ModelPoint([3.0, 0.0, 0.0], space)
        assert angle_cosine(x, space.axis_point(-1.0), space.axis_point(1.0)) == pytest.approx(1.0)

    def test_cosine_law_right_angle(self):
        assert cosine_law_angle(0.0, 3.0, 4.0, 5.0) == pytest.approx(0.0, abs=1e-15)

    def test_cosine_law_degenerate_flat(self):
        assert cosine_law_angle(0.0, 1.0, 1.0, 2.0) == pytest.approx(-1.0)

    def test_spherical_equilateral(self):
        h = math.pi / 2
        assert cosine_law_angle(1.0, h, h, h) == pytest.approx(0.0, abs=1e-15)

    def test_triangle_inequality_violation(self):
        with pytest.raises(DomainError, match='triangle inequality'):
            cosine_law_angle(0.0, 1.0, 1.0, 3.0)

    def test_spherical_perimeter(self):
        with pytest.raises(DomainError, match='perimeter'):
            cosine_law_angle(1.0, 2.0, 2.0, 2.5)

    @pytest.mark.parametrize('space', SPACES, ids=_ids)
    def test_angle_matches_cosine_law(self, space):
        rng = np.random.default_rng(21)
        x = random_points(space, 400, rng)
        pi_, pj = space.axis_point(-0.3), space.axis_point(0.45)
        di, dj, dij = distance(x, pi_), distance(x, pj), distance(pi_, pj)
        keep = (di > 1e-2) & (dj > 1e-2)
        realized = angle_cosine(x, pi_, pj)[keep]
        law = cosine_law_angle(space.c, di[keep], dj[keep], dij)
        assert np.max(np.abs(realized - law)) < 1e-9

    @given(
        c=st.sampled_from([-4.0, -1.0, 0.0, 1.0]),
        a=st.floats(min_value=0.05, max_value=1.0),
        b=st.floats(min_value=0.05, max_value=1.0),
        t=st.floats(min_value=0.05, max_value=0.95),
    )
    @settings(max_examples=150, deadline=None)
    def test_cosine_law_in_range(self, c, a, b, t):
        e = abs(a - b) + t * (a + b - abs(a - b))
        val = cosine_law_angle(c, a, b, e)
        assert -1.0 <= val <= 1.0


class TestPoleSet:
    def test_needs_two_poles(self):
        space = ModelSpace(3, 0.0)
        with pytest.raises(DomainError, match='at least 2'):
            PoleSet([space.origin()])

    def test_coincident_poles(self):
        space = ModelSpace(3, 0.0)
        with pytest.raises(DomainError, match='coincide'):
            PoleSet.on_axis(space, [0.5, 0.5])

    def test_on_axis_outside_hemisphere(self):
        space = ModelSpace(3, 1.0, hemisphere=True)
        with pytest.raises(DomainError, match='hemisphere'):
            PoleSet.on_axis(space, [0.0, 1.6])

    def test_distances_cached_and_read_only(self):
        poles = PoleSet.on_axis(ModelSpace(3, 0.0), [-0.5, 0.5, 2.0])
        assert poles.m == 3
        assert poles.pairs() == [(0, 1), (0, 2), (1, 2)]
        assert poles.distances[0, 2] == pytest.approx(2.5)
        assert poles.min_distance == pytest.approx(1.0)
        with pytest.raises(ValueError):
            poles.distances[0, 1] = 3.0

    def test_symmetric(self):
        space = ModelSpace(3, 1.0, hemisphere=True)
        poles = PoleSet.symmetric(space, math.acos(0.8))
        assert poles.max_origin_distance() == pytest.approx(math.acos(0.8), rel=1e-12)
        assert np.allclose(poles[0].coords, [0.6, 0.0, 0.0, 0.8])
        assert np.allclose(poles[1].coords, [-0.6, 0.0, 0.0, 0.8])

    def test_axis_positions_recovered(self):
        space = ModelSpace(3, -1.0)
        poles = PoleSet([space.axis_point(-0.2), space.axis_point(1.1)])
        assert np.allclose(poles.axis_positions(), [-0.2, 1.1], atol=1e-12)
        assert poles.is_on_axis()

    def test_off_axis_detected(self):
        space = ModelSpace(3, 0.0)
        poles = PoleSet([ModelPoint([1.0, 0.0, 0.0], space), ModelPoint([0.0, 1.0, 0.0], space)])
        assert not poles.is_on_axis()
