"""Comparison-geometry checks on space forms.

A geodesic triangle x_i x_j x is compared with the triangle of equal
side lengths in the space form of curvature k0. Under K >= k0 the angle
at x dominates the comparison angle, so

    cos(gamma_M) <= cos(gamma_k0)

and the pairwise Hardy weight dominates the curved bipolar weight
pointwise. The randomized suites here check these facts, and the Laplace
comparison bounds, on seeded samples.
"""

import logging
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from hardylab.config import Config
from hardylab.curvature_fn import ct_c, injectivity_radius
from hardylab.errors import DomainError, HypothesisError
from hardylab.hardy import weight_bipolar_curved, weight_pairwise_gradient
from hardylab.model_space import (
    ModelPoint,
    ModelSpace,
    angle_cosine,
    cosine_law_angle,
    distance,
)

logger = logging.getLogger(__name__)

ANGLE_TOLERANCE = 1e-9
WEIGHT_TOLERANCE = 1e-10
MIN_ANGLE = 1e-4


@dataclass(frozen=True)
class GeodesicTriangle:
    """Triangle with vertices x_i, x_j and x.

    Attributes:
        space: ModelSpace containing the vertices.
        vertices: (x_i, x_j, x) as single ModelPoints.
        d_i, d_j: Distances from x to x_i and x_j.
        d_ij: Distance from x_i to x_j.
        gamma: Angle at x.
        alpha_i, alpha_j: Angles at x_i and x_j.
    """

    space: ModelSpace
    vertices: tuple
    d_i: float
    d_j: float
    d_ij: float
    gamma: float
    alpha_i: float
    alpha_j: float

    @property
    def perimeter(self):
        return self.d_i + self.d_j + self.d_ij

    @property
    def angle_sum(self):
        return self.gamma + self.alpha_i + self.alpha_j


def _check_perimeter(c, perimeter):
    if c > 0 and perimeter >= 2.0 * injectivity_radius(c):
        raise DomainError(
            f'triangle perimeter {perimeter:.12g} must be below 2 pi/sqrt(c) = '
            f'{2 * injectivity_radius(c):.12g}'
        )


def triangle_from_points(x_i, x_j, x):
    """GeodesicTriangle realized by three points; angles from the metric."""
    d_i = distance(x, x_i)
    d_j = distance(x, x_j)
    d_ij = distance(x_i, x_j)
    if min(d_i, d_j, d_ij) <= 0:
        raise DomainError('degenerate triangle: vertices coincide')
    _check_perimeter(x.space.c, d_i + d_j + d_ij)
    return GeodesicTriangle(
        space=x.space,
        vertices=(x_i, x_j, x),
        d_i=d_i,
        d_j=d_j,
        d_ij=d_ij,
        gamma=math.acos(angle_cosine(x, x_i, x_j)),
        alpha_i=math.acos(angle_cosine(x_i, x_j, x)),
        alpha_j=math.acos(angle_cosine(x_j, x_i, x)),
    )


def comparison_triangle(c_target, triangle):
    """Triangle with the same side lengths in the space form of curvature c_target.

    The comparison vertex x sits at the origin, x_i on the e_1 axis and
    x_j in the (e_1, e_2) plane.

    Raises:
        DomainError: If the sides do not fit (perimeter >= 2 pi/sqrt(c_target)).
    """
    _check_perimeter(c_target, triangle.perimeter)
    d_i, d_j, d_ij = triangle.d_i, triangle.d_j, triangle.d_ij
    gamma = math.acos(cosine_law_angle(c_target, d_i, d_j, d_ij))
    alpha_i = math.acos(cosine_law_angle(c_target, d_i, d_ij, d_j))
    alpha_j = math.acos(cosine_law_angle(c_target, d_j, d_ij, d_i))

    target = ModelSpace(triangle.space.n, c_target)
    o = target.origin()
    v_i = d_i * target.axis_vector(0)
    v_j = d_j * (math.cos(gamma) * target.axis_vector(0) + math.sin(gamma) * target.axis_vector(1))
    return GeodesicTriangle(
        space=target,
        vertices=(target.exp(o, v_i), target.exp(o, v_j), o),
        d_i=d_i,
        d_j=d_j,
        d_ij=d_ij,
        gamma=gamma,
        alpha_i=alpha_i,
        alpha_j=alpha_j,
    )


@dataclass
class CheckSummary:
    """Pass/fail summary of a check suite.

    worst_margin is the smallest (allowed side - checked side) seen;
    a suite passes when it is at least -tolerance.
    """

    name: str
    passed: bool
    count: int
    failures: int
    worst_margin: float
    tolerance: float
    config: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'count': self.count,
            'failures': self.failures,
            'worst_margin': self.worst_margin,
            'tolerance': self.tolerance,
            'config': dict(self.config),
        }


def _require_lower_bound(space, k0):
    if k0 > space.c:
        raise HypothesisError(
            f'comparison hypothesis violated: k0 = {k0} exceeds the curvature c = {space.c}',
            'sectional curvature K >= k0',
        )


def toponogov_check(space, triangle, k0, tol=ANGLE_TOLERANCE):
    """Compare the angle at x with the comparison angle in curvature k0.

    Returns:
        (gamma_M, gamma_M0, passed) with passed = gamma_M0 <= gamma_M + tol.

    Raises:
        HypothesisError: If k0 > c.
    """
    _require_lower_bound(space, k0)
    if triangle.space != space:
        raise DomainError('triangle does not live in the given space')
    gamma_m0 = comparison_triangle(k0, triangle).gamma
    return triangle.gamma, gamma_m0, gamma_m0 <= triangle.gamma + tol


def laplace_comparison_check(c_space, c_bound, side, r_grid, n=3):
    """Check (n-1) ct_c_bound against (n-1) ct_c_space on a radius grid.

    side='upper' models K <= c_bound and asserts the space Laplacian of
    the distance is at least the bound; side='lower' models K >= c_bound
    and asserts it is at most the bound. Radii outside the shared domain
    (0, pi/sqrt(max c)) are dropped.

    Raises:
        HypothesisError: If c_space lies on the wrong side of c_bound.
        ValueError: For an unknown side.
    """
    if side not in ('upper', 'lower'):
        raise ValueError(f'Unknown side "{side}". Must be one of: upper, lower')
    if side == 'upper' and c_space > c_bound:
        raise HypothesisError(
            f'upper Laplace comparison needs c_space <= c_bound, got {c_space} > {c_bound}',
            'sectional curvature K <= c_bound',
        )
    if side == 'lower' and c_space < c_bound:
        raise HypothesisError(
            f'lower Laplace comparison needs c_space >= c_bound, got {c_space} < {c_bound}',
            'sectional curvature K >= c_bound',
        )
    r = np.asarray(r_grid, dtype=float)
    limit = injectivity_radius(max(c_space, c_bound))
    r = r[(r > 0) & (r < limit)]
    lap_space = (n - 1) * np.asarray(ct_c(c_space, r))
    lap_bound = (n - 1) * np.asarray(ct_c(c_bound, r))
    margin = lap_space - lap_bound if side == 'upper' else lap_bound - lap_space
    slack = 1e-12 * np.maximum(1.0, np.abs(lap_space))
    failures = int(np.sum(margin < -slack))
    return CheckSummary(
        name=f'laplace-{side}',
        passed=failures == 0,
        count=int(r.size),
        failures=failures,
        worst_margin=float(margin.min()) if r.size else 0.0,
        tolerance=1e-12,
        config={'c_space': c_space, 'c_bound': c_bound, 'n': n},
    )


def cosine_chain_check(space, pole_i, pole_j, points, k0, tol=WEIGHT_TOLERANCE):
    """Pointwise weight_pairwise_gradient >= weight_bipolar_curved(., k0).

    Args:
        points: Batch ModelPoint avoiding both poles.

    Returns:
        CheckSummary over the samples; the tolerance scales with the weight.

    Raises:
        HypothesisError: If k0 > c.
    """
    _require_lower_bound(space, k0)
    w_pair = np.atleast_1d(weight_pairwise_gradient(points, pole_i, pole_j))
    w_curved = np.atleast_1d(weight_bipolar_curved(points, pole_i, pole_j, k0))
    margin = w_pair - w_curved
    slack = tol * np.maximum(1.0, np.abs(w_pair))
    failures = int(np.sum(margin < -slack))
    return CheckSummary(
        name='cosine-chain',
        passed=failures == 0,
        count=int(margin.size),
        failures=failures,
        worst_margin=float(margin.min()),
        tolerance=tol,
        config={'n': space.n, 'c': space.c, 'k0': float(k0)},
    )


def sampling_radius(space):
    """Radius min(1, 0.4 pi/sqrt(c)) of the ball random samples are drawn from."""
    if space.c > 0:
        return min(1.0, 0.4 * math.pi / math.sqrt(space.c))
    return 1.0


def random_points(space, count, rng, radius=None):
    """Uniform tangent-ball samples at the origin mapped by the exponential map."""
    radius = sampling_radius(space) if radius is None else radius
    n = space.n
    direction = rng.standard_normal((count, n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / n)
    v = np.zeros((count, space.dim))
    v[:, :n] = direction * r[:, None]
    return space.exp(space.origin(), v)


def random_triangles(space, count, seed):
    """Sample count vertex triples in the sampling ball.

    Triangles with an angle below MIN_ANGLE (by the cosine law) are
    dropped and redrawn.

    Returns:
        Tuple of three batch ModelPoints (x_i, x_j, x).
    """
    rng = np.random.default_rng(seed)
    kept = [[], [], []]
    have = 0
    while have < count:
        batch = max(2 * (count - have), 16)
        a = random_points(space, batch, rng)
        b = random_points(space, batch, rng)
        x = random_points(space, batch, rng)
        d_i = np.asarray(distance(x, a))
        d_j = np.asarray(distance(x, b))
        d_ij = np.asarray(distance(a, b))
        ok = (d_i > 0) & (d_j > 0) & (d_ij > 0)
        ok &= (d_ij < d_i + d_j) & (np.abs(d_i - d_j) < d_ij)
        if space.c > 0:
            ok &= d_i + d_j + d_ij < 2.0 * injectivity_radius(space.c) * (1 - 1e-12)
        idx = np.flatnonzero(ok)
        angles = np.stack([
            np.arccos(cosine_law_angle(space.c, d_i[idx], d_j[idx], d_ij[idx])),
            np.arccos(cosine_law_angle(space.c, d_i[idx], d_ij[idx], d_j[idx])),
            np.arccos(cosine_law_angle(space.c, d_j[idx], d_ij[idx], d_i[idx])),
        ])
        idx = idx[angles.min(axis=0) >= MIN_ANGLE][:count - have]
        for bucket, pts in zip(kept, (a, b, x)):
            bucket.append(pts.coords[idx])
        have += idx.size
    return tuple(ModelPoint(np.concatenate(bucket), space) for bucket in kept)


def toponogov_suite(space, k0, count=None, seed=None, progress_callback=None):
    """Randomized Toponogov angle comparison over count triangles.

    The realized angle at x comes from the distance gradients, the
    comparison angle from the cosine law in curvature k0.
    """
    _require_lower_bound(space, k0)
    count = count or Config.SAMPLE_COUNT
    seed = Config.DEFAULT_SEED if seed is None else seed
    x_i, x_j, x = random_triangles(space, count, seed)
    gamma_m = np.arccos(angle_cosine(x, x_i, x_j))
    gamma_m0 = np.arccos(cosine_law_angle(
        k0,
        np.asarray(distance(x, x_i)),
        np.asarray(distance(x, x_j)),
        np.asarray(distance(x_i, x_j)),
    ))
    margin = gamma_m - gamma_m0
    failures = int(np.sum(margin < -ANGLE_TOLERANCE))
    if progress_callback:
        progress_callback(count, count)
    summary = CheckSummary(
        name='toponogov',
        passed=failures == 0,
        count=count,
        failures=failures,
        worst_margin=float(margin.min()),
        tolerance=ANGLE_TOLERANCE,
        config={'n': space.n, 'c': space.c, 'k0': float(k0), 'seed': seed},
    )
    logger.info(f'toponogov c={space.c} k0={k0}: {count - failures}/{count} passed')
    return summary


def cosine_chain_suite(space, poles, k0, count=None, seed=None, progress_callback=None):
    """cosine_chain_check for every pole pair at count random points.

    Points closer than 1e-3 times the pole separation to a pole are redrawn.
    """
    _require_lower_bound(space, k0)
    count = count or Config.SAMPLE_COUNT
    seed = Config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    radius = max(sampling_radius(space), poles.max_origin_distance() * 1.5)
    if space.c > 0:
        radius = min(radius, 0.49 * space.max_distance)
    keep_out = 1e-3 * poles.min_distance
    chunks = []
    have = 0
    while have < count:
        pts = random_points(space, 2 * (count - have), rng, radius)
        ok = np.ones(len(pts), dtype=bool)
        for pole in poles:
            ok &= np.asarray(distance(pts, pole)) > keep_out
        coords = pts.coords[ok][:count - have]
        chunks.append(coords)
        have += coords.shape[0]
    points = ModelPoint(np.concatenate(chunks), space)

    pairs = poles.pairs()
    results = []
    for k, (i, j) in enumerate(pairs, start=1):
        results.append(cosine_chain_check(space, poles[i], poles[j], points, k0))
        if progress_callback:
            progress_callback(k, len(pairs))
    failures = sum(r.failures for r in results)
    summary = CheckSummary(
        name='cosine-chain',
        passed=failures == 0,
        count=count * len(pairs),
        failures=failures,
        worst_margin=min(r.worst_margin for r in results),
        tolerance=WEIGHT_TOLERANCE,
        config={'n': space.n, 'c': space.c, 'k0': float(k0), 'seed': seed, 'm': poles.m},
    )
    logger.info(f'cosine chain c={space.c} k0={k0}: {summary.count - failures}/{summary.count} passed')
    return summary
