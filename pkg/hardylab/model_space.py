"""Exact geometry of the three simply connected space forms.

Points are stored in embedded coordinates:

    c = 0   R^n, no constraint
    c > 0   sphere |x|^2 = 1/c in R^(n+1)
    c < 0   hyperboloid <x,x>_M = -1/|c| in R^(n+1), last coordinate > 0,
            with the Minkowski form <x,y>_M = x_1 y_1 + ... + x_n y_n - x_(n+1) y_(n+1)

In these models distances, log maps and distance gradients have closed
forms. The base point ("origin") is 0 for c = 0 and (0, ..., 0, 1/sqrt|c|)
otherwise; the pole axis is the first coordinate direction e_1. Every
function accepts a single point (coords of shape (dim,)) or a batch of
points (coords of shape (N, dim)).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from hardylab.curvature_fn import c_c, ct_c, injectivity_radius, s_c
from hardylab.errors import DomainError, SpaceMismatchError

logger = logging.getLogger(__name__)

# Constraint drift accepted for user-supplied coordinates (relative).
CONSTRAINT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ModelSpace:
    """Space form of dimension n and sectional curvature c.

    Attributes:
        n: Dimension, at least 3.
        c: Sectional curvature.
        hemisphere: For c > 0, restrict to the open upper hemisphere
            (last embedded coordinate > 0).
    """

    n: int
    c: float
    hemisphere: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f'dimension must be an integer >= 3, got {self.n}')
        if not math.isfinite(self.c):
            raise DomainError(f'curvature must be finite, got {self.c}')
        if self.hemisphere and self.c <= 0:
            raise DomainError('the hemisphere restriction needs c > 0')
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'c', float(self.c))

    @property
    def kind(self):
        if self.c > 0:
            return 'spherical'
        if self.c < 0:
            return 'hyperbolic'
        return 'euclidean'

    @property
    def dim(self):
        """Length of the embedded coordinate vector."""
        return self.n if self.c == 0 else self.n + 1

    @property
    def radius(self):
        """Curvature radius 1/sqrt|c| (inf for c = 0)."""
        if self.c == 0:
            return math.inf
        return 1.0 / math.sqrt(abs(self.c))

    @property
    def max_distance(self):
        """Largest admissible distance from a point (pi/sqrt(c) or inf)."""
        return injectivity_radius(self.c)

    def inner(self, x, y):
        """Model bilinear form along the last axis of two coordinate arrays."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.c < 0:
            return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]
        return np.sum(x * y, axis=-1)

    def origin(self):
        """Base point: 0 for c = 0, the north pole otherwise."""
        coords = np.zeros(self.dim)
        if self.c != 0:
            coords[-1] = self.radius
        return ModelPoint(coords, self)

    def axis_vector(self, k=0):
        """Unit tangent vector e_(k+1) at the origin, k < n."""
        if not 0 <= k < self.n:
            raise ValueError(f'axis index must be in [0, {self.n}), got {k}')
        v = np.zeros(self.dim)
        v[k] = 1.0
        return v

    def project(self, coords):
        """Renormalize coordinates onto the model after arithmetic drift."""
        coords = np.array(coords, dtype=float)
        if self.c > 0:
            norm = np.linalg.norm(coords, axis=-1, keepdims=True)
            return coords * (self.radius / norm)
        if self.c < 0:
            spatial = coords[..., :-1]
            coords[..., -1] = np.sqrt(self.radius ** 2 + np.sum(spatial * spatial, axis=-1))
        return coords

    def point(self, coords, project=False):
        """Build a validated ModelPoint (optionally projecting first)."""
        if project:
            coords = self.project(coords)
        return ModelPoint(coords, self)

    def exp(self, x, v):
        """Exponential map exp_x(v) for tangent vectors v at x.

        Args:
            x: ModelPoint (single or batch).
            v: Tangent vectors, shape broadcastable to x.coords.

        Returns:
            ModelPoint on the geodesic from x with initial velocity v.
        """
        _check_space(self, x.space)
        v = np.asarray(v, dtype=float)
        if self.c == 0:
            return ModelPoint(x.coords + v, self)
        speed2 = np.maximum(self.inner(v, v), 0.0)
        speed = np.sqrt(speed2)
        safe = np.where(speed > 0, speed, 1.0)
        cos_part = c_c(self.c, speed, strict=False)
        sin_part = s_c(self.c, speed, strict=False)
        coords = (
            np.asarray(cos_part)[..., None] * x.coords
            + (np.asarray(sin_part) / safe)[..., None] * v
        )
        return ModelPoint(self.project(coords), self)

    def axis_point(self, t):
        """Point(s) at signed geodesic distance t from the origin along e_1."""
        t = np.asarray(t, dtype=float)
        o = self.origin()
        v = t[..., None] * self.axis_vector(0)
        if t.ndim == 0:
            v = v.reshape(self.dim)
        return self.exp(o, v)


@dataclass(frozen=True, eq=False)
class ModelPoint:
    """A point (or batch of points) in embedded coordinates.

    Attributes:
        coords: Array of shape (dim,) or (N, dim).
        space: The ModelSpace the point lives in.
    """

    coords: np.ndarray
    space: ModelSpace = field(repr=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim not in (1, 2) or coords.shape[-1] != self.space.dim:
            raise ValueError(
                f'coords must have shape (dim,) or (N, dim) with dim = '
                f'{self.space.dim}, got {coords.shape}'
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError('coords must be finite')
        coords.setflags(write=False)
        object.__setattr__(self, 'coords', coords)
        self._validate()

    def _validate(self):
        sp = self.space
        if sp.c == 0:
            return
        target = sp.radius ** 2
        q = sp.inner(self.coords, self.coords)
        if sp.c > 0:
            drift = np.abs(q - target) / target
            if np.any(drift > CONSTRAINT_TOLERANCE):
                raise DomainError(
                    f'point is off the sphere |x|^2 = 1/c (relative drift '
                    f'{np.max(drift):.3e})'
                )
            if sp.hemisphere and np.any(self.coords[..., -1] <= 0):
                raise DomainError('point is outside the open upper hemisphere')
        else:
            scale = np.maximum(np.sum(self.coords * self.coords, axis=-1), target)
            drift = np.abs(q + target) / scale
            if np.any(drift > CONSTRAINT_TOLERANCE) or np.any(self.coords[..., -1] <= 0):
                raise DomainError(
                    'point is off the upper hyperboloid <x,x>_M = -1/|c|'
                )

    @property
    def is_batch(self):
        return self.coords.ndim == 2

    def __len__(self):
        return self.coords.shape[0] if self.is_batch else 1

    def __getitem__(self, idx):
        if not self.is_batch:
            raise TypeError('a single ModelPoint is not indexable')
        return ModelPoint(self.coords[idx], self.space)


def _check_space(a, b):
    if a != b:
        raise SpaceMismatchError(f'points belong to different spaces: {a} vs {b}')


def _shape_out(value, *points):
    if all(not p.is_batch for p in points):
        return float(value)
    return np.asarray(value, dtype=float)


def distance(x, y):
    """Geodesic distance between two points (or batches).

    Uses the chord forms 2R arcsin(|x-y|/2R) on the sphere and
    2R arcsinh(sqrt<x-y,x-y>_M / 2R) on the hyperboloid, which are
    accurate for nearby points.

    Raises:
        SpaceMismatchError: If x and y live in different spaces.
    """
    _check_space(x.space, y.space)
    sp = x.space
    diff = x.coords - y.coords
    if sp.c == 0:
        return _shape_out(np.linalg.norm(diff, axis=-1), x, y)
    q = np.maximum(sp.inner(diff, diff), 0.0)
    R = sp.radius
    half = np.sqrt(q) / (2.0 * R)
    if sp.c > 0:
        d = 2.0 * R * np.arcsin(np.minimum(half, 1.0))
    else:
        d = 2.0 * R * np.arcsinh(half)
    return _shape_out(d, x, y)


def _tangent_toward(x, y, d):
    """Unnormalized tangent u at x toward y with model norm s_c(d)."""
    sp = x.space
    diff = np.broadcast_to(y.coords - x.coords, np.broadcast_shapes(
        x.coords.shape, y.coords.shape)).copy()
    if sp.c == 0:
        return diff
    xx = sp.inner(x.coords, x.coords)
    dd = sp.inner(diff, diff)
    return diff + (dd / (2.0 * xx))[..., None] * x.coords


def _checked_distance(x, y, what):
    d = np.asarray(distance(x, y), dtype=float)
    if np.any(d == 0):
        raise DomainError(f'{what}: points coincide')
    sp = x.space
    if sp.c > 0 and np.any(d >= sp.max_distance * (1 - 1e-12)):
        raise DomainError(f'{what}: antipodal points have no unique geodesic')
    return d


def log_map(x, y):
    """Inverse exponential map exp_x^{-1}(y), a tangent vector at x.

    Its model norm equals distance(x, y).

    Raises:
        DomainError: For coincident or (c > 0) antipodal points.
    """
    _check_space(x.space, y.space)
    d = _checked_distance(x, y, 'log_map')
    u = _tangent_toward(x, y, d)
    scale = d / np.asarray(s_c(x.space.c, d, strict=False))
    return u * np.asarray(scale)[..., None]


def exp_map(x, v):
    """Exponential map exp_x(v); see ModelSpace.exp."""
    return x.space.exp(x, v)


def grad_distance(x, pole):
    """Unit gradient of d(., pole) at x, i.e. -log_map(x, pole)/d.

    Raises:
        DomainError: If x coincides with the pole.
    """
    _check_space(x.space, pole.space)
    d = _checked_distance(x, pole, 'grad_distance')
    u = _tangent_toward(x, pole, d)
    return -u / np.asarray(s_c(x.space.c, d, strict=False))[..., None]


def midpoint(x, y):
    """Geodesic midpoint of two distinct single points."""
    return x.space.exp(x, 0.5 * log_map(x, y))


def laplacian_distance(space, r):
    """Laplacian of the distance function at distance r: (n-1) ct_c(r)."""
    return (space.n - 1) * ct_c(space.c, r)


def angle_cosine(x, pole_i, pole_j):
    """Cosine of the angle at x between the geodesics to pole_i and pole_j."""
    gi = grad_distance(x, pole_i)
    gj = grad_distance(x, pole_j)
    val = np.clip(x.space.inner(gi, gj), -1.0, 1.0)
    if np.ndim(val) == 0:
        return float(val)
    return val


def cosine_law_angle(c, d_i, d_j, d_ij):
    """Cosine of the angle opposite d_ij in a triangle of curvature c.

    Evaluated in the curvature-uniform form

        cos g = 1 - 2 (s_c(d_ij/2)^2 - s_c(|d_i - d_j|/2)^2) / (s_c(d_i) s_c(d_j))

    which reduces to the Euclidean, spherical and hyperbolic laws of
    cosines and stays accurate for thin triangles.

    Raises:
        DomainError: For a zero side, a violated triangle inequality or,
            for c > 0, a perimeter of at least 2 pi/sqrt(c).
    """
    a = np.asarray(d_i, dtype=float)
    b = np.asarray(d_j, dtype=float)
    e = np.asarray(d_ij, dtype=float)
    scalar = a.ndim == 0 and b.ndim == 0 and e.ndim == 0
    a, b, e = np.broadcast_arrays(a, b, e)
    if np.any(a <= 0) or np.any(b <= 0) or np.any(e <= 0):
        raise DomainError('degenerate triangle: every side must be positive')
    slack = 1e-12 * (a + b + e)
    if np.any(e > a + b + slack) or np.any(np.abs(a - b) > e + slack):
        raise DomainError('side lengths violate the triangle inequality')
    if c > 0:
        if np.any(a + b + e >= 2.0 * injectivity_radius(c)):
            raise DomainError(
                f'triangle perimeter must be below 2 pi/sqrt(c) = '
                f'{2 * injectivity_radius(c):.12g}'
            )
    e_half = np.minimum(e, a + b) / 2.0
    m_half = np.minimum(np.abs(a - b), e) / 2.0
    num = np.asarray(s_c(c, e_half)) ** 2 - np.asarray(s_c(c, m_half)) ** 2
    den = np.asarray(s_c(c, a)) * np.asarray(s_c(c, b))
    val = np.clip(1.0 - 2.0 * num / den, -1.0, 1.0)
    if scalar:
        return float(val)
    return val


class PoleSet:
    """Ordered set of m >= 2 distinct poles with cached pairwise distances.

    For c > 0 every pole must lie in the open upper hemisphere, which is
    strictly convex.
    """

    def __init__(self, poles):
        poles = list(poles)
        if len(poles) < 2:
            raise DomainError(f'a pole set needs at least 2 poles, got {len(poles)}')
        space = poles[0].space
        for p in poles:
            _check_space(space, p.space)
            if p.is_batch:
                raise ValueError('poles must be single points')
        if space.c > 0:
            for k, p in enumerate(poles):
                if p.coords[-1] <= 0:
                    raise DomainError(
                        f'pole {k} is outside the open upper hemisphere'
                    )
        m = len(poles)
        dist = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                dij = distance(poles[i], poles[j])
                if dij <= 0:
                    raise DomainError(f'poles {i} and {j} coincide')
                dist[i, j] = dist[j, i] = dij
        dist.setflags(write=False)
        self.space = space
        self.poles = tuple(poles)
        self.distances = dist
        self._axis_positions = None

    @classmethod
    def on_axis(cls, space, positions):
        """Poles at signed geodesic distances along the axis through the origin."""
        positions = [float(t) for t in positions]
        if space.c > 0:
            limit = space.max_distance / 2.0
            bad = [t for t in positions if abs(t) >= limit]
            if bad:
                raise DomainError(
                    f'axis positions {bad} leave the open upper hemisphere '
                    f'(|t| must be below {limit:.12g})'
                )
        poles = [space.axis_point(t) for t in positions]
        pole_set = cls(poles)
        pole_set._axis_positions = np.array(positions)
        return pole_set

    @classmethod
    def symmetric(cls, space, beta):
        """Two poles at distance beta on either side of the origin."""
        return cls.on_axis(space, [beta, -beta])

    @property
    def m(self):
        return len(self.poles)

    def __len__(self):
        return len(self.poles)

    def __iter__(self):
        return iter(self.poles)

    def __getitem__(self, idx):
        return self.poles[idx]

    def pairs(self):
        """Index pairs (i, j) with i < j."""
        return [(i, j) for i in range(self.m) for j in range(i + 1, self.m)]

    @property
    def min_distance(self):
        return float(min(self.distances[i, j] for i, j in self.pairs()))

    def max_origin_distance(self):
        """Largest distance from the origin to a pole (beta on the hemisphere)."""
        o = self.space.origin()
        return max(distance(o, p) for p in self.poles)

    def axis_positions(self, tol=1e-9):
        """Signed positions of the poles along the e_1 axis.

        Raises:
            DomainError: If some pole is off the axis through the origin.
        """
        if self._axis_positions is not None:
            return self._axis_positions.copy()
        sp = self.space
        o = sp.origin()
        e1 = sp.axis_vector(0)
        out = []
        for k, p in enumerate(self.poles):
            if distance(o, p) == 0:
                out.append(0.0)
                continue
            v = log_map(o, p)
            along = float(sp.inner(v, e1))
            off = v - along * e1
            if math.sqrt(max(float(sp.inner(off, off)), 0.0)) > tol * (1 + abs(along)):
                raise DomainError(f'pole {k} is off the axis through the origin')
            out.append(along)
        return np.array(out)

    def is_on_axis(self):
        try:
            self.axis_positions()
        except DomainError:
            return False
        return True

    def __repr__(self):
        return f'<PoleSet m={self.m} {self.space}>'
