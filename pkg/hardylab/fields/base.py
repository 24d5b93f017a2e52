"""Base interface for test fields.

Every test field u used by the verifiers and solvers inherits from
BaseField, so that new profiles can be plugged in by implementing
values() and gradient(). Gradients are analytic: the Hardy functionals
are dominated by |grad u|^2 near the poles, where finite differences
lose accuracy first.
"""

from abc import ABC, abstractmethod
import logging

import numpy as np

from hardylab.model_space import distance, grad_distance

logger = logging.getLogger(__name__)

# Boundary values below this fraction of max|u| count as zero.
SUPPORT_TOLERANCE = 1e-8


class BaseField(ABC):
    """Abstract base class for scalar test fields on a model space.

    Subclasses implement values() and gradient() for single points and
    batches, and report a support bound so callers can size grids.

    Example:
        class MyField(BaseField):
            name = 'mine'

            def values(self, points):
                return np.zeros(len(points))

            def gradient(self, points):
                return np.zeros_like(points.coords)
    """

    name: str = 'base'

    def __init__(self, space):
        self.space = space

    @abstractmethod
    def values(self, points):
        """Field values u(x).

        Args:
            points: ModelPoint, single or batch.

        Returns:
            Float for a single point, array (N,) for a batch.
        """
        pass

    @abstractmethod
    def gradient(self, points):
        """Riemannian gradient of u, as tangent vectors in embedded coordinates.

        Returns:
            Array (dim,) or (N, dim).
        """
        pass

    def support_bound(self, point):
        """Upper bound on the distance from point to the support of u."""
        return np.inf

    def local_exponents(self, poles):
        """Per-pole exponent p of u ~ A d^p near each pole, or None.

        Fields that blow up or vanish at a pole report p here so that
        quadrature rules can restore the excluded discs. The default,
        None, means no disc correction.
        """
        return None

    def is_admissible(self, rule):
        """Check that the field vanishes on the boundary nodes of a rule.

        Args:
            rule: AxiGrid or QmcRule.

        Returns:
            True if |u| <= SUPPORT_TOLERANCE * max|u| on the boundary band.
        """
        inside = np.abs(np.atleast_1d(self.values(rule.points)))
        scale = float(inside.max()) if inside.size else 0.0
        edge = np.abs(np.atleast_1d(self.values(rule.boundary_points())))
        if scale == 0.0:
            return bool(np.all(edge == 0.0))
        return bool(np.all(edge <= SUPPORT_TOLERANCE * scale))

    def gradient_norm_squared(self, points):
        """|grad u|^2 under the model metric."""
        g = self.gradient(points)
        val = self.space.inner(g, g)
        if np.ndim(val) == 0:
            return float(val)
        return val

    def __repr__(self):
        return f'<{self.__class__.__name__} {self.name} on {self.space}>'


def radial_gradient(points, center, dprofile):
    """Gradient of x -> f(d(x, center)) given dprofile(d) = f'(d).

    The value at the center itself is zero; callers whose profile has a
    nonzero slope there never evaluate it on a grid node.
    """
    d = np.atleast_1d(np.asarray(distance(points, center), dtype=float))
    coords = np.atleast_2d(points.coords)
    out = np.zeros_like(coords)
    away = d > 0
    if np.any(away):
        sub = points[np.flatnonzero(away)] if points.is_batch else points
        unit = np.atleast_2d(grad_distance(sub, center))
        out[away] = np.asarray(dprofile(d[away]))[:, None] * unit
    if points.is_batch:
        return out
    return out[0]
