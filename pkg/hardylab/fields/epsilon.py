"""Logarithmically cut-off test functions concentrating at two poles.

Around each pole x_i, with a = (2 - n)/2 and L = log(1/eps),

    u = log(d/eps^2)/L * d^a        on eps^2 <= d <= eps
    u = 2 log(sqrt(eps)/d)/L * d^a  on eps <= d <= sqrt(eps)
    u = 0                           otherwise

so u is continuous, equal to d^a at d = eps and zero at both ends. As
eps -> 0 its Rayleigh quotient approaches (n - 2)^2/4.
"""

import logging
import math

import numpy as np

from hardylab.errors import DomainError
from hardylab.fields.base import BaseField, radial_gradient
from hardylab.model_space import distance

logger = logging.getLogger(__name__)

# Smallest supported eps; d^a at d = eps^2 stays far from overflow for n <= 8.
EPSILON_FLOOR = 1e-5


class EpsilonFamily(BaseField):
    """Member u_eps of the two-pole log cut-off family.

    Attributes:
        epsilon: Parameter in [EPSILON_FLOOR, 1).
        poles: PoleSet with exactly two poles.
    """

    name = 'epsilon-family'

    def __init__(self, space, poles, epsilon):
        super().__init__(space)
        if poles.m != 2:
            raise DomainError(f'the epsilon family needs exactly two poles, got {poles.m}')
        if not EPSILON_FLOOR <= epsilon < 1:
            raise DomainError(
                f'epsilon must lie in [{EPSILON_FLOOR}, 1), got {epsilon}'
            )
        outer = math.sqrt(epsilon)
        if 2.0 * outer >= poles.min_distance:
            raise DomainError(
                f'supports overlap: 2 sqrt(eps) = {2 * outer:.6g} must be below '
                f'the pole separation {poles.min_distance:.6g}'
            )
        if space.c > 0 and outer >= space.max_distance / 2:
            raise DomainError('sqrt(eps) must stay below a quarter great circle')
        self.poles = poles
        self.epsilon = float(epsilon)
        self.exponent = (2.0 - space.n) / 2.0
        self.log_scale = math.log(1.0 / epsilon)

    @property
    def breakpoints(self):
        """Radii (eps^2, eps, sqrt(eps)) where the profile changes branch."""
        e = self.epsilon
        return (e * e, e, math.sqrt(e))

    def profile(self, d):
        """Radial profile phi(d) around one pole."""
        d = np.asarray(d, dtype=float)
        lo, mid, hi = self.breakpoints
        a, lam = self.exponent, self.log_scale
        out = np.zeros_like(d)
        inner = (d >= lo) & (d <= mid)
        outer = (d > mid) & (d <= hi)
        di = d[inner]
        out[inner] = np.log(di / lo) / lam * di ** a
        do = d[outer]
        out[outer] = 2.0 * np.log(hi / do) / lam * do ** a
        return out

    def slope(self, d):
        """phi'(d); one-sided values are used at the breakpoints."""
        d = np.asarray(d, dtype=float)
        lo, mid, hi = self.breakpoints
        a, lam = self.exponent, self.log_scale
        out = np.zeros_like(d)
        inner = (d > lo) & (d <= mid)
        outer = (d > mid) & (d < hi)
        di = d[inner]
        out[inner] = di ** (a - 1.0) / lam * (1.0 + a * np.log(di / lo))
        do = d[outer]
        out[outer] = 2.0 * do ** (a - 1.0) / lam * (-1.0 + a * np.log(hi / do))
        return out

    def values(self, points):
        total = sum(
            self.profile(np.atleast_1d(distance(points, p))) for p in self.poles
        )
        if points.is_batch:
            return total
        return float(total[0])

    def gradient(self, points):
        return sum(radial_gradient(points, p, self.slope) for p in self.poles)

    def support_bound(self, point):
        return max(distance(point, p) for p in self.poles) + math.sqrt(self.epsilon)
