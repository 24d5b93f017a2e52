"""Linear combinations of test fields."""

import logging

import numpy as np

from hardylab.errors import SpaceMismatchError
from hardylab.fields.base import BaseField
from hardylab.fields.radial import RadialBump

logger = logging.getLogger(__name__)


class SumField(BaseField):
    """u = sum_k a_k u_k for fields u_k on a common space."""

    name = 'sum'

    def __init__(self, parts, coefficients=None):
        parts = list(parts)
        if not parts:
            raise ValueError('a sum field needs at least one part')
        space = parts[0].space
        for p in parts:
            if p.space != space:
                raise SpaceMismatchError('all parts of a sum field must share a space')
        super().__init__(space)
        if coefficients is None:
            coefficients = np.ones(len(parts))
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (len(parts),):
            raise ValueError(
                f'expected {len(parts)} coefficients, got shape {coefficients.shape}'
            )
        self.parts = parts
        self.coefficients = coefficients

    def values(self, points):
        total = sum(a * np.asarray(p.values(points)) for a, p in zip(self.coefficients, self.parts))
        if points.is_batch:
            return np.asarray(total, dtype=float)
        return float(total)

    def gradient(self, points):
        return sum(a * p.gradient(points) for a, p in zip(self.coefficients, self.parts))

    def support_bound(self, point):
        bounds = [p.support_bound(point) for a, p in zip(self.coefficients, self.parts) if a != 0]
        return max(bounds, default=0.0)


class BipolarBump(SumField):
    """One smooth bump centred on each pole, all with the same radius."""

    name = 'bipolar-bump'

    def __init__(self, space, poles, radius, amplitude=1.0):
        parts = [RadialBump(space, pole, radius, amplitude) for pole in poles]
        super().__init__(parts)
        self.poles = poles
        self.radius = float(radius)

    @classmethod
    def from_spec(cls, space, poles, radius=None, power=None, amplitude=1.0):
        """Bumps of radius half the smallest pole separation by default."""
        if radius is None:
            radius = 0.5 * poles.min_distance
        return cls(space, poles, radius, amplitude)
