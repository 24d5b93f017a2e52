"""Fields that depend on the distance to a single center."""

import logging

import numpy as np

from hardylab.errors import DomainError
from hardylab.fields.base import BaseField, radial_gradient
from hardylab.model_space import distance, midpoint

logger = logging.getLogger(__name__)


def _shaped(value, points):
    if points.is_batch:
        return np.asarray(value, dtype=float)
    return float(np.asarray(value).reshape(-1)[0])


class ZeroField(BaseField):
    """u = 0."""

    name = 'zero'

    def values(self, points):
        return _shaped(np.zeros(len(points)), points)

    def gradient(self, points):
        return np.zeros_like(points.coords)

    def support_bound(self, point):
        return 0.0

    @classmethod
    def from_spec(cls, space, poles, radius=None, power=None, amplitude=1.0):
        return cls(space)


class RadialBump(BaseField):
    """Smooth bump A exp(1 - 1/(1 - s^2)), s = d(x, center)/radius.

    Equals A at the center and vanishes with all derivatives at s = 1.
    """

    name = 'bump'

    def __init__(self, space, center, radius, amplitude=1.0):
        super().__init__(space)
        if radius <= 0:
            raise DomainError(f'bump radius must be positive, got {radius}')
        if space.c > 0 and radius >= space.max_distance / 2:
            raise DomainError('bump radius must stay below a quarter great circle')
        self.center = center
        self.radius = float(radius)
        self.amplitude = float(amplitude)

    def _profile(self, d):
        s = np.asarray(d) / self.radius
        out = np.zeros_like(s)
        inside = s < 1.0
        si = s[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
        return out

    def _slope(self, d):
        s = np.asarray(d) / self.radius
        out = np.zeros_like(s)
        inside = s < 1.0
        si = s[inside]
        q = 1.0 - si * si
        out[inside] = np.exp(1.0 - 1.0 / q) * (-2.0 * si / (q * q)) / self.radius
        return out

    def values(self, points):
        d = np.atleast_1d(distance(points, self.center))
        return _shaped(self.amplitude * self._profile(d), points)

    def gradient(self, points):
        return radial_gradient(points, self.center, lambda d: self.amplitude * self._slope(d))

    def support_bound(self, point):
        return distance(point, self.center) + self.radius

    @classmethod
    def from_spec(cls, space, poles, radius=None, power=None, amplitude=1.0):
        """Bump centred at the midpoint of the first two poles.

        The default radius is the pole separation, so both poles sit
        inside the support. On the sphere it is capped to keep the
        support inside the open upper hemisphere.
        """
        center = midpoint(poles[0], poles[1])
        if radius is None:
            radius = float(poles.distances[0, 1])
            if space.c > 0:
                room = space.max_distance / 2 - distance(space.origin(), center)
                radius = min(radius, 0.9 * room)
        return cls(space, center, radius, amplitude)


class TruncatedPower(BaseField):
    """u = A s^power (1 - s^2)^2 on s = d(x, center)/radius < 1.

    With power < 0 the field is singular at the center; it has finite
    Dirichlet energy as long as power > (2 - n)/2.
    """

    name = 'truncated-power'

    def __init__(self, space, center, radius, power=0.0, amplitude=1.0):
        super().__init__(space)
        if radius <= 0:
            raise DomainError(f'support radius must be positive, got {radius}')
        if space.c > 0 and radius >= space.max_distance / 2:
            raise DomainError('support radius must stay below a quarter great circle')
        critical = (2.0 - space.n) / 2.0
        if power <= critical:
            raise DomainError(
                f'power must exceed (2 - n)/2 = {critical} for finite energy, got {power}'
            )
        self.center = center
        self.radius = float(radius)
        self.power = float(power)
        self.amplitude = float(amplitude)

    def _profile(self, d):
        s = np.asarray(d) / self.radius
        out = np.zeros_like(s)
        inside = (s < 1.0) & (s > 0)
        si = s[inside]
        out[inside] = si ** self.power * (1.0 - si * si) ** 2
        if self.power == 0:
            out[s == 0] = 1.0
        return out

    def _slope(self, d):
        s = np.asarray(d) / self.radius
        out = np.zeros_like(s)
        inside = (s < 1.0) & (s > 0)
        si = s[inside]
        q = 1.0 - si * si
        p = self.power
        out[inside] = (p * si ** (p - 1) * q * q - 4.0 * si ** (p + 1) * q) / self.radius
        return out

    def values(self, points):
        d = np.atleast_1d(distance(points, self.center))
        if self.power < 0 and np.any(d == 0):
            raise DomainError('singular truncated power evaluated at its center')
        return _shaped(self.amplitude * self._profile(d), points)

    def gradient(self, points):
        return radial_gradient(points, self.center, lambda d: self.amplitude * self._slope(d))

    def support_bound(self, point):
        return distance(point, self.center) + self.radius

    def local_exponents(self, poles):
        exponents = [self.power if distance(pole, self.center) < 1e-12 else None for pole in poles]
        if all(p is None for p in exponents):
            return None
        return tuple(exponents)

    @classmethod
    def from_spec(cls, space, poles, radius=None, power=None, amplitude=1.0):
        """Truncated power centred on the first pole."""
        if radius is None:
            radius = float(poles.distances[0, 1])
        if power is None:
            power = 0.0
        return cls(space, poles[0], radius, power, amplitude)
