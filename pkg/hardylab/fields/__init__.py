"""Test-field profiles.

Profiles named in experiment spec files are looked up in FIELD_PROFILES;
each class provides a from_spec() constructor taking the space, the pole
set and the optional FIELD_RADIUS / FIELD_POWER / FIELD_AMPLITUDE values.
"""

from hardylab.fields.base import BaseField, radial_gradient
from hardylab.fields.composite import BipolarBump, SumField
from hardylab.fields.epsilon import EPSILON_FLOOR, EpsilonFamily
from hardylab.fields.radial import RadialBump, TruncatedPower, ZeroField

FIELD_PROFILES = {
    'zero': ZeroField,
    'bump': RadialBump,
    'truncated-power': TruncatedPower,
    'bipolar-bump': BipolarBump,
}


def get_field_profile(name):
    """Return the field class registered under a spec-file name.

    Raises:
        ValueError: If the profile name is not supported.
    """
    cls = FIELD_PROFILES.get((name or '').strip().lower())
    if cls is None:
        supported = ', '.join(sorted(FIELD_PROFILES))
        raise ValueError(f'Unknown field profile "{name}". Supported: {supported}')
    return cls


__all__ = [
    'BaseField',
    'BipolarBump',
    'EPSILON_FLOOR',
    'EpsilonFamily',
    'FIELD_PROFILES',
    'RadialBump',
    'SumField',
    'TruncatedPower',
    'ZeroField',
    'get_field_profile',
    'radial_gradient',
]
