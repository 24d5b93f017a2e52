"""Curvature-dependent special functions.

All functions take the sectional curvature ``c`` as a plain float and
accept scalar or array radii. Scalars come back as Python floats,
arrays as numpy arrays of the same shape.

    s_c(r)  = sin(sqrt(c) r)/sqrt(c),  r,  sinh(sqrt(-c) r)/sqrt(-c)
    ct_c(r) = s_c'(r) / s_c(r)
    D_c(r)  = r ct_c(r) - 1

Near r = 0 or c = 0 the closed forms lose digits to cancellation, so
each function switches to its Taylor series when the dimensionless
parameter t = c r^2 is small.
"""

import logging
import math

import numpy as np

from hardylab.errors import DomainError

logger = logging.getLogger(__name__)

# |c| r^2 below which s_c and ct_c use their Taylor series
SERIES_THRESHOLD = 1e-8

# |c| r^2 below which D_c and the sinc excess use their Taylor series
CANCELLATION_THRESHOLD = 1e-3


def _as_array(r):
    """Return (float array, was_scalar) for a scalar or array argument."""
    arr = np.asarray(r, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    if scalar:
        return float(arr)
    return arr


def injectivity_radius(c):
    """Return pi/sqrt(c) for c > 0 and +inf otherwise."""
    if c > 0:
        return math.pi / math.sqrt(c)
    return math.inf


def _check_domain(c, r, strict, allow_zero=True, name='r'):
    if not np.all(np.isfinite(r)):
        raise DomainError(f'{name} must be finite')
    if allow_zero:
        if np.any(r < 0):
            raise DomainError(f'{name} must be nonnegative, got min {np.min(r)}')
    elif np.any(r <= 0):
        raise DomainError(f'{name} must be positive, got min {np.min(r)}')
    if strict and c > 0:
        limit = injectivity_radius(c)
        if np.any(r >= limit):
            raise DomainError(
                f'{name} must stay below pi/sqrt(c) = {limit:.12g} '
                f'for c = {c}, got max {np.max(r)}'
            )


def _check_curvature(c):
    if not math.isfinite(c):
        raise DomainError(f'curvature must be finite, got {c}')


def s_c(c, r, strict=True):
    """Generalized sine s_c(r).

    Args:
        c: Sectional curvature.
        r: Nonnegative radius (scalar or array).
        strict: Raise DomainError for r >= pi/sqrt(c) when c > 0.

    Returns:
        s_c(r) with the same shape as r.

    Raises:
        DomainError: If r is negative, or out of range in strict mode.
    """
    _check_curvature(c)
    r, scalar = _as_array(r)
    _check_domain(c, r, strict)
    if c == 0:
        return _out(r.copy(), scalar)

    t = c * r * r
    small = np.abs(t) < SERIES_THRESHOLD
    out = np.empty_like(r)
    out[small] = r[small] * (1.0 - t[small] / 6.0 + t[small] ** 2 / 120.0)
    k = math.sqrt(abs(c))
    big = ~small
    if c > 0:
        out[big] = np.sin(k * r[big]) / k
    else:
        out[big] = np.sinh(k * r[big]) / k
    return _out(out, scalar)


def c_c(c, r, strict=True):
    """Generalized cosine s_c'(r): cos(sqrt(c) r), 1 or cosh(sqrt(-c) r)."""
    _check_curvature(c)
    r, scalar = _as_array(r)
    _check_domain(c, r, strict)
    if c == 0:
        return _out(np.ones_like(r), scalar)
    k = math.sqrt(abs(c))
    if c > 0:
        return _out(np.cos(k * r), scalar)
    return _out(np.cosh(k * r), scalar)


def ct_c(c, r, strict=True):
    """Generalized cotangent ct_c(r) = s_c'(r)/s_c(r).

    Raises:
        DomainError: At r = 0 (the pole) or r >= pi/sqrt(c) for c > 0
            in strict mode.
    """
    _check_curvature(c)
    r, scalar = _as_array(r)
    _check_domain(c, r, strict, allow_zero=False)
    if c == 0:
        return _out(1.0 / r, scalar)

    t = c * r * r
    small = np.abs(t) < SERIES_THRESHOLD
    out = np.empty_like(r)
    out[small] = 1.0 / r[small] - c * r[small] / 3.0 - c * t[small] * r[small] / 45.0
    k = math.sqrt(abs(c))
    big = ~small
    if c > 0:
        out[big] = k / np.tan(k * r[big])
    else:
        out[big] = k / np.tanh(k * r[big])
    return _out(out, scalar)


def d_c(c, r, strict=True):
    """Curvature defect D_c(r) = r ct_c(r) - 1, with D_c(0) = 0.

    On a space form d Laplacian(d) - (n-1) = (n-1) D_c(d). D_c is
    identically zero for c = 0, nonnegative for c < 0 and nonpositive
    for c > 0.
    """
    _check_curvature(c)
    r, scalar = _as_array(r)
    _check_domain(c, r, strict)
    if c == 0:
        return _out(np.zeros_like(r), scalar)

    t = c * r * r
    small = np.abs(t) < CANCELLATION_THRESHOLD
    out = np.empty_like(r)
    ts = t[small]
    out[small] = -ts / 3.0 - ts ** 2 / 45.0 - 2.0 * ts ** 3 / 945.0 - ts ** 4 / 4725.0
    k = math.sqrt(abs(c))
    big = ~small
    x = k * r[big]
    if c > 0:
        out[big] = x / np.tan(x) - 1.0
    else:
        out[big] = x / np.tanh(x) - 1.0
    return _out(out, scalar)


def d_c_lower_bound(c, r):
    """Lower bound 3|c| r^2 / (pi^2 + |c| r^2) for D_c(r) when c < 0."""
    if c >= 0:
        raise DomainError(f'the D_c lower bound needs c < 0, got {c}')
    r, scalar = _as_array(r)
    _check_domain(c, r, strict=False)
    t = abs(c) * r * r
    return _out(3.0 * t / (math.pi ** 2 + t), scalar)


def sinc_excess(c, r, strict=True):
    """Return s_c(r)/r - 1, accurate to full relative precision.

    The value at r = 0 is 0.
    """
    _check_curvature(c)
    r, scalar = _as_array(r)
    _check_domain(c, r, strict)
    if c == 0:
        return _out(np.zeros_like(r), scalar)

    t = c * r * r
    small = np.abs(t) < CANCELLATION_THRESHOLD
    out = np.empty_like(r)
    ts = t[small]
    out[small] = -ts / 6.0 + ts ** 2 / 120.0 - ts ** 3 / 5040.0 + ts ** 4 / 362880.0
    k = math.sqrt(abs(c))
    big = ~small
    x = k * r[big]
    if c > 0:
        out[big] = np.sin(x) / x - 1.0
    else:
        out[big] = np.sinh(x) / x - 1.0
    return _out(out, scalar)


def r_ij_correction(c, d_i, d_j, strict=True):
    """Bipolar curvature remainder R_ij(c).

    Defined for c != 0 by

        R = 1/d_i^2 + 1/d_j^2
            - 2/(c d_i d_j) * (1/(s_c(d_i) s_c(d_j)) - ct_c(d_i) ct_c(d_j))

    and R = 0 for c = 0. The expression is evaluated in the equivalent
    form ((d_i - d_j)/(d_i d_j))^2 * g / (sigma_i sigma_j) with
    sigma = s_c(r)/r and g = sigma_i sigma_j - sigma_-^2, where sigma_-
    is taken at |d_i - d_j|/2. Writing sigma = 1 + e keeps g free of
    cancellation, and the result is exactly symmetric in (d_i, d_j).

    Returns:
        R with the broadcast shape of d_i and d_j; nonnegative for c < 0.

    Raises:
        DomainError: If a distance is not positive or, for c > 0,
            reaches pi/sqrt(c).
    """
    _check_curvature(c)
    a, scalar_a = _as_array(d_i)
    b, scalar_b = _as_array(d_j)
    a, b = np.broadcast_arrays(a, b)
    _check_domain(c, a, strict, allow_zero=False, name='d_i')
    _check_domain(c, b, strict, allow_zero=False, name='d_j')
    scalar = scalar_a and scalar_b
    if c == 0:
        return _out(np.zeros(a.shape), scalar)

    e_a = sinc_excess(c, a, strict)
    e_b = sinc_excess(c, b, strict)
    e_m = sinc_excess(c, np.abs(a - b) / 2.0, strict)
    g = e_a + e_b - 2.0 * e_m + e_a * e_b - e_m * e_m
    diff = (a - b) / (a * b)
    out = diff * diff * g / ((1.0 + e_a) * (1.0 + e_b))
    return _out(np.asarray(out, dtype=float), scalar)


def cot_mittag_leffler(t, terms):
    """Partial sum of the Mittag-Leffler expansion of cot(t).

        cot t = 1/t + 2t sum_{k=1}^{terms} 1/(t^2 - pi^2 k^2)

    Args:
        t: Point in (0, pi), scalar or array.
        terms: Number of series terms, at least 1.

    Returns:
        The partial sum, same shape as t.

    Raises:
        DomainError: If t is outside (0, pi) or terms < 1.
    """
    if int(terms) != terms or terms < 1:
        raise DomainError(f'terms must be a positive integer, got {terms}')
    t_arr, scalar = _as_array(t)
    if np.any(t_arr <= 0) or np.any(t_arr >= math.pi):
        raise DomainError('t must lie in the open interval (0, pi)')

    k2 = (math.pi * np.arange(1, int(terms) + 1, dtype=float)) ** 2
    flat = t_arr.reshape(-1)
    out = np.empty_like(flat)
    for idx, tv in enumerate(flat):
        # smallest terms first
        tail = np.sum((1.0 / (tv * tv - k2))[::-1])
        out[idx] = 1.0 / tv + 2.0 * tv * tail
    return _out(out.reshape(t_arr.shape), scalar)


def cot_series_error_bound(t, terms):
    """Upper bound 2t/(pi^2 terms) on |cot t - cot_mittag_leffler(t, terms)|.

    Uses k^2 - (t/pi)^2 >= (k - 1) k for t < pi, which telescopes the
    tail sum to 1/terms.
    """
    t_arr, scalar = _as_array(t)
    return _out(2.0 * t_arr / (math.pi ** 2 * terms), scalar)


def cot_tail_bound(beta):
    """Bound on sum_k 1/(pi^2 k^2 - d^2) for 0 < d < pi/2 + beta.

    The k = 1 term is at most 1/(pi^2 - (beta + pi/2)^2) and the terms
    with k >= 2 add up to at most 3/(4 pi^2).
    """
    _check_beta(beta)
    x = beta + math.pi / 2
    return 1.0 / (math.pi ** 2 - x * x) + 3.0 / (4.0 * math.pi ** 2)


def _check_beta(beta):
    if not (0 <= beta < math.pi / 2):
        raise DomainError(
            f'beta must lie in [0, pi/2) so that all poles sit in the open '
            f'upper hemisphere, got {beta}'
        )


def hemisphere_constant(n, beta):
    """Constant C(n, beta) of the hemisphere Hardy inequality.

        C = (n-1)(n-2)(7 pi^2 - 3 (beta + pi/2)^2)
            / (2 pi^2 (pi^2 - (beta + pi/2)^2))

    Args:
        n: Dimension, at least 3.
        beta: Largest distance from the north pole to a pole, in [0, pi/2).

    Returns:
        C(n, beta) > 0, increasing in beta and unbounded as beta -> pi/2.

    Raises:
        DomainError: If n < 3 or beta is outside [0, pi/2).
    """
    if int(n) != n or n < 3:
        raise DomainError(f'dimension must be an integer >= 3, got {n}')
    _check_beta(beta)
    x = beta + math.pi / 2
    pi2 = math.pi ** 2
    return (n - 1) * (n - 2) * (7 * pi2 - 3 * x * x) / (2 * pi2 * (pi2 - x * x))
