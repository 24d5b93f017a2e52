"""Multipolar Hardy weights and inequality verifiers.

For poles x_1, ..., x_m with distance functions d_i, a test field u and
the constants (n-2)^2/m^2 and (n-2)/m, each verifier evaluates both
sides of one inequality on a quadrature rule and returns a HardyReport.

    pairwise weight   |grad d_i/d_i - grad d_j/d_j|^2
    correction        sum_i (n-1) D_c(d_i)/d_i^2, the space-form value of
                      (d_i Lap d_i - (n-1))/d_i^2
"""

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from hardylab.config import Config
from hardylab.curvature_fn import (
    d_c,
    d_c_lower_bound,
    hemisphere_constant,
    r_ij_correction,
    s_c,
)
from hardylab.errors import DomainError, HypothesisError, SpaceMismatchError
from hardylab.model_space import distance, grad_distance
from hardylab.quadrature import QmcRule, excluded_disc_terms

logger = logging.getLogger(__name__)

# Floor on the volume self-test error used to calibrate report tolerances.
MIN_VOLUME_ERROR = 1e-14


def _as_output(value, x):
    if x.is_batch:
        return np.asarray(value, dtype=float)
    return float(value)


def weight_pairwise_gradient(x, pole_i, pole_j):
    """|grad d_i/d_i - grad d_j/d_j|^2 at x.

    Evaluated as (1/d_i - 1/d_j)^2 + |e_i - e_j|^2/(d_i d_j) with unit
    gradients e_i, which is nonnegative term by term.

    Raises:
        DomainError: If x coincides with a pole.
    """
    d_i = np.asarray(distance(x, pole_i))
    d_j = np.asarray(distance(x, pole_j))
    e_i = grad_distance(x, pole_i)
    e_j = grad_distance(x, pole_j)
    diff = e_i - e_j
    chord = np.maximum(x.space.inner(diff, diff), 0.0)
    val = (1.0 / d_i - 1.0 / d_j) ** 2 + chord / (d_i * d_j)
    return _as_output(val, x)


def weight_euclidean_cz(x, pole_i, pole_j):
    """|x_i - x_j|^2 / (|x - x_i|^2 |x - x_j|^2), flat space only.

    Raises:
        DomainError: If the space is curved or x is a pole.
    """
    if x.space.c != 0:
        raise DomainError(f'the Euclidean weight needs c = 0, got c = {x.space.c}')
    d_i = np.asarray(distance(x, pole_i))
    d_j = np.asarray(distance(x, pole_j))
    if np.any(d_i == 0) or np.any(d_j == 0):
        raise DomainError('weight evaluated at a pole')
    d_ij = distance(pole_i, pole_j)
    return _as_output(d_ij ** 2 / (d_i ** 2 * d_j ** 2), x)


def weight_bipolar_curved(x, pole_i, pole_j, k0):
    """Curved bipolar weight for a lower curvature bound k0.

        4 s_k0(d_ij/2)^2 / (d_i d_j s_k0(d_i) s_k0(d_j)) + R_ij(k0)

    On a space form of curvature c >= k0 this never exceeds
    weight_pairwise_gradient; for k0 = 0 it is the Euclidean weight.
    """
    d_i = np.asarray(distance(x, pole_i))
    d_j = np.asarray(distance(x, pole_j))
    if np.any(d_i == 0) or np.any(d_j == 0):
        raise DomainError('weight evaluated at a pole')
    d_ij = distance(pole_i, pole_j)
    main = (
        4.0 * s_c(k0, d_ij / 2.0) ** 2
        / (d_i * d_j * np.asarray(s_c(k0, d_i)) * np.asarray(s_c(k0, d_j)))
    )
    return _as_output(main + np.asarray(r_ij_correction(k0, d_i, d_j)), x)


def weight_hadamard_cosine(x, pole_i, pole_j):
    """4 s_c(d_ij/2)^2 / (d_i d_j s_c(d_i) s_c(d_j)) in the curvature of x's space."""
    c = x.space.c
    d_i = np.asarray(distance(x, pole_i))
    d_j = np.asarray(distance(x, pole_j))
    d_ij = distance(pole_i, pole_j)
    val = 4.0 * s_c(c, d_ij / 2.0) ** 2 / (
        d_i * d_j * np.asarray(s_c(c, d_i)) * np.asarray(s_c(c, d_j))
    )
    return _as_output(val, x)


def correction_density(space, poles, points):
    """sum_i (n-1) D_c(d_i)/d_i^2 at the given points."""
    total = 0.0
    for pole in poles:
        d = np.asarray(distance(points, pole))
        total = total + (space.n - 1) * np.asarray(d_c(space.c, d)) / (d * d)
    return _as_output(total, points)


@dataclass
class HardyReport:
    """Both sides of one Hardy inequality on one test field.

    Attributes:
        lhs: Dirichlet energy, plus C(n, beta) int u^2 on the hemisphere.
        rhs_pairwise: Constant times the integrated pairwise weights.
        rhs_correction: Curvature correction term (zero when absent).
        residual: lhs - rhs_pairwise - rhs_correction.
        relative_margin: residual / lhs (0 when lhs = 0).
        tol: 10 x volume self-test error x max(|lhs|, |rhs|).
        config: Run metadata (theorem, n, c, m, rule, ...).
    """

    lhs: float
    rhs_pairwise: float
    rhs_correction: float
    residual: float
    relative_margin: float
    tol: float
    config: dict = dc_field(default_factory=dict)

    @property
    def rhs_total(self):
        return self.rhs_pairwise + self.rhs_correction

    @property
    def passed(self):
        return self.residual >= -self.tol

    def to_dict(self):
        return {
            'lhs': self.lhs,
            'rhs_pairwise': self.rhs_pairwise,
            'rhs_correction': self.rhs_correction,
            'residual': self.residual,
            'relative_margin': self.relative_margin,
            'tol': self.tol,
            'config': dict(self.config),
        }


def _resolution_tolerance(rule):
    if isinstance(rule, QmcRule):
        return Config.QMC_VOLUME_TOLERANCE
    return Config.VOLUME_TOLERANCE


def _check_setup(space, poles, field, rule):
    if poles.space != space or rule.space != space or field.space != space:
        raise SpaceMismatchError('space, poles, field and rule must share one model space')
    rule.check_resolution(_resolution_tolerance(rule))
    if not field.is_admissible(rule):
        raise HypothesisError(
            f'{field.name} field does not vanish on the outer grid rings; '
            f'enlarge the region or shrink the field support',
            'u compactly supported in the integration region',
        )


def _sample(field, rule):
    u = np.atleast_1d(np.asarray(field.values(rule.points), dtype=float))
    grad2 = np.atleast_1d(field.gradient_norm_squared(rule.points))
    return u, grad2, excluded_disc_terms(rule, field)


def _make_report(lhs, rhs_pairwise, rhs_correction, rule, config):
    residual = lhs - rhs_pairwise - rhs_correction
    vol_err = max(rule.volume_error, MIN_VOLUME_ERROR)
    tol = 10.0 * vol_err * max(abs(lhs), abs(rhs_pairwise + rhs_correction))
    margin = residual / lhs if lhs != 0 else 0.0
    meta = {
        'rule': rule.kind,
        'nodes': int(rule.size),
        'volume_error': float(rule.volume_error),
    }
    shape = getattr(rule, 'shape', None)
    if shape is not None:
        meta['resolution'] = [int(v) for v in shape]
    meta.update(config)
    report = HardyReport(
        lhs=float(lhs),
        rhs_pairwise=float(rhs_pairwise),
        rhs_correction=float(rhs_correction),
        residual=float(residual),
        relative_margin=float(margin),
        tol=float(tol),
        config=meta,
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(
        level,
        f'{config.get("theorem")}: lhs={report.lhs:.6e} rhs={report.rhs_total:.6e} '
        f'residual={report.residual:.3e} tol={report.tol:.1e}',
    )
    return report


def _base_config(theorem, space, poles, field, disc=None):
    config = {
        'theorem': theorem,
        'n': space.n,
        'c': space.c,
        'm': poles.m,
        'field': field.name,
    }
    if disc is not None and np.any(disc.weighted):
        config['disc_weighted_mass'] = [float(v) for v in disc.weighted]
        config['disc_energy'] = disc.energy
    return config


def _pairwise_integral(weight_fn, poles, rule, u, disc=None):
    total = 0.0
    for i, j in poles.pairs():
        w = np.atleast_1d(weight_fn(rule.points, poles[i], poles[j]))
        total += rule.integrate(w * u * u)
        if disc is None:
            continue
        # weight ~ kappa / d_k^2 inside the disc of pole k
        for k in (i, j):
            if disc.weighted[k] > 0:
                kappa = disc.leading_coefficient(
                    rule, k, lambda x, a=poles[i], b=poles[j]: weight_fn(x, a, b))
                total += kappa * disc.weighted[k]
    return total


def correction_term(space, poles, field, rule):
    """int sum_i (n-1) D_c(d_i)/d_i^2 u^2.

    Zero for c = 0, positive for c < 0 and negative for c > 0 whenever
    u does not vanish identically.
    """
    if poles.space != space or rule.space != space or field.space != space:
        raise SpaceMismatchError('space, poles, field and rule must share one model space')
    u, _, _ = _sample(field, rule)
    dens = np.atleast_1d(correction_density(space, poles, rule.points))
    return rule.integrate(dens * u * u)


def dirichlet_energy(field, rule):
    """int |grad u|^2 on a rule."""
    _, grad2, disc = _sample(field, rule)
    return rule.integrate(grad2) + disc.energy


def pairwise_mass(poles, field, rule, weight=weight_pairwise_gradient):
    """sum_{i<j} int weight(x, x_i, x_j) u^2, without the constant."""
    u, _, disc = _sample(field, rule)
    return _pairwise_integral(weight, poles, rule, u, disc)


def verify_theorem1(space, poles, field, rule):
    """Multipolar Hardy inequality with the Laplacian correction term.

        int |grad u|^2 >= (n-2)^2/m^2 sum_{i<j} int |grad d_i/d_i - grad d_j/d_j|^2 u^2
                        + (n-2)/m int sum_i (d_i Lap d_i - (n-1))/d_i^2 u^2

    Args:
        space: ModelSpace.
        poles: PoleSet.
        field: BaseField vanishing near the boundary of the rule's region.
        rule: AxiGrid or QmcRule built for these poles.

    Returns:
        HardyReport.

    Raises:
        ResolutionError: If the rule fails its volume self-test.
        HypothesisError: If the field is not compactly supported on the rule.
    """
    _check_setup(space, poles, field, rule)
    n, m = space.n, poles.m
    u, grad2, disc = _sample(field, rule)
    lhs = rule.integrate(grad2) + disc.energy
    pair = (n - 2) ** 2 / m ** 2 * _pairwise_integral(weight_pairwise_gradient, poles, rule, u, disc)
    dens = np.atleast_1d(correction_density(space, poles, rule.points))
    corr = (n - 2) / m * rule.integrate(dens * u * u)
    return _make_report(lhs, pair, corr, rule, _base_config('thm1', space, poles, field, disc))


def verify_theorem2(space, poles, field, rule, k0):
    """Curved bipolar Hardy inequality under the curvature bound K >= k0.

    The pairwise weight is replaced by weight_bipolar_curved(., k0),
    including R_ij(k0), with the same constant (n-2)^2/m^2.

    Raises:
        HypothesisError: If k0 exceeds the curvature of the space.
    """
    if k0 > space.c:
        raise HypothesisError(
            f'comparison hypothesis violated: k0 = {k0} exceeds the curvature c = {space.c}',
            'sectional curvature K >= k0',
        )
    _check_setup(space, poles, field, rule)
    n, m = space.n, poles.m
    u, grad2, disc = _sample(field, rule)
    lhs = rule.integrate(grad2) + disc.energy

    def weight(x, p, q):
        return weight_bipolar_curved(x, p, q, k0)

    pair = (n - 2) ** 2 / m ** 2 * _pairwise_integral(weight, poles, rule, u, disc)
    dens = np.atleast_1d(correction_density(space, poles, rule.points))
    corr = (n - 2) / m * rule.integrate(dens * u * u)
    config = _base_config('thm2', space, poles, field, disc)
    config['k0'] = float(k0)
    return _make_report(lhs, pair, corr, rule, config)


def verify_hemisphere(space, poles, field, rule):
    """Hardy inequality on the open upper hemisphere.

        int |grad u|^2 + C(n, beta) int u^2
            >= (n-2)^2/m^2 sum_{i<j} int |grad d_i/d_i - grad d_j/d_j|^2 u^2

    beta is the largest distance from the north pole to a pole. For
    curvature c the constant is c C(n, sqrt(c) beta).

    Raises:
        DomainError: If the space is not a hemisphere or beta is out of range.
    """
    if not space.hemisphere:
        raise DomainError('verify_hemisphere needs a hemisphere model (c > 0)')
    _check_setup(space, poles, field, rule)
    n, m, c = space.n, poles.m, space.c
    beta = poles.max_origin_distance()
    const = c * hemisphere_constant(n, np.sqrt(c) * beta)
    u, grad2, disc = _sample(field, rule)
    lhs = rule.integrate(grad2) + disc.energy + const * (rule.integrate(u * u) + disc.mass)
    pair = (n - 2) ** 2 / m ** 2 * _pairwise_integral(weight_pairwise_gradient, poles, rule, u, disc)
    config = _base_config('hemisphere', space, poles, field, disc)
    config['beta'] = float(beta)
    config['hemisphere_constant'] = float(const)
    return _make_report(lhs, pair, 0.0, rule, config)


def verify_remark_c(space, poles, field, rule):
    """Curvature improvement on nonpositively curved space forms.

    The correction (n-1)(n-2)/m sum_i int D_c(d_i)/d_i^2 u^2 is compared
    with the weaker explicit version using 3|c| d^2/(pi^2 + |c| d^2) in
    place of D_c; the latter is stored in the report config as
    lower_bound_correction and lower_bound_residual.

    Raises:
        DomainError: If c > 0.
    """
    if space.c > 0:
        raise DomainError(f'the curvature improvement needs c <= 0, got c = {space.c}')
    _check_setup(space, poles, field, rule)
    n, m = space.n, poles.m
    u, grad2, disc = _sample(field, rule)
    lhs = rule.integrate(grad2) + disc.energy
    pair = (n - 2) ** 2 / m ** 2 * _pairwise_integral(weight_pairwise_gradient, poles, rule, u, disc)

    exact = np.zeros_like(u)
    lower = np.zeros_like(u)
    for pole in poles:
        d = np.atleast_1d(distance(rule.points, pole))
        exact += np.asarray(d_c(space.c, d)) / (d * d)
        if space.c < 0:
            lower += np.asarray(d_c_lower_bound(space.c, d)) / (d * d)
    scale = (n - 1) * (n - 2) / m
    corr = scale * rule.integrate(exact * u * u)
    corr_lower = scale * rule.integrate(lower * u * u)

    config = _base_config('remark', space, poles, field, disc)
    config['lower_bound_correction'] = float(corr_lower)
    config['lower_bound_residual'] = float(lhs - pair - corr_lower)
    return _make_report(lhs, pair, corr, rule, config)


def verify_hadamard_cosine(space, poles, field, rule):
    """Pairwise-only curved inequality on nonpositively curved space forms.

        int |grad u|^2 >= 4 (n-2)^2/m^2 sum_{i<j} int
                          s_c(d_ij/2)^2 / (d_i d_j s_c(d_i) s_c(d_j)) u^2

    Raises:
        DomainError: If c > 0.
    """
    if space.c > 0:
        raise DomainError(f'the cosine form needs c <= 0, got c = {space.c}')
    _check_setup(space, poles, field, rule)
    n, m = space.n, poles.m
    u, grad2, disc = _sample(field, rule)
    lhs = rule.integrate(grad2) + disc.energy
    pair = (n - 2) ** 2 / m ** 2 * _pairwise_integral(weight_hadamard_cosine, poles, rule, u, disc)
    return _make_report(lhs, pair, 0.0, rule, _base_config('hadamard-cosine', space, poles, field, disc))


def representation_remainder(space, poles, field, rule):
    """int |grad u + ((n-2)/m) u sum_i grad d_i/d_i|^2.

    With psi = prod_i d_i^(-(n-2)/m) this is int psi^2 |grad(u/psi)|^2,
    which equals the residual of verify_theorem1 up to quadrature error.
    """
    if field.space != space or rule.space != space:
        raise SpaceMismatchError('field and rule must live on the given space')
    n, m = space.n, poles.m
    pts = rule.points
    u = np.atleast_1d(np.asarray(field.values(pts), dtype=float))
    vec = np.atleast_2d(field.gradient(pts)).copy()
    for pole in poles:
        d = np.atleast_1d(distance(pts, pole))
        g = np.atleast_2d(grad_distance(pts, pole))
        vec += ((n - 2) / m * u / d)[:, None] * g
    total = rule.integrate(np.maximum(space.inner(vec, vec), 0.0))
    disc = excluded_disc_terms(rule, field)
    for p, w in zip(disc.exponents, disc.weighted):
        if p is not None:
            total += (p + (n - 2) / m) ** 2 * w
    return total
