"""Optimality machinery for the bipolar Hardy constant.

The two-pole family u_eps (see hardylab.fields.epsilon) drives the
quotient

    (I - (n-2)/2 K) / (J - 2 L)

down to (n-2)^2/4 as eps -> 0, where

    I = int |grad u|^2
    J = int (1/d_1^2 + 1/d_2^2) u^2
    K = sum_i int (d_i Lap d_i - (n-1))/d_i^2 u^2
    L = int <grad d_1, grad d_2>/(d_1 d_2) u^2

The supports of the two bumps are disjoint annuli, so each functional
splits into a self part (radial about one pole, integrated in 1D) and a
cross part (depending on the other pole, integrated on a pole-centred
(r, theta) tensor grid).

rayleigh_probe searches parametrized trial fields for small values of
int |grad u|^2 / sum_{i<j} int w_ij u^2. Its results are empirical
upper bounds on the best constant, never sharpness claims.
"""

import logging
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import integrate as sp_integrate

from hardylab.config import Config
from hardylab.curvature_fn import d_c, s_c
from hardylab.errors import DomainError, ResolutionError
from hardylab.fields import (
    BaseField,
    EpsilonFamily,
    RadialBump,
    SumField,
    TruncatedPower,
)
from hardylab.hardy import dirichlet_energy, pairwise_mass
from hardylab.model_space import cosine_law_angle
from hardylab.quadrature import (
    annulus_tensor_rule,
    ball_volume,
    build_axigrid,
    build_qmc_rule,
    sphere_area,
)

logger = logging.getLogger(__name__)

MIN_PANELS_PER_DECADE = 40

# Column order of sweep CSV files.
SWEEP_COLUMNS = ['epsilon', 'I', 'J', 'K', 'L', 'ratio', 'target', 'tol']


def hardy_target(n):
    """(n-2)^2/4."""
    return (n - 2) ** 2 / 4.0


def predicted_ratio(n, epsilon):
    """Leading-order flat-space quotient (n-2)^2/4 + 6/log(1/eps)^2."""
    lam = math.log(1.0 / epsilon)
    return hardy_target(n) + 6.0 / (lam * lam)


def eval_u_eps(fam, x):
    """Value of the family member at a point or batch."""
    return fam.values(x)


@dataclass
class SweepRecord:
    """Functionals of one member of the epsilon family."""

    epsilon: float
    I_eps: float
    J_eps: float
    K_eps: float
    L_eps: float
    ratio: float
    target: float
    tol: float
    prediction: float
    exploratory: bool = False

    def to_row(self):
        """Values in SWEEP_COLUMNS order."""
        return {
            'epsilon': self.epsilon,
            'I': self.I_eps,
            'J': self.J_eps,
            'K': self.K_eps,
            'L': self.L_eps,
            'ratio': self.ratio,
            'target': self.target,
            'tol': self.tol,
        }

    def to_dict(self):
        out = self.to_row()
        out['prediction'] = self.prediction
        out['exploratory'] = self.exploratory
        return out


def _radial_integral(space, fn, pieces):
    """|S^(n-1)| int fn(r) s_c(r)^(n-1) dr over the given [a, b] pieces.

    Integrated in t = log r with adaptive Gauss-Kronrod.
    """
    n, c = space.n, space.c

    def integrand(t):
        r = math.exp(t)
        return fn(r) * s_c(c, r) ** (n - 1) * r

    total = 0.0
    error = 0.0
    for a, b in pieces:
        val, err = sp_integrate.quad(
            integrand, math.log(a), math.log(b), epsabs=0.0, epsrel=1e-12, limit=200
        )
        total += val
        error += err
    area = sphere_area(n - 1)
    return area * total, area * error


def _inverse_half_chord(c, y):
    """Solve s_c(d/2) = y for d."""
    y = np.asarray(y, dtype=float)
    if c == 0:
        return 2.0 * y
    k = math.sqrt(abs(c))
    if c > 0:
        return 2.0 / k * np.arcsin(np.minimum(k * y, 1.0))
    return 2.0 / k * np.arcsinh(k * y)


def functionals(fam, panels_per_decade=None, n_theta=None):
    """I, J, K and L for one member of the epsilon family.

    Args:
        fam: EpsilonFamily.
        panels_per_decade: Radial Gauss panels per decade on the cross
            grid; at least MIN_PANELS_PER_DECADE.
        n_theta: Angular nodes on the cross grid.

    Returns:
        SweepRecord.

    Raises:
        ResolutionError: If the cross grid is too coarse.
    """
    space = fam.space
    n, c = space.n, space.c
    panels_per_decade = panels_per_decade or Config.SWEEP_PANELS_PER_DECADE
    n_theta = n_theta or Config.SWEEP_NTHETA
    if panels_per_decade < MIN_PANELS_PER_DECADE:
        raise ResolutionError(
            f'{panels_per_decade} radial panels per decade is below the '
            f'minimum of {MIN_PANELS_PER_DECADE} for the epsilon family'
        )
    lo, mid, hi = fam.breakpoints
    pieces = ((lo, mid), (mid, hi))

    def one(fn):
        return lambda r: float(fn(np.array([r]))[0])

    profile = one(fam.profile)
    slope = one(fam.slope)
    i_self, e_i = _radial_integral(space, lambda r: slope(r) ** 2, pieces)
    j_self, e_j = _radial_integral(space, lambda r: profile(r) ** 2 / (r * r), pieces)
    if c == 0:
        k_self, e_k = 0.0, 0.0
    else:
        k_self, e_k = _radial_integral(
            space, lambda r: (n - 1) * d_c(c, r) / (r * r) * profile(r) ** 2, pieces
        )

    # cross parts around one pole; the pole swap is an isometry
    d12 = float(fam.poles.distances[0, 1])
    rr, tt, w = annulus_tensor_rule(space, lo, hi, n_theta, panels_per_decade, radial_breaks=[mid])
    vol_err = abs(w.sum() - ball_volume(space, hi, lo)) / ball_volume(space, hi, lo)
    phi2 = fam.profile(rr) ** 2
    y2 = (
        np.asarray(s_c(c, np.abs(rr - d12) / 2.0)) ** 2
        + np.asarray(s_c(c, rr)) * s_c(c, d12) * (1.0 - np.cos(tt)) / 2.0
    )
    d_other = _inverse_half_chord(c, np.sqrt(y2))
    j_cross = float(np.sum(w * phi2 / d_other ** 2))
    k_cross = float(np.sum(w * (n - 1) * np.asarray(d_c(c, d_other)) / d_other ** 2 * phi2))
    cos_x = cosine_law_angle(c, rr, d_other, np.full_like(rr, d12))
    l_half = float(np.sum(w * cos_x / (rr * d_other) * phi2))

    I = 2.0 * i_self
    J = 2.0 * (j_self + j_cross)
    K = 2.0 * (k_self + k_cross)
    L = 2.0 * l_half
    if not J > 0:
        raise ResolutionError(f'J = {J} is not positive; the grid misses the support')
    denominator = J - 2.0 * L
    if not denominator > 0:
        raise ResolutionError(f'J - 2L = {denominator} is not positive')
    ratio = (I - (n - 2) / 2.0 * K) / denominator
    quad_err = 2.0 * (e_i + e_j + e_k)
    tol = quad_err + 10.0 * max(vol_err, 1e-14) * (abs(I) + abs(J))
    record = SweepRecord(
        epsilon=fam.epsilon,
        I_eps=I,
        J_eps=J,
        K_eps=K,
        L_eps=L,
        ratio=float(ratio),
        target=hardy_target(n),
        tol=float(tol),
        prediction=predicted_ratio(n, fam.epsilon),
        exploratory=c > 0,
    )
    logger.debug(f'eps={fam.epsilon:g}: I={I:.6e} J={J:.6e} K={K:.3e} L={L:.3e} ratio={ratio:.6f}')
    return record


def sharpness_sweep(space, poles, eps_list, panels_per_decade=None, n_theta=None,
                    progress_callback=None):
    """Functionals along a strictly decreasing list of eps values.

    Args:
        space: ModelSpace.
        poles: PoleSet with two poles.
        eps_list: Strictly decreasing eps values.
        progress_callback: Optional callable(completed, total).

    Returns:
        List of SweepRecord, one per eps.

    Raises:
        DomainError: If eps_list is not strictly decreasing or some eps
            is invalid for the pole pair.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise DomainError('the sweep needs at least one epsilon')
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError(f'epsilon values must be strictly decreasing, got {eps_list}')
    if space.c > 0:
        logger.warning('sharpness sweeps on the sphere are exploratory')
    families = [EpsilonFamily(space, poles, eps) for eps in eps_list]

    records = []
    for k, fam in enumerate(families, start=1):
        records.append(functionals(fam, panels_per_decade, n_theta))
        logger.info(
            f'sweep {k}/{len(families)}: eps={fam.epsilon:g} ratio={records[-1].ratio:.6f}'
        )
        if progress_callback:
            progress_callback(k, len(families))
    return records


def assess_sweep(records, ratio_tolerance=0.10, j_growth=0.25):
    """Check the convergence behaviour of a sweep.

    Checks:
        final_ratio: last ratio within ratio_tolerance (relative) of the
            leading-order prediction (n-2)^2/4 + 6/log(1/eps)^2.
        monotone: |ratio - target| strictly decreasing.
        above_target: every ratio >= target - tol.
        j_growth: J grows by at least the factor (1 + j_growth) per decade.

    Returns:
        Dict with 'passed', one boolean per check and a 'failures' list.
    """
    if not records:
        raise ValueError('cannot assess an empty sweep')
    failures = []
    last = records[-1]
    gap = abs(last.ratio - last.prediction) / last.prediction
    final_ok = gap <= ratio_tolerance
    if not final_ok:
        failures.append(
            f'final ratio {last.ratio:.6f} is {gap:.1%} from the prediction '
            f'{last.prediction:.6f} (allowed {ratio_tolerance:.0%})'
        )

    dist = [abs(r.ratio - r.target) for r in records]
    monotone = all(b < a for a, b in zip(dist, dist[1:]))
    if not monotone:
        failures.append(f'|ratio - target| is not strictly decreasing: {dist}')

    above = all(r.ratio >= r.target - r.tol for r in records)
    if not above:
        failures.append('a ratio fell below the Hardy constant (n-2)^2/4')

    growth = []
    growth_ok = True
    for a, b in zip(records, records[1:]):
        decades = math.log10(a.epsilon / b.epsilon)
        factor = b.J_eps / a.J_eps
        growth.append(factor)
        if factor < (1.0 + j_growth) ** decades:
            growth_ok = False
            failures.append(
                f'J grew by {factor:.3f} from eps={a.epsilon:g} to {b.epsilon:g}, '
                f'expected at least {(1.0 + j_growth) ** decades:.3f}'
            )

    return {
        'passed': not failures,
        'final_ratio': final_ok,
        'final_gap': gap,
        'monotone': monotone,
        'above_target': above,
        'j_growth': growth_ok,
        'j_factors': growth,
        'failures': failures,
    }


def inverse_power_mass(space, pole, r, R):
    """int over r < d(x, pole) < R of d^(-n).

    Equals |S^(n-1)| log(R/r) for c = 0; for c != 0 the difference from
    that value stays bounded as r -> 0.
    """
    if pole.space != space:
        raise DomainError('pole does not belong to the given space')
    if not 0 < r < R:
        raise DomainError(f'need 0 < r < R, got r={r}, R={R}')
    n = space.n
    if space.c == 0:
        return sphere_area(n - 1) * math.log(R / r)
    value, _ = _radial_integral(space, lambda t: t ** (-n), ((r, R),))
    return value


# Rayleigh probe trial families: name -> (builder(space, poles, x), start(poles))

def _bump_trial(space, poles, x):
    return RadialBump(space, space.axis_point(x[0]), math.exp(x[1]))


def _bump_start(poles):
    t = float(np.mean(poles.axis_positions())) if poles.is_on_axis() else 0.0
    return np.array([t, math.log(poles.min_distance)])


def _power_trial(space, poles, x):
    return TruncatedPower(space, poles[0], math.exp(x[1]), power=x[0])


def _power_start(poles):
    return np.array([0.0, math.log(poles.min_distance)])


def _bipolar_trial(space, poles, x):
    bumps = [RadialBump(space, p, math.exp(x[0])) for p in poles]
    return SumField(bumps, np.concatenate([[1.0], x[1:]]))


def _bipolar_start(poles):
    return np.concatenate([[math.log(0.5 * poles.min_distance)], np.ones(poles.m - 1)])


TRIAL_FAMILIES = {
    'bump': (_bump_trial, _bump_start),
    'truncated-power': (_power_trial, _power_start),
    'bipolar-bump': (_bipolar_trial, _bipolar_start),
}


@dataclass
class ProbeResult:
    """Best Rayleigh quotient found by rayleigh_probe.

    Attributes:
        quotient: int |grad u|^2 / sum_{i<j} int w_ij u^2 of the best field.
        bound: (n-2)^2/m^2, the constant every quotient must respect.
        empirical: Always True; the probe gives no sharpness certificate.
    """

    family: str
    quotient: float
    params: list
    evaluations: int
    bound: float
    empirical: bool = True
    config: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {
            'family': self.family,
            'quotient': self.quotient,
            'params': list(self.params),
            'evaluations': self.evaluations,
            'bound': self.bound,
            'empirical': self.empirical,
            'config': dict(self.config),
        }


def default_probe_rule(space, poles, region=None):
    """AxiGrid for on-axis poles, QMC otherwise, on a ball about the origin."""
    if region is None:
        if space.c > 0:
            region = 0.999 * space.max_distance / 2
        else:
            region = poles.max_origin_distance() + 2.0 * float(poles.distances.max())
    if poles.is_on_axis():
        return build_axigrid(space, poles, region)
    return build_qmc_rule(space, poles, region)


def _region_radius(rule):
    return getattr(rule, 'outer', getattr(rule, 'rho', math.inf))


def rayleigh_probe(space, poles, family='bump', budget=None, seed=None, rule=None,
                   progress_callback=None):
    """Derivative-free search for a small Rayleigh quotient.

    Args:
        space: ModelSpace.
        poles: PoleSet.
        family: Name in TRIAL_FAMILIES, or a BaseField evaluated alone.
        budget: Maximum number of quotient evaluations.
        seed: Seed of the coordinate-order shuffling.
        rule: Quadrature rule; built by default_probe_rule when omitted.
        progress_callback: Optional callable(completed, total).

    Returns:
        ProbeResult.

    Raises:
        DomainError: If no trial field has positive weighted mass.
        ValueError: For an unknown family name.
    """
    budget = budget or Config.PROBE_BUDGET
    seed = Config.DEFAULT_SEED if seed is None else seed
    rule = rule or default_probe_rule(space, poles)
    limit = 0.95 * _region_radius(rule)
    origin = space.origin()
    bound = (space.n - 2) ** 2 / poles.m ** 2

    def quotient(field):
        if field.support_bound(origin) >= limit:
            return math.inf
        mass = pairwise_mass(poles, field, rule)
        if not mass > 0:
            return math.inf
        return dirichlet_energy(field, rule) / mass

    if isinstance(family, BaseField):
        q = quotient(family)
        if not math.isfinite(q):
            raise DomainError('degenerate trial field: zero weighted mass or support outside the rule')
        return ProbeResult(family.name, q, [], 1, bound, config={'seed': seed})

    if family not in TRIAL_FAMILIES:
        supported = ', '.join(sorted(TRIAL_FAMILIES))
        raise ValueError(f'Unknown trial family "{family}". Supported: {supported}')
    build, start = TRIAL_FAMILIES[family]
    rng = np.random.default_rng(seed)
    evaluations = 0

    def evaluate(x):
        nonlocal evaluations
        evaluations += 1
        if progress_callback:
            progress_callback(evaluations, budget)
        try:
            return quotient(build(space, poles, x))
        except DomainError:
            return math.inf

    best_x = start(poles)
    best_q = evaluate(best_x)
    step = 0.5
    while evaluations < budget and step > 1e-3:
        improved = False
        for k in rng.permutation(best_x.size):
            for sign in (1.0, -1.0):
                if evaluations >= budget:
                    break
                trial = best_x.copy()
                trial[k] += sign * step
                q = evaluate(trial)
                if q < best_q:
                    best_x, best_q, improved = trial, q, True
                    break
        if not improved:
            step *= 0.5
    if not math.isfinite(best_q):
        raise DomainError(f'degenerate trial family "{family}": no field with positive weighted mass')
    logger.info(
        f'rayleigh probe {family}: quotient {best_q:.6f} after {evaluations} '
        f'evaluations (bound {bound:.6f}, empirical)'
    )
    return ProbeResult(
        family=family,
        quotient=float(best_q),
        params=[float(v) for v in best_x],
        evaluations=evaluations,
        bound=bound,
        config={'seed': seed, 'n': space.n, 'c': space.c, 'm': poles.m},
    )
