"""Quadrature rules on the space forms.

Two kinds of rule are offered:

  * AxiGrid: a tensor grid in geodesic polar coordinates (r, theta)
    about the origin, theta measured from the pole axis e_1. Integrands
    that depend only on (r, theta) are integrated exactly in the
    remaining n-2 angles, so the volume element is

        s_c(r)^(n-1) sin(theta)^(n-2) |S^(n-2)| dr dtheta.

    Radial and angular panels are graded geometrically toward every pole
    so that the inverse-square singularities are resolved.

  * QmcRule: scrambled Sobol points in a geodesic ball, for pole sets
    that do not fit on one axis. Its error is not certified.

Both expose embedded node coordinates and positive weights, so test
fields with analytic gradients can be integrated on either.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as sp_integrate
from scipy import special
from scipy.stats import norm, qmc

from hardylab.config import Config
from hardylab.curvature_fn import c_c, s_c, sinc_excess
from hardylab.errors import DomainError, ResolutionError
from hardylab.model_space import ModelPoint, distance

logger = logging.getLogger(__name__)


def sphere_area(k):
    """Surface area of the unit k-sphere S^k in R^(k+1)."""
    return 2.0 * math.pi ** ((k + 1) / 2.0) / special.gamma((k + 1) / 2.0)


def ball_volume(space, rho, inner=0.0):
    """Volume of the geodesic ball (or annulus inner < r < rho).

    Closed form for c = 0, adaptive quadrature of s_c(r)^(n-1) otherwise.

    Raises:
        DomainError: If rho is outside the model (rho > pi/sqrt(c)).
    """
    if not 0 <= inner < rho:
        raise DomainError(f'need 0 <= inner < rho, got inner={inner}, rho={rho}')
    if rho > space.max_distance:
        raise DomainError(f'radius {rho} exceeds the model diameter {space.max_distance}')
    n = space.n
    if space.c == 0:
        return sphere_area(n - 1) * (rho ** n - inner ** n) / n
    value, _ = sp_integrate.quad(
        lambda r: s_c(space.c, r, strict=False) ** (n - 1),
        inner, rho, epsabs=0.0, epsrel=1e-13, limit=200,
    )
    return sphere_area(n - 1) * value


class QuadratureRule:
    """Nodes in embedded coordinates with positive weights.

    Subclasses set ``space``, ``points`` (a batch ModelPoint of the
    active nodes), ``weights`` and ``region_volume``.
    """

    kind = 'base'

    @property
    def size(self):
        return len(self.weights)

    @property
    def volume_error(self):
        """Relative error of the quadrature on the constant function 1."""
        return abs(float(np.sum(self.weights)) - self.region_volume) / self.region_volume

    def check_resolution(self, tolerance):
        """Raise ResolutionError when the volume self-test fails."""
        err = self.volume_error
        if err > tolerance:
            raise ResolutionError(
                f'{self.kind} rule is too coarse: volume self-test error '
                f'{err:.3e} exceeds {tolerance:.1e}'
            )
        return err

    def integrate(self, values):
        """Weighted sum of per-node values (shape (N,))."""
        values = np.asarray(values, dtype=float)
        if values.shape != self.weights.shape:
            raise ValueError(
                f'values have shape {values.shape}, rule has {self.weights.shape}'
            )
        return float(np.dot(self.weights, values))

    def boundary_points(self):
        """Points where admissible (compactly supported) fields must vanish."""
        raise NotImplementedError

    def __repr__(self):
        return f'<{self.__class__.__name__} {self.size} nodes, {self.space}>'


def _gauss_panels(breaks, order):
    """Gauss-Legendre nodes and weights on consecutive panels."""
    x, w = leggauss(order)
    breaks = np.asarray(breaks)
    a = breaks[:-1, None]
    b = breaks[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    return nodes, weights


def _graded_breaks(lo, hi, base_panels, focus_points, delta):
    """Uniform breakpoints on [lo, hi] refined geometrically near focus points."""
    breaks = list(np.linspace(lo, hi, base_panels + 1))
    width = (hi - lo) / base_panels
    for f in focus_points:
        if f < lo or f > hi:
            continue
        if lo < f < hi:
            breaks.append(f)
        step = delta
        while step < width:
            for b in (f - step, f + step):
                if lo < b < hi:
                    breaks.append(b)
            step *= 4.0
    breaks = np.unique(np.round(np.asarray(breaks), 15))
    keep = np.concatenate([[True], np.diff(breaks) > 1e-14 * max(1.0, hi - lo)])
    return breaks[keep]


def _log_breaks(lo, hi, panels_per_decade, extra=()):
    decades = math.log10(hi / lo)
    count = max(1, int(math.ceil(decades * panels_per_decade)))
    breaks = list(np.geomspace(lo, hi, count + 1))
    breaks.extend(e for e in extra if lo < e < hi)
    return np.unique(np.asarray(breaks))


def annulus_tensor_rule(space, inner, outer, n_theta, panels_per_decade,
                        order=None, radial_breaks=()):
    """Gauss rule in geodesic polar coordinates about a single center.

    Radial panels are logarithmic on [inner, outer], angular panels
    uniform on [0, pi]; the weights carry the full volume element of
    the annulus, so integrands may depend on (r, theta) only.

    Returns:
        (r, theta, weights), each of shape (Nr, Nt) after broadcasting.
    """
    if not 0 < inner < outer:
        raise DomainError(f'need 0 < inner < outer, got ({inner}, {outer})')
    order = order or Config.GAUSS_ORDER
    r, w_r = _gauss_panels(_log_breaks(inner, outer, panels_per_decade, radial_breaks), order)
    t_panels = max(1, n_theta // order)
    theta, w_t = _gauss_panels(np.linspace(0.0, math.pi, t_panels + 1), order)
    n = space.n
    w = np.outer(
        w_r * np.asarray(s_c(space.c, r)) ** (n - 1),
        w_t * np.sin(theta) ** (n - 2),
    ) * sphere_area(n - 2)
    rr, tt = np.meshgrid(r, theta, indexing='ij')
    return rr, tt, w


def _local_exponents(space, poles, local_exponents):
    if local_exponents is None:
        return (None,) * poles.m
    if np.ndim(local_exponents) == 0:
        local_exponents = [local_exponents] * poles.m
    out = tuple(None if p is None else float(p) for p in local_exponents)
    if len(out) != poles.m:
        raise ValueError(f'expected {poles.m} local exponents, got {len(out)}')
    critical = (2.0 - space.n) / 2.0
    for p in out:
        if p is not None and p <= critical:
            raise DomainError(f'local exponent {p} must exceed (2 - n)/2 = {critical}')
    return out


class AxiGrid(QuadratureRule):
    """Axisymmetric tensor grid in geodesic polar coordinates.

    Attributes:
        space: The model space.
        poles: PoleSet whose poles lie on the axis.
        r: Radial nodes, shape (Nr,).
        theta: Angular nodes, shape (Nt,).
        inner, outer: Radial extent of the region.
        rule: 'gauss' (graded Gauss-Legendre panels) or 'uniform'
            (cell-centred nodes whose last ring sits on r = outer).
        exclusion_radii: Per-pole cutoff delta_i.
        local_exponents: Per-pole exponent p of the local behaviour
            u ~ A d^p, or None where it is unknown; see excluded_disc_terms.
        active: Boolean mask (Nr, Nt) of nodes farther than delta_i
            from every pole.
        tensor_weights: Full weights (Nr, Nt), zero where inactive.
    """

    kind = 'axisymmetric'

    def __init__(self, space, poles, r, r_weights, theta, theta_weights,
                 inner, outer, rule, exclusion_radii, local_exponents=None):
        self.space = space
        self.poles = poles
        self.r = np.asarray(r, dtype=float)
        self.theta = np.asarray(theta, dtype=float)
        self.inner = float(inner)
        self.outer = float(outer)
        self.rule = rule
        self.exclusion_radii = np.asarray(exclusion_radii, dtype=float)
        self.local_exponents = _local_exponents(space, poles, local_exponents)

        n = space.n
        density = np.asarray(s_c(space.c, self.r)) ** (n - 1)
        angular = np.sin(self.theta) ** (n - 2)
        full = (
            np.outer(np.asarray(r_weights) * density, np.asarray(theta_weights) * angular)
            * sphere_area(n - 2)
        )

        self._tensor_points = self._embed(self.r, self.theta)
        active = np.ones(full.shape, dtype=bool)
        flat = ModelPoint(self._tensor_points.reshape(-1, space.dim), space)
        for pole, delta in zip(poles, self.exclusion_radii):
            d = distance(flat, pole).reshape(full.shape)
            active &= d > delta
        self.active = active
        self.tensor_weights = np.where(active, full, 0.0)
        self.weights = full[active]
        self.points = ModelPoint(self._tensor_points[active], space)
        self.region_volume = ball_volume(space, self.outer, self.inner)
        logger.debug(
            f'AxiGrid {self.r.size}x{self.theta.size} ({rule}) on {space}, '
            f'{int((~active).sum())} nodes excluded'
        )

    def _embed(self, r, theta):
        sp = self.space
        rr, tt = np.meshgrid(r, theta, indexing='ij')
        out = np.zeros(rr.shape + (sp.dim,))
        radial = rr if sp.c == 0 else np.asarray(s_c(sp.c, rr))
        out[..., 0] = radial * np.cos(tt)
        out[..., 1] = radial * np.sin(tt)
        if sp.c != 0:
            out[..., -1] = sp.radius * np.asarray(c_c(sp.c, rr))
        if sp.hemisphere:
            # equator ring of the uniform rule
            out[..., -1] = np.maximum(out[..., -1], np.finfo(float).tiny)
        return out

    @property
    def shape(self):
        return (self.r.size, self.theta.size)

    @property
    def nodes(self):
        """Active (r, theta) pairs, shape (N, 2)."""
        rr, tt = np.meshgrid(self.r, self.theta, indexing='ij')
        return np.stack([rr[self.active], tt[self.active]], axis=-1)

    @property
    def tensor_points(self):
        """ModelPoint batch of all Nr*Nt nodes in C order."""
        return ModelPoint(self._tensor_points.reshape(-1, self.space.dim), self.space)

    def boundary_points(self):
        """The outermost two radial rings (an annulus also gets the inner two)."""
        rings = [self.r.size - 1, self.r.size - 2]
        if self.inner > 0:
            rings += [0, 1]
        coords = self._tensor_points[rings].reshape(-1, self.space.dim)
        return ModelPoint(coords, self.space)

    def boundary_mask(self):
        """Tensor mask of the nodes returned by boundary_points."""
        mask = np.zeros(self.shape, dtype=bool)
        mask[-2:, :] = True
        if self.inner > 0:
            mask[:2, :] = True
        return mask


def build_axigrid(space, poles, region, resolution=None, exclusion=None,
                  rule='gauss', order=None, panels_per_decade=None,
                  radial_breaks=(), local_exponent=None):
    """Build an axisymmetric quadrature grid about the origin.

    Args:
        space: ModelSpace.
        poles: PoleSet with all poles on the e_1 axis.
        region: Outer radius (a ball) or a tuple (inner, outer) (an annulus).
        resolution: (N_r, N_theta) target node counts; defaults to
            Config.GRID_NR and Config.GRID_NTHETA.
        exclusion: Exclusion radius delta > 0 around each pole, a scalar
            or a sequence; defaults to EXCLUSION_FACTOR times the smallest
            pole separation.
        rule: 'gauss' or 'uniform'.
        order: Gauss-Legendre nodes per panel (default Config.GAUSS_ORDER).
        panels_per_decade: If set, radial panels are logarithmically
            spaced with this many panels per decade (annuli only).
        radial_breaks: Extra radial panel breakpoints.
        local_exponent: Exponent p with u ~ A d_i^p near each pole, a
            scalar or a per-pole sequence (None entries allowed). When
            given, excluded_disc_terms restores the excluded discs.

    Returns:
        AxiGrid.

    Raises:
        DomainError: If the region leaves the model, a pole is off the
            axis or delta is not positive.
    """
    if np.ndim(region) == 0:
        inner, outer = 0.0, float(region)
    else:
        inner, outer = (float(v) for v in region)
    if not 0 <= inner < outer:
        raise DomainError(f'region must satisfy 0 <= inner < outer, got ({inner}, {outer})')
    if space.c > 0:
        limit = space.max_distance / 2.0 if space.hemisphere else space.max_distance
        if outer > limit or (outer == limit and not space.hemisphere):
            raise DomainError(f'region radius {outer} leaves the model domain ({limit:.12g})')
    positions = poles.axis_positions()
    n_r, n_t = resolution or (Config.GRID_NR, Config.GRID_NTHETA)
    order = order or Config.GAUSS_ORDER

    if exclusion is None:
        exclusion = Config.EXCLUSION_FACTOR * poles.min_distance
    deltas = np.broadcast_to(np.asarray(exclusion, dtype=float), (poles.m,)).copy()
    if np.any(deltas <= 0):
        raise DomainError('exclusion radius must be positive')

    if rule == 'uniform':
        h_r = (outer - inner) / (n_r - 0.5)
        r = inner + (np.arange(n_r) + 0.5) * h_r
        r[-1] = outer
        w_r = np.full(n_r, h_r)
        w_r[-1] = 0.5 * h_r
        h_t = math.pi / n_t
        theta = (np.arange(n_t) + 0.5) * h_t
        w_t = np.full(n_t, h_t)
    elif rule == 'gauss':
        radii = np.abs(positions)
        if panels_per_decade:
            if inner <= 0:
                raise DomainError('logarithmic radial panels need an annulus (inner > 0)')
            r_breaks = _log_breaks(inner, outer, panels_per_decade, radial_breaks)
        else:
            base = max(1, n_r // order)
            focus = [t for t in radii if inner <= t <= outer]
            r_breaks = _graded_breaks(inner, outer, base, focus, float(deltas.min()))
            if len(radial_breaks):
                r_breaks = np.unique(np.concatenate(
                    [r_breaks, [b for b in radial_breaks if inner < b < outer]]))
        r, w_r = _gauss_panels(r_breaks, order)

        t_focus = []
        off_origin = radii[radii > 0]
        if np.any(positions > 0):
            t_focus.append(0.0)
        if np.any(positions < 0):
            t_focus.append(math.pi)
        base_t = max(1, n_t // order)
        t_delta = float(deltas.min() / off_origin.max()) if off_origin.size else math.pi
        t_breaks = _graded_breaks(0.0, math.pi, base_t, t_focus, t_delta)
        theta, w_t = _gauss_panels(t_breaks, order)
    else:
        raise ValueError(f'Unknown rule "{rule}". Must be one of: gauss, uniform')

    return AxiGrid(space, poles, r, w_r, theta, w_t, inner, outer, rule, deltas,
                   local_exponents=local_exponent)


class QmcRule(QuadratureRule):
    """Scrambled Sobol rule on the geodesic ball of radius rho.

    Points are drawn uniformly in the tangent ball at the origin and
    mapped by the exponential map; weights carry the Jacobian
    (s_c(r)/r)^(n-1). Nodes within delta of a pole are dropped.
    """

    kind = 'quasi-monte-carlo'

    def __init__(self, space, poles, rho, samples, seed, exclusion, local_exponents=None):
        if rho > space.max_distance / 2.0 and space.c > 0:
            raise DomainError('QMC balls on the sphere must stay in the hemisphere')
        n = space.n
        sampler = qmc.Sobol(d=n + 1, scramble=True, seed=seed)
        m = int(math.ceil(math.log2(max(samples, 2))))
        u = sampler.random_base2(m)
        u = np.clip(u, 1e-12, 1 - 1e-12)
        radius = rho * u[:, 0] ** (1.0 / n)
        gauss = norm.ppf(u[:, 1:])
        direction = gauss / np.linalg.norm(gauss, axis=1, keepdims=True)
        v = np.zeros((u.shape[0], space.dim))
        v[:, :n] = direction * radius[:, None]
        pts = space.exp(space.origin(), v)

        jac = (1.0 + np.asarray(sinc_excess(space.c, radius, strict=False))) ** (n - 1)
        weights = jac * (sphere_area(n - 1) * rho ** n / n) / u.shape[0]

        active = np.ones(u.shape[0], dtype=bool)
        deltas = np.broadcast_to(np.asarray(exclusion, dtype=float), (poles.m,))
        for pole, delta in zip(poles, deltas):
            active &= np.asarray(distance(pts, pole)) > delta

        self.space = space
        self.poles = poles
        self.rho = float(rho)
        self.seed = seed
        self.exclusion_radii = np.array(deltas)
        self.local_exponents = _local_exponents(space, poles, local_exponents)
        self.points = ModelPoint(pts.coords[active], space)
        self.weights = weights[active]
        self.region_volume = ball_volume(space, rho)
        self._boundary_dirs = direction[:256]

    def boundary_points(self):
        sp = self.space
        v = np.zeros((self._boundary_dirs.shape[0], sp.dim))
        v[:, :sp.n] = self._boundary_dirs * self.rho
        return sp.exp(sp.origin(), v)


def build_qmc_rule(space, poles, radius, samples=None, seed=None, exclusion=None,
                   local_exponent=None):
    """Quasi-Monte Carlo rule for pole sets in general position."""
    samples = samples or Config.QMC_SAMPLES
    seed = Config.DEFAULT_SEED if seed is None else seed
    if exclusion is None:
        exclusion = Config.EXCLUSION_FACTOR * poles.min_distance
    return QmcRule(space, poles, radius, samples, seed, exclusion, local_exponent)


# Active nodes nearest a pole used to fit the local amplitude.
NEAR_NODES = 8


@dataclass
class DiscTerms:
    """Closed-form integrals over the excluded discs B_delta(x_i).

    Inside each disc with a known exponent p, u = A d^p to leading order
    and with S = |S^(n-1)|, k = 2p + n - 2:

        int u^2 d^-2      = S A^2 delta^k / k          (weighted[i])
        int |grad u|^2    = p^2 S A^2 delta^k / k
        int u^2           = S A^2 delta^(k+2) / (k+2)

    Attributes:
        energy: Sum of the disc Dirichlet energies.
        mass: Sum of the disc L^2 masses.
        weighted: Per-pole int u^2 d_i^-2, zero where p is unknown.
        exponents: Per-pole exponents (None where unknown).
        near: Per-pole index arrays of the active nodes used for the fit.
    """

    energy: float
    mass: float
    weighted: np.ndarray
    exponents: tuple
    near: list

    def leading_coefficient(self, rule, i, weight):
        """lim d_i^2 weight(x) at pole i, fitted on the nearest active nodes."""
        idx = self.near[i]
        pts = rule.points[idx]
        d = np.atleast_1d(distance(pts, rule.poles[i]))
        return float(np.mean(np.atleast_1d(weight(pts)) * d * d))


def excluded_disc_terms(rule, field):
    """Restore the excluded pole discs of a rule for a field u ~ A d^p.

    The amplitude A is fitted as the mean of u^2 d^(-2p) over the
    NEAR_NODES active nodes closest to the pole. Poles whose exponent is
    unknown contribute nothing.

    Args:
        rule: AxiGrid or QmcRule.
        field: BaseField.

    Returns:
        DiscTerms.
    """
    space = rule.space
    n = space.n
    area = sphere_area(n - 1)
    exponents = getattr(rule, 'local_exponents', None) or (None,) * len(rule.poles)
    weighted = np.zeros(len(rule.poles))
    energy = mass = 0.0
    near = []
    for i, (pole, delta, p) in enumerate(zip(rule.poles, rule.exclusion_radii, exponents)):
        if p is None:
            near.append(np.array([], dtype=int))
            continue
        d = np.atleast_1d(distance(rule.points, pole))
        idx = np.argsort(d)[:NEAR_NODES]
        near.append(idx)
        u = np.atleast_1d(np.asarray(field.values(rule.points[idx]), dtype=float))
        amp2 = float(np.mean(u * u * d[idx] ** (-2.0 * p)))
        k = 2.0 * p + n - 2.0
        weighted[i] = area * amp2 * delta ** k / k
        energy += p * p * weighted[i]
        mass += area * amp2 * delta ** (k + 2.0) / (k + 2.0)
    if np.any(weighted):
        logger.debug(f'excluded discs restore int u^2/d^2 = {weighted}')
    return DiscTerms(float(energy), float(mass), weighted, tuple(exponents), near)


class ScalarField:
    """Samples of a scalar function on every tensor node of an AxiGrid.

    Attributes:
        grid: The AxiGrid.
        values: Array of shape grid.shape (all tensor nodes, including
            excluded ones, so that finite differences stay defined).
    """

    def __init__(self, grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f'values have shape {values.shape}, grid has {grid.shape}')
        if not np.all(np.isfinite(values)):
            raise ValueError('field values must be finite')
        self.grid = grid
        self.values = values

    @classmethod
    def from_field(cls, grid, field):
        """Sample a BaseField (anything with .values(points)) on the grid."""
        vals = np.asarray(field.values(grid.tensor_points), dtype=float)
        return cls(grid, vals.reshape(grid.shape))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @property
    def active_values(self):
        return self.values[self.grid.active]

    def __len__(self):
        return int(self.grid.active.sum())


def integrate(field):
    """Integral of a ScalarField over its grid region."""
    return float(np.sum(field.grid.tensor_weights * field.values))


def gradient_field(field):
    """Finite-difference gradient of a ScalarField.

    Returns:
        Array (Nr, Nt, 2) with the orthonormal components
        (du/dr, du/dtheta / s_c(r)); second order in the node spacing,
        including the edges.
    """
    grid = field.grid
    du_dr = np.gradient(field.values, grid.r, axis=0, edge_order=2)
    du_dt = np.gradient(field.values, grid.theta, axis=1, edge_order=2)
    sr = np.asarray(s_c(grid.space.c, grid.r))
    return np.stack([du_dr, du_dt / sr[:, None]], axis=-1)


def gradient_norm_squared(field):
    """|grad u|^2 on the tensor grid from finite differences."""
    g = gradient_field(field)
    return np.sum(g * g, axis=-1)


def grid_frame(field):
    """Active nodes of a field as a pandas DataFrame (r, theta, weight, value)."""
    import pandas as pd

    nodes = field.grid.nodes
    return pd.DataFrame({
        'r': nodes[:, 0],
        'theta': nodes[:, 1],
        'weight': field.grid.weights,
        'value': field.active_values,
    })
