"""Desk-scale solvers for the two bipolar Schroedinger problems.

Both problems are discretized on an axisymmetric 'uniform' AxiGrid about
the origin. The last radial ring is a homogeneous Dirichlet ring (the
truncation sphere on hyperbolic space, the equator on the hemisphere);
the unknowns are the values on all other rings.

Hyperbolic problem (kind 'pm'), for u >= 0 decaying at infinity:

    E(u) = 1/2 int (|grad u|^2 + V u^2) - lam/2 int H u^2 - mu int W F(u)
    H    = s_c(d_12/2)^2 / (d_1 d_2 s_c(d_1) s_c(d_2))

Hemisphere problem (kind 'hemisphere'):

    E(u) = 1/2 (int |grad u|^2 + C(n, beta) int u^2)
           - lam/2 int |grad d_1/d_1 - grad d_2/d_2|^2 u^2 - 1/p int |u|^p

The Dirichlet integral is a sparse face-difference form u^T A u/2 with
positive face coefficients, so every discrete energy, gradient and
Hessian is exact for the discrete problem. Residuals are dual norms
sqrt(g^T P^-1 g) with P the Dirichlet-plus-potential operator.
"""

import logging
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np
from scipy import optimize, sparse
from scipy.sparse import linalg as sparse_linalg
from scipy.stats import ortho_group

from hardylab.config import Config
from hardylab.curvature_fn import c_c, hemisphere_constant, s_c
from hardylab.errors import DomainError, HypothesisError
from hardylab.fields import RadialBump
from hardylab.hardy import weight_hadamard_cosine, weight_pairwise_gradient
from hardylab.model_space import ModelPoint, ModelSpace, PoleSet, distance
from hardylab.quadrature import ScalarField, build_axigrid, sphere_area

logger = logging.getLogger(__name__)

ZERO_NORM = 1e-8
NEGATIVE_ENERGY = -1e-6


# Default instance of the hyperbolic problem

def default_potential(r):
    """V = 1 + d(x_0, x)^2."""
    return 1.0 + np.asarray(r) ** 2


def default_weight(r):
    """W = exp(-d(x_0, x))."""
    return np.exp(-np.asarray(r))


def default_f(s):
    """f(s) = s^2/(1 + s^3) for s >= 0 and 0 for s <= 0."""
    s = np.maximum(np.asarray(s, dtype=float), 0.0)
    return s * s / (1.0 + s ** 3)


def default_F(s):
    """Primitive F(s) = log(1 + s^3)/3 of default_f."""
    s = np.maximum(np.asarray(s, dtype=float), 0.0)
    return np.log1p(s ** 3) / 3.0


def default_fprime(s):
    s = np.maximum(np.asarray(s, dtype=float), 0.0)
    return (2.0 * s - s ** 4) / (1.0 + s ** 3) ** 2


@dataclass
class SchrodingerConfig:
    """One instance of either problem.

    Attributes:
        kind: 'pm' (hyperbolic space) or 'hemisphere'.
        space: ModelSpace; c < 0 for 'pm', a hemisphere for 'hemisphere'.
        poles: PoleSet of two poles on the e_1 axis.
        lam: Coefficient of the Hardy term.
        mu: Coefficient of the sublinear term ('pm' only).
        p: Exponent of the power nonlinearity ('hemisphere' only).
        region: Radius of the Dirichlet ring.
        resolution: (N_r, N_theta) of the solver grid.
        potential, weight: Radial potentials V(r), W(r) ('pm' only).
        f, F, fprime: Nonlinearity, its primitive and derivative ('pm' only).
    """

    kind: str
    space: ModelSpace
    poles: PoleSet
    lam: float
    mu: float = 0.0
    p: float = 3.0
    region: float = None
    resolution: tuple = None
    potential: object = default_potential
    weight: object = default_weight
    f: object = default_f
    F: object = default_F
    fprime: object = default_fprime

    def __post_init__(self):
        n = self.space.n
        if self.poles.m != 2:
            raise DomainError(f'the bipolar problems need two poles, got {self.poles.m}')
        if self.resolution is None:
            self.resolution = (Config.SOLVER_NR, Config.SOLVER_NTHETA)
        if self.kind == 'pm':
            if self.space.c >= 0:
                raise DomainError(f'the hyperbolic problem needs c < 0, got c = {self.space.c}')
            if not 0 <= self.lam < (n - 2) ** 2:
                raise HypothesisError(
                    f'lambda = {self.lam} is outside [0, (n-2)^2) = [0, {(n - 2) ** 2})',
                    'lambda in [0, (n-2)^2)',
                )
            if self.mu < 0:
                raise HypothesisError(f'mu = {self.mu} is negative', 'mu >= 0')
            if self.region is None:
                self.region = Config.PM_RADIUS
        elif self.kind == 'hemisphere':
            if not self.space.hemisphere:
                raise DomainError('the hemisphere problem needs a hemisphere model')
            if not 0 <= self.lam < (n - 2) ** 2 / 4:
                raise HypothesisError(
                    f'lambda = {self.lam} is outside [0, (n-2)^2/4) = [0, {(n - 2) ** 2 / 4})',
                    'lambda in [0, (n-2)^2/4)',
                )
            critical = 2.0 * n / (n - 2)
            if not 2 < self.p < critical:
                raise HypothesisError(
                    f'p = {self.p} is outside (2, 2n/(n-2)) = (2, {critical:g})',
                    'subcritical exponent 2 < p < 2*',
                )
            self.region = self.space.max_distance / 2
        else:
            raise ValueError(f'Unknown problem kind "{self.kind}". Must be one of: pm, hemisphere')

    @cached_property
    def system(self):
        """Discretized operators, built on first use."""
        return _System(self)


def pm_config(mu, lam=None, positions=(-0.5, 0.5), n=3, c=-1.0, region=None, resolution=None):
    """Default hyperbolic instance; lam defaults to (n-2)^2/2."""
    space = ModelSpace(n, c)
    poles = PoleSet.on_axis(space, positions)
    lam = 0.5 * (n - 2) ** 2 if lam is None else lam
    return SchrodingerConfig('pm', space, poles, lam, mu=mu, region=region, resolution=resolution)


def hemisphere_config(b=0.8, lam=None, p=3.0, n=3, resolution=None):
    """Hemisphere instance with poles (a, 0, ..., 0, b) and (-a, 0, ..., 0, b).

    lam defaults to (n-2)^2/8, half the admissible range.
    """
    if not 0 < b < 1:
        raise DomainError(f'b must lie in (0, 1), got {b}')
    space = ModelSpace(n, 1.0, hemisphere=True)
    poles = PoleSet.symmetric(space, math.acos(b))
    lam = 0.5 * (n - 2) ** 2 / 4 if lam is None else lam
    return SchrodingerConfig('hemisphere', space, poles, lam, p=p, resolution=resolution)


class _System:
    """Sparse operators of one SchrodingerConfig on its solver grid."""

    def __init__(self, config):
        self.config = config
        space = config.space
        self.grid = build_axigrid(
            space, config.poles, config.region, resolution=config.resolution,
            exclusion=1e-9 * config.poles.min_distance, rule='uniform',
        )
        n_r, n_t = self.grid.shape
        self.interior_shape = (n_r - 1, n_t)
        self.size = (n_r - 1) * n_t
        self.r = np.repeat(self.grid.r[:-1], n_t)
        self.w = self.grid.tensor_weights[:-1].ravel()
        coords = self.grid.tensor_points.coords.reshape(n_r, n_t, space.dim)[:-1]
        self.coords = coords.reshape(-1, space.dim)
        self.stiffness = self._stiffness()

        if config.kind == 'pm':
            self.V = np.asarray(config.potential(self.r), dtype=float)
            self.W = np.asarray(config.weight(self.r), dtype=float)
            self.mass_diag = self.w * self.V
            self.beta = None
            self.constant = None
        else:
            self.beta = config.poles.max_origin_distance()
            c = space.c
            self.constant = c * hemisphere_constant(space.n, math.sqrt(c) * self.beta)
            self.mass_diag = self.w * self.constant
        self.hardy = self.hardy_potential(self.coords)
        self.quadratic = (
            self.stiffness + sparse.diags(self.mass_diag - config.lam * self.w * self.hardy)
        ).tocsr()
        self.preconditioner = (self.stiffness + sparse.diags(self.mass_diag)).tocsc()
        self._lu = sparse_linalg.splu(self.preconditioner)
        logger.debug(f'{config.kind} system: {self.size} unknowns on {self.grid.shape} grid')

    def _stiffness(self):
        """Face-difference Dirichlet form on the interior unknowns."""
        grid = self.grid
        space = grid.space
        n = space.n
        r, theta = grid.r, grid.theta
        n_r, n_t = grid.shape
        h_t = theta[1] - theta[0]
        h_r = r[1] - r[0]
        area = sphere_area(n - 2)
        idx = np.arange(n_r * n_t).reshape(n_r, n_t)

        rows, cols, vals = [], [], []

        def add(a, b, kappa):
            rows.extend([a, b, a, b])
            cols.extend([a, b, b, a])
            vals.extend([kappa, kappa, -kappa, -kappa])

        r_face = 0.5 * (r[:-1] + r[1:])
        radial = (
            area * np.asarray(s_c(space.c, r_face))[:, None] ** (n - 1)
            * np.sin(theta)[None, :] ** (n - 2) * h_t / np.diff(r)[:, None]
        )
        add(idx[:-1].ravel(), idx[1:].ravel(), radial.ravel())

        t_face = 0.5 * (theta[:-1] + theta[1:])
        angular = (
            area * np.asarray(s_c(space.c, r[:-1]))[:, None] ** (n - 3)
            * np.sin(t_face)[None, :] ** (n - 2) * h_r / h_t
        )
        add(idx[:-1, :-1].ravel(), idx[:-1, 1:].ravel(), angular.ravel())

        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        vals = np.concatenate(vals)
        full = sparse.coo_matrix((vals, (rows, cols)), shape=(n_r * n_t,) * 2).tocsr()
        keep = idx[:-1].ravel()
        return full[keep][:, keep].tocsr()

    def hardy_potential(self, coords):
        """Hardy weight of the problem at embedded node coordinates."""
        space = self.config.space
        pts = ModelPoint(coords, space)
        p1, p2 = self.config.poles[0], self.config.poles[1]
        if self.config.kind == 'pm':
            return 0.25 * np.asarray(weight_hadamard_cosine(pts, p1, p2))
        return np.asarray(weight_pairwise_gradient(pts, p1, p2))

    # conversions

    def to_vector(self, field):
        if isinstance(field, ScalarField):
            return field.values[:-1].ravel().copy()
        vec = np.asarray(field, dtype=float).ravel()
        if vec.size != self.size:
            raise ValueError(f'expected {self.size} interior values, got {vec.size}')
        return vec.copy()

    def to_field(self, vec):
        full = np.zeros(self.grid.shape)
        full[:-1] = np.asarray(vec).reshape(self.interior_shape)
        return ScalarField(self.grid, full)

    # discrete functionals

    def energy(self, u, quadratic=None):
        K = self.quadratic if quadratic is None else quadratic
        value = 0.5 * float(u @ (K @ u))
        cfg = self.config
        if cfg.kind == 'pm':
            return value - cfg.mu * float(np.sum(self.w * self.W * cfg.F(u)))
        return value - float(np.sum(self.w * np.abs(u) ** cfg.p)) / cfg.p

    def gradient(self, u):
        cfg = self.config
        g = self.quadratic @ u
        if cfg.kind == 'pm':
            return g - cfg.mu * self.w * self.W * cfg.f(u)
        return g - self.w * np.abs(u) ** (cfg.p - 2) * u

    def hessian(self, u):
        cfg = self.config
        if cfg.kind == 'pm':
            diag = cfg.mu * self.w * self.W * cfg.fprime(u)
        else:
            diag = (cfg.p - 1) * self.w * np.abs(u) ** (cfg.p - 2)
        return (self.quadratic - sparse.diags(diag)).tocsc()

    def precondition(self, g):
        return self._lu.solve(g)

    def dual_norm(self, g):
        return math.sqrt(max(float(g @ self.precondition(g)), 0.0))

    def norm(self, u):
        return math.sqrt(max(float(u @ (self.preconditioner @ u)), 0.0))


@dataclass
class SolveResult:
    """Outcome of one solve.

    Attributes:
        field: ScalarField on the solver grid (zero on the Dirichlet ring).
        energy: Discrete energy.
        residual_norm: Dual norm of the discrete energy gradient.
        classification: zero, global-min, local-min, mountain-pass or nehari.
        iterations: Descent plus Newton iterations.
        converged: Residual reached the requested tolerance.
        diagnostics: Thresholds and checks (c_f, V_0, |W|_inf, mu_0, ...).
    """

    field: ScalarField
    energy: float
    residual_norm: float
    classification: str
    iterations: int
    converged: bool
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def min_value(self):
        return float(self.field.values.min())

    def to_dict(self):
        grid = self.field.grid
        return {
            'energy': self.energy,
            'residual_norm': self.residual_norm,
            'classification': self.classification,
            'iterations': self.iterations,
            'converged': self.converged,
            'min_value': self.min_value,
            'max_value': float(self.field.values.max()),
            'grid': {
                'rule': grid.rule,
                'shape': [int(v) for v in grid.shape],
                'region': grid.outer,
                'n': grid.space.n,
                'c': grid.space.c,
            },
            'diagnostics': dict(self.diagnostics),
        }


def _check_kind(config, kind):
    if config.kind != kind:
        raise ValueError(f'expected a {kind} problem, got {config.kind}')


def energy_pm(config, field):
    """Discrete energy of the hyperbolic problem."""
    _check_kind(config, 'pm')
    system = config.system
    return system.energy(system.to_vector(field))


def gradient_pm(config, field):
    """Discrete energy gradient as a ScalarField of dual values.

    The directional derivative of energy_pm along h is the sum of
    gradient values times h over the interior nodes.
    """
    _check_kind(config, 'pm')
    system = config.system
    return system.to_field(system.gradient(system.to_vector(field)))


def energy_hemisphere(config, field, rotation=None):
    """Discrete energy of the hemisphere problem.

    Args:
        rotation: Optional (n+1)x(n+1) orthogonal matrix from g0_rotation;
            the node-dependent weights are then evaluated at the rotated
            nodes.
    """
    _check_kind(config, 'hemisphere')
    system = config.system
    u = system.to_vector(field)
    if rotation is None:
        return system.energy(u)
    rotation = np.asarray(rotation, dtype=float)
    hardy = system.hardy_potential(system.coords @ rotation.T)
    quadratic = system.stiffness + sparse.diags(system.mass_diag - config.lam * system.w * hardy)
    return system.energy(u, quadratic=quadratic.tocsr())


def gradient_hemisphere(config, field):
    """Discrete energy gradient of the hemisphere problem (dual values)."""
    _check_kind(config, 'hemisphere')
    system = config.system
    return system.to_field(system.gradient(system.to_vector(field)))


def g0_rotation(space, rng):
    """Random rotation id x O(n-1) x id of the embedding space.

    It fixes e_1 and e_(n+1), hence the poles and the north pole.
    """
    if space.c <= 0:
        raise DomainError('the pole-axis rotation group acts on the sphere model')
    n = space.n
    block = ortho_group.rvs(n - 1, random_state=rng)
    rot = np.eye(space.dim)
    rot[1:n, 1:n] = block
    return rot


# nonlinearity constants and hypotheses

def nonlinearity_constant(config):
    """c_f = max_{s>0} f(s)/s, by bounded 1D maximization in log s."""
    res = optimize.minimize_scalar(
        lambda t: -float(config.f(math.exp(t))) / math.exp(t),
        bounds=(-20.0, 20.0), method='bounded', options={'xatol': 1e-12},
    )
    return -float(res.fun)


def check_pm_hypotheses(config):
    """Assert the hypotheses on V, W, f and lam on the solver grid.

    Returns:
        Dict with V_0, V at the truncation radius, sup W, c_f and s_max.

    Raises:
        HypothesisError: Naming the first violated hypothesis.
    """
    _check_kind(config, 'pm')
    r = np.linspace(0.0, config.region, 2001)
    V = np.asarray(config.potential(r))
    W = np.asarray(config.weight(r))
    v0 = float(V.min())
    if not v0 > 0:
        raise HypothesisError(f'inf V = {v0} is not positive', 'V_0 = inf V > 0')
    if not V[-1] > V[0]:
        raise HypothesisError('V does not grow toward the truncation radius', 'V -> infinity at infinity')
    if not (np.all(W > 0) and np.all(np.isfinite(W))):
        raise HypothesisError('W is not positive and bounded', 'W > 0 bounded and integrable')
    small = float(config.f(1e-8)) / 1e-8
    large = float(config.f(1e8)) / 1e8
    if small > 1e-6 or large > 1e-6:
        raise HypothesisError(
            f'f(s)/s is {small:.2e} at s=1e-8 and {large:.2e} at s=1e8',
            'f(s) = o(s) at 0+ and at infinity',
        )
    s_grid = np.geomspace(1e-3, 1e3, 601)
    F_vals = np.asarray(config.F(s_grid))
    if not np.any(F_vals > 0):
        raise HypothesisError('F(s) <= 0 for all sampled s > 0', 'F(s_0) > 0 for some s_0 > 0')
    c_f = nonlinearity_constant(config)
    return {
        'V_0': v0,
        'V_at_region': float(V[-1]),
        'W_sup': float(W.max()),
        'c_f': c_f,
        's_max': float(s_grid[np.argmax(F_vals)]),
    }


def zero_solution_threshold(config):
    """V_0 / (|W|_inf c_f): below this mu the only solution is zero."""
    diag = check_pm_hypotheses(config)
    return diag['V_0'] / (diag['W_sup'] * diag['c_f'])


def default_trial_fields(config):
    """Bumps centred on the axis at several radii, sampled on the solver grid."""
    system = config.system
    space = config.space
    fields = []
    for t in (-1.0, 0.0, 1.0):
        for radius in (1.0, 2.0, 4.0):
            if abs(t) + radius >= config.region:
                continue
            bump = RadialBump(space, space.axis_point(t), radius)
            fields.append(ScalarField.from_field(system.grid, bump))
    return fields


def _mu0_for(system, u):
    """min_t ||t u||_V^2 / (2 int W F(t u)) over t > 0, or inf."""
    cfg = system.config
    norm2 = float(u @ (system.preconditioner @ u))

    def ratio(log_t):
        t = math.exp(log_t)
        denom = 2.0 * float(np.sum(system.w * system.W * cfg.F(t * u)))
        if not denom > 0:
            return math.inf
        return t * t * norm2 / denom

    logs = np.linspace(math.log(1e-3), math.log(1e4), 401)
    values = np.array([ratio(x) for x in logs])
    k = int(np.argmin(values))
    if not math.isfinite(values[k]):
        return math.inf, None
    lo, hi = logs[max(k - 1, 0)], logs[min(k + 1, len(logs) - 1)]
    res = optimize.minimize_scalar(ratio, bounds=(lo, hi), method='bounded')
    best = min(float(res.fun), float(values[k]))
    t = math.exp(res.x if res.fun <= values[k] else logs[k])
    return best, t


def mu0_estimate(config, trial_fields=None):
    """Upper bound on mu_0 = 1/2 inf ||u||_V^2 / int W F(u) over trial fields.

    Args:
        config: 'pm' SchrodingerConfig.
        trial_fields: ScalarFields on the solver grid; default_trial_fields
            when omitted. A larger family can only lower the estimate.

    Returns:
        (estimate, best ScalarField scaled to the minimizing amplitude).

    Raises:
        HypothesisError: If no trial field has int W F(u) > 0.
    """
    _check_kind(config, 'pm')
    system = config.system
    trial_fields = trial_fields if trial_fields is not None else default_trial_fields(config)
    best, best_u = math.inf, None
    for fld in trial_fields:
        u = system.to_vector(fld)
        value, t = _mu0_for(system, u)
        if value < best:
            best, best_u = value, t * u
    if best_u is None:
        raise HypothesisError(
            'no trial field has int W F(u) > 0; use nonnegative fields where F is positive',
            'F(s_0) > 0 for some s_0 > 0',
        )
    logger.info(f'mu_0 estimate {best:.6g} from {len(trial_fields)} trial fields')
    return best, system.to_field(best_u)


def smallest_eigenvalue(config, seed=None):
    """Smallest eigenvalue of the quadratic part relative to the mass matrix.

    Solves K x = theta diag(w) x by LOBPCG, preconditioned with the
    Dirichlet-plus-potential operator. Positive values mean the discrete
    Hardy term is dominated.
    """
    system = config.system
    seed = Config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    X = rng.random((system.size, 4))
    B = sparse.diags(system.w).tocsr()
    M = sparse_linalg.LinearOperator(
        (system.size, system.size), matvec=system.precondition, dtype=float,
    )
    values, _ = sparse_linalg.lobpcg(
        system.quadratic, X, B=B, M=M, largest=False, tol=1e-8, maxiter=500,
    )
    return float(np.min(values))


# solvers

def _descend(system, u, max_iter, tol):
    """Preconditioned steepest descent with Armijo backtracking."""
    energy = system.energy(u)
    g = system.gradient(u)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        pg = system.precondition(g)
        slope = -float(g @ pg)
        if math.sqrt(max(-slope, 0.0)) < tol:
            break
        step = 1.0
        while True:
            trial = u - step * pg
            trial_energy = system.energy(trial)
            if trial_energy <= energy + 1e-4 * step * slope:
                break
            step *= 0.5
            if step < 1e-12:
                return u, iterations
        u, energy = trial, trial_energy
        g = system.gradient(u)
    return u, iterations


def _newton(system, u, tol, max_iter=30):
    """Damped Newton iteration on the energy gradient."""
    g = system.gradient(u)
    res = system.dual_norm(g)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if res < tol:
            break
        try:
            delta = sparse_linalg.spsolve(system.hessian(u), -g)
        except RuntimeError:
            break
        if not np.all(np.isfinite(delta)):
            break
        step = 1.0
        while step > 1e-4:
            trial = u + step * delta
            g_trial = system.gradient(trial)
            res_trial = system.dual_norm(g_trial)
            if res_trial < res:
                break
            step *= 0.5
        else:
            break
        u, g, res = trial, g_trial, res_trial
    return u, iterations, res


def _minimize(system, u, tol):
    max_iter = Config.SOLVER_MAX_ITER
    u, it_descent = _descend(system, u, max_iter, tol)
    u, it_newton, res = _newton(system, u, tol)
    return u, it_descent + it_newton, res


def _random_start(system, rng):
    cfg = system.config
    space = cfg.space
    amplitude = 10.0 ** rng.uniform(-1.0, 1.3)
    center = space.axis_point(rng.uniform(-2.0, 2.0))
    width = rng.uniform(0.5, 2.5)
    d = np.asarray(distance(ModelPoint(system.coords, space), center))
    return amplitude * np.exp(-(d / width) ** 2) * (1.0 - system.r / cfg.region)


def _reparametrize(system, path):
    """Redistribute path images at equal spacing in the P-norm."""
    seg = [system.norm(b - a) for a, b in zip(path, path[1:])]
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0:
        return path
    targets = np.linspace(0.0, s[-1], len(path))
    out = [path[0]]
    for t in targets[1:-1]:
        k = min(int(np.searchsorted(s, t, side='right')) - 1, len(path) - 2)
        frac = (t - s[k]) / (s[k + 1] - s[k]) if s[k + 1] > s[k] else 0.0
        out.append((1.0 - frac) * path[k] + frac * path[k + 1])
    out.append(path[-1])
    return out


def mountain_pass(system, u_end, images=16, max_iter=300, tol=None):
    """Numerical mountain pass between 0 and u_end.

    A string of images is relaxed by preconditioned descent with
    equal-spacing reparametrization; the highest image is then driven to
    the saddle by climbing-image steps and polished with Newton.

    Returns:
        (u, iterations, residual).
    """
    tol = tol or Config.SOLVER_TOL
    path = [t * u_end for t in np.linspace(0.0, 1.0, images)]
    scale = max(system.norm(u_end), 1.0)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        moved = 0.0
        for k in range(1, images - 1):
            step = 0.2 * system.precondition(system.gradient(path[k]))
            path[k] = path[k] - step
            moved = max(moved, system.norm(step))
        path = _reparametrize(system, path)
        if moved < 1e-6 * scale:
            break

    energies = [system.energy(u) for u in path]
    k = int(np.argmax(energies[1:-1])) + 1
    u = path[k]
    tangent = path[k + 1] - path[k - 1]
    tangent = tangent / max(system.norm(tangent), 1e-300)
    for _ in range(Config.SOLVER_MAX_ITER):
        g = system.gradient(u)
        if system.dual_norm(g) < 1e-3 * scale:
            break
        direction = -system.precondition(g) + 2.0 * float(tangent @ g) * tangent
        u = u + 0.2 * direction
        iterations += 1
    u, it_newton, res = _newton(system, u, tol)
    return u, iterations + it_newton, res


def solve_pm(config, starts=10, seed=None, tol=None, progress_callback=None):
    """Multi-start solve of the hyperbolic problem.

    Every start is minimized by preconditioned descent and Newton. When
    a run reaches energy below NEGATIVE_ENERGY, the lowest one is the
    global-min candidate and a mountain-pass candidate between 0 and it
    is appended.

    Args:
        config: 'pm' SchrodingerConfig.
        starts: Number of descent runs; the first starts from the
            minimizing trial field of mu0_estimate.
        seed: Seed of the random starts.
        tol: Residual tolerance (default Config.SOLVER_TOL).
        progress_callback: Optional callable(completed, total).

    Returns:
        List of SolveResult.
    """
    _check_kind(config, 'pm')
    tol = tol or Config.SOLVER_TOL
    seed = Config.DEFAULT_SEED if seed is None else seed
    diagnostics = check_pm_hypotheses(config)
    diagnostics['zero_threshold'] = diagnostics['V_0'] / (diagnostics['W_sup'] * diagnostics['c_f'])
    mu0, trial = mu0_estimate(config)
    diagnostics['mu0_estimate'] = mu0
    diagnostics['mu'] = config.mu
    diagnostics['lambda'] = config.lam

    system = config.system
    rng = np.random.default_rng(seed)
    initial = [system.to_vector(trial)] + [_random_start(system, rng) for _ in range(starts - 1)]
    total = len(initial) + 1
    runs = []
    for k, u0 in enumerate(initial, start=1):
        u, iterations, res = _minimize(system, u0, tol)
        runs.append((u, system.energy(u), res, iterations))
        logger.debug(f'start {k}: energy={runs[-1][1]:.6e} residual={res:.2e}')
        if progress_callback:
            progress_callback(k, total)

    results = []
    best = min(range(len(runs)), key=lambda i: runs[i][1])
    best_energy = runs[best][1]
    for k, (u, energy, res, iterations) in enumerate(runs):
        if system.norm(u) < ZERO_NORM:
            kind = 'zero'
        elif energy <= best_energy + 1e-9 * max(1.0, abs(best_energy)):
            kind = 'global-min'
        else:
            kind = 'local-min'
        results.append(SolveResult(
            field=system.to_field(u),
            energy=energy,
            residual_norm=res,
            classification=kind,
            iterations=iterations,
            converged=res < tol or system.norm(u) < ZERO_NORM,
            diagnostics=dict(diagnostics, start=k, field_norm=system.norm(u)),
        ))

    if best_energy < NEGATIVE_ENERGY:
        u_min = runs[best][0]
        u, iterations, res = mountain_pass(system, u_min, tol=tol)
        energy = system.energy(u)
        distinct = (
            system.norm(u) > ZERO_NORM
            and system.norm(u - u_min) > 1e-3 * system.norm(u_min)
        )
        converged = res < tol and energy > 0 and distinct
        if not converged:
            logger.warning(
                f'mountain-pass candidate not confirmed: energy={energy:.3e}, '
                f'residual={res:.2e}, distinct={distinct}'
            )
        results.append(SolveResult(
            field=system.to_field(u),
            energy=energy,
            residual_norm=res,
            classification='mountain-pass',
            iterations=iterations,
            converged=converged,
            diagnostics=dict(diagnostics, candidate=True, field_norm=system.norm(u)),
        ))
    if progress_callback:
        progress_callback(total, total)
    logger.info(
        f'solve-pm mu={config.mu:g}: best energy {best_energy:.6e}, '
        f'{sum(r.classification == "zero" for r in results)} zero runs'
    )
    return results


def truncation_sensitivity(config, result, radius=None, tol=None):
    """Relative energy change when the Dirichlet ring moves out to radius.

    The field is carried over by radial interpolation at equal spacing
    and re-minimized on the larger grid.
    """
    _check_kind(config, 'pm')
    radius = radius or Config.PM_SENSITIVITY_RADIUS
    tol = tol or Config.SOLVER_TOL
    n_r, n_t = config.resolution
    bigger = SchrodingerConfig(
        'pm', config.space, config.poles, config.lam, mu=config.mu,
        region=radius, resolution=(int(round(n_r * radius / config.region)), n_t),
        potential=config.potential, weight=config.weight,
        f=config.f, F=config.F, fprime=config.fprime,
    )
    system = bigger.system
    old = result.field
    values = np.empty(system.grid.shape)
    for j in range(n_t):
        values[:, j] = np.interp(system.grid.r, old.grid.r, old.values[:, j], right=0.0)
    u, _, _ = _minimize(system, system.to_vector(ScalarField(system.grid, values)), tol)
    energy = system.energy(u)
    change = abs(energy - result.energy) / max(abs(result.energy), 1e-300)
    if change > 0.01:
        logger.warning(f'truncation sensitivity {change:.2%} between R={config.region} and R={radius}')
    return change


def nehari_projection(config, field):
    """Scale t(u) > 0 with d/dt E(t u) = 0 at t = t(u), and the scaled field."""
    _check_kind(config, 'hemisphere')
    system = config.system
    u = system.to_vector(field)
    quad = float(u @ (system.quadratic @ u))
    power = float(np.sum(system.w * np.abs(u) ** config.p))
    if not (quad > 0 and power > 0):
        raise DomainError('the field has no Nehari projection (nonpositive quadratic part or zero field)')
    t = (quad / power) ** (1.0 / (config.p - 2.0))
    return t, system.to_field(t * u)


def solve_hemisphere(config, tol=None, progress_callback=None):
    """Positive ground state of the hemisphere problem on the Nehari manifold.

    The scale-invariant quotient u^T K u / (int |u|^p)^(2/p) is minimized
    by preconditioned descent from a positive start, projected onto the
    Nehari manifold and polished by Newton on the energy gradient.
    """
    _check_kind(config, 'hemisphere')
    tol = tol or Config.SOLVER_TOL
    system = config.system
    p = config.p
    w = system.w
    u = np.asarray(c_c(config.space.c, system.r))

    def quotient(v):
        return float(v @ (system.quadratic @ v)) / float(np.sum(w * np.abs(v) ** p)) ** (2.0 / p)

    def quotient_gradient(v):
        a = float(v @ (system.quadratic @ v))
        N = float(np.sum(w * np.abs(v) ** p))
        return 2.0 * (system.quadratic @ v) / N ** (2.0 / p) - 2.0 * a * N ** (-2.0 / p - 1.0) * w * np.abs(v) ** (p - 2) * v

    def normalize(v):
        return v / float(np.sum(w * np.abs(v) ** p)) ** (1.0 / p)

    u = normalize(u)
    q = quotient(u)
    iterations = 0
    for iterations in range(1, Config.SOLVER_MAX_ITER + 1):
        g = quotient_gradient(u)
        pg = system.precondition(g)
        slope = -float(g @ pg)
        if math.sqrt(max(-slope, 0.0)) < 1e-3 * tol:
            break
        step = 1.0
        while step > 1e-12:
            trial = normalize(u - step * pg)
            q_trial = quotient(trial)
            if q_trial <= q + 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            break
        u, q = trial, q_trial
        if progress_callback and iterations % 50 == 0:
            progress_callback(iterations, Config.SOLVER_MAX_ITER)

    t, projected = nehari_projection(config, system.to_field(u))
    u, it_newton, res = _newton(system, system.to_vector(projected), tol)
    energy = system.energy(u)
    quad = float(u @ (system.quadratic @ u))
    power = float(np.sum(w * np.abs(u) ** p))
    interior = u.reshape(system.interior_shape)
    positive = bool(np.all(interior > -tol))
    converged = res < tol and energy > 0 and positive
    if not converged:
        logger.warning(f'Nehari solve not confirmed: residual={res:.2e}, energy={energy:.3e}')
    if progress_callback:
        progress_callback(Config.SOLVER_MAX_ITER, Config.SOLVER_MAX_ITER)
    logger.info(f'solve-hemisphere: energy={energy:.6e} residual={res:.2e}')
    return SolveResult(
        field=system.to_field(u),
        energy=energy,
        residual_norm=res,
        classification='nehari',
        iterations=iterations + it_newton,
        converged=converged,
        diagnostics={
            'beta': system.beta,
            'hemisphere_constant': system.constant,
            'lambda': config.lam,
            'p': p,
            'nehari_scale': t,
            'nehari_defect': (quad - power) / max(quad, 1e-300),
            'ground_level': (0.5 - 1.0 / p) * quad,
        },
    )
