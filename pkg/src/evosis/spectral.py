"""Basic reproduction number via the periodic linearized infection flow.

R0 is the unique mu > 0 at which the period map of

    Phi_t = (d_I/rho^2) Phi_yy + (beta/mu - gamma - n*rho'/rho) Phi

has spectral radius one. The map is positivity preserving, its radius r(mu)
is strictly decreasing in mu, and the no-flux sandwich

    int min_y beta / int max_y gamma <= R0 <= int max_y beta / int min_y gamma

supplies the initial bracket. A closed form exists when beta is spatially
constant and gamma is separable c(y)/rho^2: then R0 = beta_hat divided by
the product of the principal eigenvalue of -d_I w'' + c w and the period
average of rho^-2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from .engine import LinearEquationSpec, PeriodMapOperator, TimeDirection
from .errors import ConvergenceError, NotApplicableError
from .model import EvolutionRate, Grid1D, ModelConfig, evaluate_coefficient
from .quadrature import PeriodicSamples, mean_inverse_rho_squared, periodic_integral
from .tridiag import dirichlet_operator, neumann_operator, smallest_eigenvalue

FloatArray = npt.NDArray[np.floating[Any]]

RADIUS_TOL = 1e-10
RADIUS_MAX_ITERATIONS = 200
DEFECT_TOL = 1e-8
BRACKET_EXPANSIONS = 6

LAMBDA_STAR_CONVENTIONS = ("neumann", "paper-example")

_ERR_RADIUS_STALL = (
    "power iteration did not settle within {cap} applications "
    "(last change {change:.3e}); retry with method='dense'"
)
_ERR_BRACKET = "could not bracket the unit spectral radius within {expansions} expansions of [{lo:.3g}, {hi:.3g}]"
_ERR_CONVENTION = "unknown lambda-star convention {value!r}, expected one of {known}"
_ERR_NOT_SEPARABLE = (
    "closed form needs spatially constant beta and gamma of the form c(y)/rho^2; got beta={beta!r}, gamma={gamma!r}"
)


@dataclass(frozen=True, slots=True)
class R0Result:
    """Computed reproduction number with its certificate data.

    eigenfunction holds the positive Floquet mode over one period, shape
    (M+1, N+1), sup-normalized on the initial slice.
    """

    value: float
    bracket: tuple[float, float]
    iterations: int
    defect: float
    eigenfunction: FloatArray


@dataclass(frozen=True, slots=True)
class BoundsResult:
    """No-flux sandwich bounds with their four period integrals."""

    lower: float
    upper: float
    min_beta_integral: float
    max_beta_integral: float
    min_gamma_integral: float
    max_gamma_integral: float


# ---- spectral radius of the period map ----

def _power_radius(op: PeriodMapOperator, start: FloatArray, tol: float, cap: int) -> tuple[float, FloatArray, int]:
    u = np.array(start, dtype=float)
    u /= max(float(np.max(np.abs(u))), 1e-300)
    estimate = math.inf
    for iteration in range(1, cap + 1):
        v = op.apply(u)
        radius = float(np.max(np.abs(v)))
        if radius <= 0.0 or not math.isfinite(radius):
            raise ConvergenceError(f"period map produced degenerate norm {radius!r}")
        v /= radius
        change = abs(radius - estimate)
        # The radius estimate alone can look settled while slowly decaying
        # stiff modes still pollute the iterate, so also require the
        # normalized field itself to be stationary.
        drift = float(np.max(np.abs(v - u)))
        estimate = radius
        u = v
        if change < tol * max(1.0, radius) and drift < 1e-7:
            return radius, u, iteration
    raise ConvergenceError(_ERR_RADIUS_STALL.format(cap=cap, change=change))


def _dense_radius(op: PeriodMapOperator) -> tuple[float, FloatArray]:
    matrix = op.dense_matrix()
    eigenvalues, eigenvectors = np.linalg.eig(matrix)
    lead = int(np.argmax(np.abs(eigenvalues)))
    radius = float(np.abs(eigenvalues[lead]))
    mode = np.real(eigenvectors[:, lead])
    if np.sum(mode) < 0.0:
        mode = -mode
    mode /= max(float(np.max(np.abs(mode))), 1e-300)
    return radius, mode


def _operator_radius(
    op: PeriodMapOperator,
    method: str,
    start: FloatArray | None,
    tol: float = RADIUS_TOL,
    cap: int = RADIUS_MAX_ITERATIONS,
) -> tuple[float, FloatArray]:
    if start is None:
        start = np.ones(op.grid.N + 1)
    if method == "dense":
        return _dense_radius(op)
    try:
        radius, mode, _ = _power_radius(op, start, tol, cap)
        return radius, mode
    except ConvergenceError:
        if method == "power":
            raise
        return _dense_radius(op)


def period_map_spectral_radius(
    spec: LinearEquationSpec,
    method: str = "auto",
    tol: float = RADIUS_TOL,
    max_iterations: int = RADIUS_MAX_ITERATIONS,
) -> float:
    """Spectral radius of the one-period flow of a linear equation.

    Power iteration starts from the constant-one field and stops when two
    successive sup-norm growth estimates agree within tol. method='dense'
    propagates a full basis and takes the largest eigenvalue modulus;
    'auto' falls back to dense when the power iteration stalls (clustered
    spectra at very small diffusivity).

    Raises:
        ConvergenceError: method='power' and no convergence within the cap.
    """
    op = PeriodMapOperator.from_spec(spec)
    radius, _ = _operator_radius(op, method, None, tol, max_iterations)
    return radius


def principal_periodic_eigenvalue(spec: LinearEquationSpec, method: str = "auto") -> float:
    """Principal periodic eigenvalue -ln(r)/T of u_t = (d/rho^2)u_yy + q u."""
    radius = period_map_spectral_radius(spec, method=method)
    return -math.log(radius) / spec.rho.period


# ---- linearized-infection coefficient tables ----

class _PhiTables:
    """Endpoint-averaged coefficient tables of the Phi-equation.

    Holding beta and the mu-independent rest separately lets the bisection
    rebuild the potential for each trial mu as beta_bar/mu - rest_bar
    without re-evaluating any profile.
    """

    __slots__ = ("grid", "dt", "nu_bar", "beta_bar", "rest_bar", "period")

    def __init__(self, config: ModelConfig, direction: TimeDirection = TimeDirection.FORWARD) -> None:
        grid = config.grid
        m = config.steps_per_period
        times = np.linspace(0.0, config.T, m + 1)
        if direction is TimeDirection.BACKWARD:
            times = config.T - times
        nodes = grid.nodes
        col = times[:, None]
        beta = np.broadcast_to(
            np.asarray(evaluate_coefficient(config.beta, config.rho, nodes, col), dtype=float),
            (m + 1, nodes.size)).copy()
        gamma = np.broadcast_to(
            np.asarray(evaluate_coefficient(config.gamma, config.rho, nodes, col), dtype=float),
            (m + 1, nodes.size)).copy()
        rho_t = np.asarray(config.rho.value(times), dtype=float)
        rho_dot = np.asarray(config.rho.derivative(times), dtype=float)
        rest = gamma + (config.n * rho_dot / rho_t)[:, None]
        nu = config.d_I * rho_t**-2.0
        self.grid = grid
        self.period = config.T
        self.dt = config.T / m
        self.nu_bar = 0.5 * (nu[:-1] + nu[1:])
        self.beta_bar = 0.5 * (beta[:-1] + beta[1:])
        self.rest_bar = 0.5 * (rest[:-1] + rest[1:])

    def operator(self, mu: float) -> PeriodMapOperator:
        return PeriodMapOperator.from_tables(self.grid, self.dt, self.nu_bar, self.beta_bar / mu - self.rest_bar)


def infection_period_map(config: ModelConfig, mu: float,
                         direction: TimeDirection = TimeDirection.FORWARD) -> PeriodMapOperator:
    """Period map of the Phi-equation at transmission scaling 1/mu."""
    return _PhiTables(config, direction).operator(mu)


def invasion_eigenvalue(config: ModelConfig, method: str = "auto") -> float:
    """Principal periodic eigenvalue of the unscaled infection equation.

    This is -ln r(1)/T for the potential beta - gamma - n*rho'/rho; its sign
    is opposite to the sign of R0 - 1.
    """
    op = infection_period_map(config, 1.0)
    radius, _ = _operator_radius(op, method, None)
    return -math.log(radius) / config.T


# ---- sandwich bounds ----

def r0_bounds(config: ModelConfig, panels: int = 256) -> BoundsResult:
    """No-flux comparison bounds from spatial extremes of beta and gamma.

    Extremes are taken over the grid nodes (the profiles in use are
    monotone in space, so nodal extremes are exact) at each of panels+1
    uniform time samples, then integrated over one period.
    """
    nodes = config.grid.nodes
    times = np.linspace(0.0, config.T, panels + 1)
    col = times[:, None]
    beta = np.broadcast_to(
        np.asarray(evaluate_coefficient(config.beta, config.rho, nodes, col), dtype=float),
        (times.size, nodes.size))
    gamma = np.broadcast_to(
        np.asarray(evaluate_coefficient(config.gamma, config.rho, nodes, col), dtype=float),
        (times.size, nodes.size))

    def integral(values: FloatArray) -> float:
        return periodic_integral(PeriodicSamples.from_values(values, config.T))

    min_beta = integral(np.min(beta, axis=1))
    max_beta = integral(np.max(beta, axis=1))
    min_gamma = integral(np.min(gamma, axis=1))
    max_gamma = integral(np.max(gamma, axis=1))
    return BoundsResult(
        lower=min_beta / max_gamma,
        upper=max_beta / min_gamma,
        min_beta_integral=min_beta,
        max_beta_integral=max_beta,
        min_gamma_integral=min_gamma,
        max_gamma_integral=max_gamma,
    )


# ---- R0 as the unit-radius crossing ----

def compute_r0(
    config: ModelConfig,
    defect_tol: float = DEFECT_TOL,
    method: str = "auto",
    direction: TimeDirection = TimeDirection.FORWARD,
) -> R0Result:
    """Finds R0 by driving the period-map spectral radius to one.

    The initial bracket comes from the sandwich bounds, widened by a factor
    of two on each side to absorb discretization drift, then expanded (at
    most a few doublings) until the radius actually crosses one. Root
    finding combines bisection with secant proposals in the variables
    (1/mu, ln r), where the dependence is close to affine.

    Raises:
        ConvergenceError: no bracket after the capped expansions, or the
            radius iteration fails in 'power' mode.
    """
    tables = _PhiTables(config, direction)
    bounds = r0_bounds(config)
    lo = 0.5 * bounds.lower
    hi = 2.0 * bounds.upper
    start: FloatArray | None = None
    mode_in_use = method

    def radius_at(mu: float) -> float:
        nonlocal start, mode_in_use
        op = tables.operator(mu)
        if mode_in_use == "auto":
            try:
                r, mode = _operator_radius(op, "power", start)
            except ConvergenceError:
                # once the power iteration stalls it will stall for every
                # nearby mu, so stay on the dense route for this search
                mode_in_use = "dense"
                r, mode = _dense_radius(op)
        else:
            r, mode = _operator_radius(op, mode_in_use, start)
        start = mode
        return r

    r_lo = radius_at(lo)
    for _ in range(BRACKET_EXPANSIONS):
        if r_lo >= 1.0:
            break
        lo *= 0.5
        r_lo = radius_at(lo)
    r_hi = radius_at(hi)
    for _ in range(BRACKET_EXPANSIONS):
        if r_hi <= 1.0:
            break
        hi *= 2.0
        r_hi = radius_at(hi)
    if r_lo < 1.0 or r_hi > 1.0:
        raise ConvergenceError(_ERR_BRACKET.format(expansions=BRACKET_EXPANSIONS, lo=lo, hi=hi))

    mu_lo, mu_hi = lo, hi
    f_lo, f_hi = math.log(r_lo), math.log(r_hi)
    mu = math.sqrt(mu_lo * mu_hi)
    iterations = 0
    defect = math.inf
    last_side = ""
    for iterations in range(1, 80 + 1):
        r = radius_at(mu)
        defect = abs(r - 1.0)
        if defect <= defect_tol:
            break
        f = math.log(r)
        # regula falsi in (1/mu, ln r) with Illinois damping: when the same
        # side updates twice running, the stale side's value is halved so
        # the proposals cannot stagnate against a nearly flat branch
        if f > 0.0:
            mu_lo, f_lo = mu, f
            if last_side == "lo":
                f_hi *= 0.5
            last_side = "lo"
        else:
            mu_hi, f_hi = mu, f
            if last_side == "hi":
                f_lo *= 0.5
            last_side = "hi"
        x_lo, x_hi = 1.0 / mu_lo, 1.0 / mu_hi
        denom = f_hi - f_lo
        proposal = 0.0
        if denom != 0.0:
            x_new = x_lo - f_lo * (x_hi - x_lo) / denom
            if x_hi < x_new < x_lo:
                proposal = 1.0 / x_new
        mu = proposal if proposal else math.sqrt(mu_lo * mu_hi)
    else:
        raise ConvergenceError(f"unit-radius search stalled with defect {defect:.3e}")

    final_op = tables.operator(mu)
    _, mode = _operator_radius(final_op, mode_in_use, start)
    mode = np.abs(mode)
    path = final_op.apply_recording(mode)
    path /= max(float(np.max(np.abs(path[0]))), 1e-300)
    return R0Result(
        value=mu,
        bracket=(bounds.lower, bounds.upper),
        iterations=iterations,
        defect=defect,
        eigenfunction=path,
    )


# ---- closed form for separable recovery ----

def r0_closed_form(beta_hat: float, lambda_star: float, rho: EvolutionRate, panels: int = 256) -> float:
    """R0 = beta_hat / (lambda_star * period mean of rho^-2)."""
    return beta_hat / (lambda_star * mean_inverse_rho_squared(rho, panels))


def neumann_elliptic_principal_eigenvalue(d: float, c_nodes: FloatArray, h: float, tol: float = 1e-10) -> float:
    """Principal eigenvalue of -d w'' + c(y) w with no-flux endpoints."""
    diag, off = neumann_operator(d, np.asarray(c_nodes, dtype=float), h)
    return smallest_eigenvalue(diag, off, tol)


def dirichlet_elliptic_principal_eigenvalue(d: float, c_nodes: FloatArray, h: float, tol: float = 1e-10) -> float:
    """Principal eigenvalue of -d w'' + c(y) w with absorbing endpoints.

    For constant c on (0, L) this equals c + d*(pi/L)^2, the value used by
    the worked fixed-domain comparisons.
    """
    diag, off = dirichlet_operator(d, np.asarray(c_nodes, dtype=float), h)
    return smallest_eigenvalue(diag, off, tol)


def lambda_star_from_config(config: ModelConfig, convention: str = "paper-example",
                            grid_points: int | None = None) -> float:
    """Principal elliptic eigenvalue of the separable recovery profile.

    convention selects the endpoint condition of the comparison problem:
    'neumann' matches the no-flux model; 'paper-example' uses absorbing
    endpoints, the convention behind the worked examples.
    """
    if convention not in LAMBDA_STAR_CONVENTIONS:
        raise ValueError(_ERR_CONVENTION.format(value=convention, known=LAMBDA_STAR_CONVENTIONS))
    _require_closed_form(config)
    n = grid_points if grid_points is not None else max(config.grid_points, 200)
    grid = Grid1D(L=config.L, N=n)
    assert config.gamma.space is not None
    c_nodes = np.broadcast_to(np.asarray(config.gamma.space.evaluate_z(grid.nodes), dtype=float),
                              grid.nodes.shape)
    if convention == "neumann":
        return neumann_elliptic_principal_eigenvalue(config.d_I, c_nodes, grid.h)
    return dirichlet_elliptic_principal_eigenvalue(config.d_I, c_nodes, grid.h)


def _require_closed_form(config: ModelConfig) -> None:
    gamma = config.gamma
    separable = (
        gamma.form == "separable"
        and gamma.space is not None
        and gamma.g_mean == 0.0
        and not gamma.g_harmonics
    )
    if config.beta.form != "constant" or not separable:
        raise NotApplicableError(_ERR_NOT_SEPARABLE.format(beta=config.beta.form, gamma=gamma.form))


def closed_form_r0(config: ModelConfig, convention: str = "paper-example",
                   grid_points: int | None = None, panels: int = 256) -> float:
    """Closed-form R0 for spatially constant beta and separable gamma.

    Raises:
        NotApplicableError: the coefficient shapes do not admit the form.
    """
    _require_closed_form(config)
    lam = lambda_star_from_config(config, convention, grid_points)
    return r0_closed_form(config.beta.c0, lam, config.rho, panels)


# ---- eigenfunction monotonicity certificate ----

def eigenfunction_monotonicity_certificate(config: ModelConfig, result: R0Result) -> str:
    """Checks the spatial monotonicity the comparison theory predicts.

    Returns 'increasing' or 'decreasing' when every interior nodal
    difference of every time slice has the predicted strict sign,
    'violated' when some difference breaks it, and 'not-applicable' when
    the coefficient slopes do not satisfy either sign condition (recovery
    strictly decreasing with transmission nondecreasing, or the mirrored
    pair).
    """
    s_beta = config.beta.z_derivative_sign()
    s_gamma = config.gamma.z_derivative_sign()
    if s_gamma < 0 and s_beta >= 0:
        expected = 1.0
        verdict = "increasing"
    elif s_gamma > 0 and s_beta <= 0:
        expected = -1.0
        verdict = "decreasing"
    else:
        return "not-applicable"
    differences = expected * np.diff(result.eigenfunction, axis=1)
    return verdict if bool(np.all(differences > 0.0)) else "violated"
