"""Time stepping on the fixed domain: linear flows and the coupled system.

All operators discretize diffusion with the ghost-node (no-flux) Laplacian

    A u | interior  = (u[j-1] - 2 u[j] + u[j+1]) / h^2
    A u | ends      = (2 u[1] - 2 u[0]) / h^2,  (2 u[N-1] - 2 u[N]) / h^2

whose trapezoid-weighted column sums vanish exactly, so pure diffusion
conserves the trapezoid mass to rounding. Linear steps are Crank-Nicolson
in both diffusion and reaction with coefficients averaged over the step
endpoints; one tridiagonal solve per step.

The coupled susceptible/infected step treats diffusion implicitly and the
reaction explicitly in a predictor (backward Euler diffusion, which stays
stable for stiff modes where fully explicit diffusion would not) and then
a trapezoidal corrector, giving second order in time.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
import numpy.typing as npt
from scipy.linalg import get_lapack_funcs

from .errors import StepError
from .model import EvolutionRate, Grid1D, ModelConfig, evaluate_coefficient

FloatArray = npt.NDArray[np.floating[Any]]
PotentialFn = Callable[[FloatArray, float], Any]

DENOMINATOR_GUARD = 1e-12

_ERR_NONFINITE_STEP = "non-finite state after step {index} (t = {t:.6g})"
_ERR_FACTOR = "tridiagonal factorization failed at step {index} (info = {info})"

_gttrf, _gttrs = get_lapack_funcs(("gttrf", "gttrs"), (np.empty(0, dtype=np.float64),))


class TimeDirection(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True, slots=True)
class LinearEquationSpec:
    """One scalar linear equation u_t = (d/rho^2) u_yy + q(y, t) u.

    ``potential`` is the growth coefficient q, vectorized over the node
    array. The backward direction runs the same equation with coefficients
    sampled at reversed time T - t, which shares its period-map spectrum
    with the forward flow.
    """

    d: float
    rho: EvolutionRate
    potential: PotentialFn
    grid: Grid1D
    steps_per_period: int
    direction: TimeDirection = TimeDirection.FORWARD

    @property
    def dt(self) -> float:
        return self.rho.period / self.steps_per_period

    def times(self) -> FloatArray:
        """Coefficient sample times t_0..t_M in traversal order."""
        forward = np.linspace(0.0, self.rho.period, self.steps_per_period + 1)
        if self.direction is TimeDirection.BACKWARD:
            return self.rho.period - forward
        return forward


# ---- banded helpers ----

def laplacian_bands(grid: Grid1D) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Sub/main/super diagonals of the ghost-node Laplacian.

    Returns (sub, diag, sup) with sub of length N (entries A[i+1, i]) and
    sup of length N (entries A[i, i+1]).
    """
    inv_h2 = 1.0 / grid.h**2
    sub = np.full(grid.N, inv_h2)
    sub[-1] = 2.0 * inv_h2
    diag = np.full(grid.N + 1, -2.0 * inv_h2)
    sup = np.full(grid.N, inv_h2)
    sup[0] = 2.0 * inv_h2
    return sub, diag, sup


def apply_laplacian(grid: Grid1D, u: FloatArray) -> FloatArray:
    sub, diag, sup = laplacian_bands(grid)
    out = diag * u
    out[:-1] += sup * u[1:]
    out[1:] += sub * u[:-1]
    return out


def _banded_apply(sub: FloatArray, diag: FloatArray, sup: FloatArray, u: FloatArray) -> FloatArray:
    """Tridiagonal matvec; u may carry trailing right-hand-side columns."""
    if u.ndim == 1:
        out = diag * u
        out[:-1] += sup * u[1:]
        out[1:] += sub * u[:-1]
    else:
        out = diag[:, None] * u
        out[:-1] += sup[:, None] * u[1:]
        out[1:] += sub[:, None] * u[:-1]
    return out


class _FactorSet:
    """LU factors of per-step tridiagonal systems (I - theta*(nu*A + diag q)).

    Bands are assembled for all steps at once; factorization is one LAPACK
    call per step, reused for every subsequent solve at that step.
    """

    __slots__ = ("dl", "d", "du", "du2", "ipiv")

    def __init__(self, grid: Grid1D, nu: FloatArray, q: FloatArray | None, theta_dt: float) -> None:
        sub, diag, sup = laplacian_bands(grid)
        m = nu.shape[0]
        n = grid.N + 1
        dl = -theta_dt * nu[:, None] * sub[None, :]
        du = -theta_dt * nu[:, None] * sup[None, :]
        d = 1.0 - theta_dt * nu[:, None] * diag[None, :]
        if q is not None:
            d = d - theta_dt * q
        self.dl = np.empty_like(dl)
        self.d = np.empty_like(d)
        self.du = np.empty_like(du)
        self.du2 = np.empty((m, n - 2))
        self.ipiv = np.empty((m, n), dtype=np.int32)
        for k in range(m):
            dl_f, d_f, du_f, du2, ipiv, info = _gttrf(dl[k], d[k], du[k])
            if info != 0:
                raise StepError(_ERR_FACTOR.format(index=k, info=info))
            self.dl[k], self.d[k], self.du[k] = dl_f, d_f, du_f
            self.du2[k], self.ipiv[k] = du2, ipiv

    def solve(self, k: int, rhs: FloatArray) -> FloatArray:
        x, info = _gttrs(self.dl[k], self.d[k], self.du[k], self.du2[k], self.ipiv[k], rhs)
        if info != 0:
            raise StepError(_ERR_FACTOR.format(index=k, info=info))
        return x


# ---- linear period map ----

class PeriodMapOperator:
    """Action of the linear flow over one full period, with cached factors.

    Construct either from a LinearEquationSpec or directly from per-step
    coefficient tables (endpoint-averaged potential q_bar of shape (M, N+1)
    and averaged diffusion scale nu_bar of shape (M,)).
    """

    def __init__(self, grid: Grid1D, dt: float, nu_bar: FloatArray, q_bar: FloatArray) -> None:
        self.grid = grid
        self.dt = dt
        self.n_steps = nu_bar.shape[0]
        sub, diag, sup = laplacian_bands(grid)
        half = 0.5 * dt
        self._rhs_sub = half * nu_bar[:, None] * sub[None, :]
        self._rhs_sup = half * nu_bar[:, None] * sup[None, :]
        self._rhs_diag = 1.0 + half * (nu_bar[:, None] * diag[None, :] + q_bar)
        self._factors = _FactorSet(grid, nu_bar, q_bar, half)

    @classmethod
    def from_tables(cls, grid: Grid1D, dt: float, nu_bar: FloatArray, q_bar: FloatArray) -> "PeriodMapOperator":
        return cls(grid, dt, np.asarray(nu_bar, dtype=float), np.asarray(q_bar, dtype=float))

    @classmethod
    def from_spec(cls, spec: LinearEquationSpec) -> "PeriodMapOperator":
        times = spec.times()
        nodes = spec.grid.nodes
        inv_rho2 = np.asarray(spec.rho.value(times), dtype=float) ** -2.0
        nu = spec.d * inv_rho2
        nu_bar = 0.5 * (nu[:-1] + nu[1:])
        q_nodes = np.empty((times.size, nodes.size))
        for k, t in enumerate(times):
            q_nodes[k] = np.broadcast_to(np.asarray(spec.potential(nodes, float(t)), dtype=float), nodes.shape)
        q_bar = 0.5 * (q_nodes[:-1] + q_nodes[1:])
        return cls(spec.grid, spec.dt, nu_bar, q_bar)

    def step(self, k: int, u: FloatArray) -> FloatArray:
        if u.ndim == 1:
            rhs = self._rhs_diag[k] * u
            rhs[:-1] += self._rhs_sup[k] * u[1:]
            rhs[1:] += self._rhs_sub[k] * u[:-1]
        else:
            rhs = self._rhs_diag[k][:, None] * u
            rhs[:-1] += self._rhs_sup[k][:, None] * u[1:]
            rhs[1:] += self._rhs_sub[k][:, None] * u[:-1]
        return self._factors.solve(k, rhs)

    def apply(self, u: FloatArray) -> FloatArray:
        """Maps u(., 0) to u(., T); accepts a matrix of stacked columns."""
        out = np.array(u, dtype=float)
        for k in range(self.n_steps):
            out = self.step(k, out)
        return out

    def apply_recording(self, u: FloatArray) -> FloatArray:
        """Like apply, returning all M+1 time slices as shape (M+1, N+1)."""
        path = np.empty((self.n_steps + 1, u.shape[0]))
        path[0] = u
        for k in range(self.n_steps):
            path[k + 1] = self.step(k, path[k])
        return path

    def dense_matrix(self) -> FloatArray:
        """Full period-map matrix, columns obtained by propagating a basis."""
        return self.apply(np.eye(self.grid.N + 1))


def step_linear(spec: LinearEquationSpec, u: FloatArray, step_index: int) -> FloatArray:
    """Advances one Crank-Nicolson step from t_k to t_{k+1}.

    Diffusion scale and potential are averaged over the two step endpoints,
    which keeps the scheme exact for potentials constant in time and second
    order otherwise.
    """
    from scipy.linalg import solve_banded

    times = spec.times()
    t0, t1 = float(times[step_index]), float(times[step_index + 1])
    nodes = spec.grid.nodes
    nu0 = spec.d / float(spec.rho.value(t0)) ** 2
    nu1 = spec.d / float(spec.rho.value(t1)) ** 2
    nu_bar = 0.5 * (nu0 + nu1)
    q0 = np.broadcast_to(np.asarray(spec.potential(nodes, t0), dtype=float), nodes.shape)
    q1 = np.broadcast_to(np.asarray(spec.potential(nodes, t1), dtype=float), nodes.shape)
    q_bar = 0.5 * (q0 + q1)
    sub, diag, sup = laplacian_bands(spec.grid)
    half = 0.5 * spec.dt
    rhs = (1.0 + half * (nu_bar * diag + q_bar)) * u
    rhs[:-1] += half * nu_bar * sup * u[1:]
    rhs[1:] += half * nu_bar * sub * u[:-1]
    n = spec.grid.N + 1
    ab = np.zeros((3, n))
    ab[0, 1:] = -half * nu_bar * sup
    ab[1] = 1.0 - half * (nu_bar * diag + q_bar)
    ab[2, :-1] = -half * nu_bar * sub
    out = solve_banded((1, 1), ab, rhs)
    if not np.all(np.isfinite(out)):
        raise StepError(_ERR_NONFINITE_STEP.format(index=step_index, t=t1))
    return out


def advance_one_period(spec: LinearEquationSpec, u: FloatArray, record: bool = False) -> Any:
    """Applies the full period map to u.

    With record=True also returns the (M+1, N+1) trajectory. Repeated
    applications should construct a PeriodMapOperator once instead.
    """
    op = PeriodMapOperator.from_spec(spec)
    if record:
        path = op.apply_recording(np.asarray(u, dtype=float))
        return path[-1], path
    return op.apply(np.asarray(u, dtype=float))


def push_forward(grid: Grid1D, rho: EvolutionRate, t: float, u: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Maps nodal values to the physical evolving domain at time t.

    The change of variables x = rho(t) * y relocates the nodes and leaves
    values untouched.
    """
    return float(rho.value(t)) * grid.nodes, np.asarray(u, dtype=float)


# ---- coupled susceptible/infected stepper ----

@dataclass(slots=True)
class PeriodRecord:
    """Per-period diagnostics of a long simulation."""

    index: int
    sup_I: float
    l1_I: float
    s_closure_defect: float


@dataclass(slots=True)
class SimulationSummary:
    records: list[PeriodRecord]
    final_S: FloatArray
    final_I: FloatArray
    clamp_count: int
    last_period: tuple[FloatArray, FloatArray, FloatArray] | None = None
    """Optional (times, S, I) samples of the final simulated period."""


class CoupledStepper:
    """Precomputed one-period stepper for the full nonlinear system.

    Reaction terms at the nodes:

        R_S = a S - b S^2 - beta S I / (S + I) + gamma I - dil * S
        R_I = beta S I / (S + I) - gamma I - dil * I

    with dil = n * rho'(t)/rho(t) and the incidence ratio forced to zero
    wherever S + I falls below a small denominator guard. Coefficients are
    periodic, so all tables and factors are built once and reused every
    period.
    """

    def __init__(self, config: ModelConfig) -> None:
        self.config = config
        grid = config.grid
        self.grid = grid
        m = config.steps_per_period
        self.n_steps = m
        self.dt = config.T / m
        times = np.linspace(0.0, config.T, m + 1)
        self.times = times
        nodes = grid.nodes
        col = times[:, None]
        self.a = np.asarray(evaluate_coefficient(config.a, config.rho, nodes, col), dtype=float)
        self.b = np.asarray(evaluate_coefficient(config.b, config.rho, nodes, col), dtype=float)
        self.beta = np.asarray(evaluate_coefficient(config.beta, config.rho, nodes, col), dtype=float)
        self.gamma = np.asarray(evaluate_coefficient(config.gamma, config.rho, nodes, col), dtype=float)
        for name in ("a", "b", "beta", "gamma"):
            table = getattr(self, name)
            if table.shape != (m + 1, nodes.size):
                setattr(self, name, np.broadcast_to(table, (m + 1, nodes.size)).copy())
        rho_t = np.asarray(config.rho.value(times), dtype=float)
        rho_dot = np.asarray(config.rho.derivative(times), dtype=float)
        self.dil = config.n * rho_dot / rho_t
        inv_rho2 = rho_t**-2.0
        nu_S = config.d_S * inv_rho2
        nu_I = config.d_I * inv_rho2
        nu_S_bar = 0.5 * (nu_S[:-1] + nu_S[1:])
        nu_I_bar = 0.5 * (nu_I[:-1] + nu_I[1:])
        # predictor: backward Euler in diffusion; corrector: trapezoidal
        self._pred_S = _FactorSet(grid, nu_S_bar, None, self.dt)
        self._pred_I = _FactorSet(grid, nu_I_bar, None, self.dt)
        self._corr_S = _FactorSet(grid, nu_S_bar, None, 0.5 * self.dt)
        self._corr_I = _FactorSet(grid, nu_I_bar, None, 0.5 * self.dt)
        sub, diag, sup = laplacian_bands(grid)
        half = 0.5 * self.dt
        self._rhs_S = (half * nu_S_bar[:, None] * sub[None, :], half * nu_S_bar[:, None] * diag[None, :],
                       half * nu_S_bar[:, None] * sup[None, :])
        self._rhs_I = (half * nu_I_bar[:, None] * sub[None, :], half * nu_I_bar[:, None] * diag[None, :],
                       half * nu_I_bar[:, None] * sup[None, :])
        self.clamp_count = 0

    def reaction(self, S: FloatArray, I: FloatArray, k: int) -> tuple[FloatArray, FloatArray]:
        total = S + I
        incidence = np.zeros_like(S)
        np.divide(self.beta[k] * S * I, total, out=incidence, where=total >= DENOMINATOR_GUARD)
        recovery = self.gamma[k] * I
        r_s = self.a[k] * S - self.b[k] * S * S - incidence + recovery - self.dil[k] * S
        r_i = incidence - recovery - self.dil[k] * I
        return r_s, r_i

    def _half_diffusion(self, bands: tuple[FloatArray, FloatArray, FloatArray], k: int, u: FloatArray) -> FloatArray:
        sub, diag, sup = bands
        out = diag[k] * u
        out[:-1] += sup[k] * u[1:]
        out[1:] += sub[k] * u[:-1]
        return out

    def step(self, S: FloatArray, I: FloatArray, k: int) -> tuple[FloatArray, FloatArray]:
        """One IMEX step from t_k to t_{k+1}, clamping tiny negatives."""
        rs0, ri0 = self.reaction(S, I, k)
        s_star = self._pred_S.solve(k, S + self.dt * rs0)
        i_star = self._pred_I.solve(k, I + self.dt * ri0)
        rs1, ri1 = self.reaction(s_star, i_star, k + 1)
        half = 0.5 * self.dt
        rhs_s = S + self._half_diffusion(self._rhs_S, k, S) + half * (rs0 + rs1)
        rhs_i = I + self._half_diffusion(self._rhs_I, k, I) + half * (ri0 + ri1)
        s_next = self._corr_S.solve(k, rhs_s)
        i_next = self._corr_I.solve(k, rhs_i)
        if not (np.all(np.isfinite(s_next)) and np.all(np.isfinite(i_next))):
            raise StepError(_ERR_NONFINITE_STEP.format(index=k, t=self.times[k + 1]))
        negatives = int(np.count_nonzero(s_next < 0.0)) + int(np.count_nonzero(i_next < 0.0))
        if negatives:
            self.clamp_count += negatives
            np.maximum(s_next, 0.0, out=s_next)
            np.maximum(i_next, 0.0, out=i_next)
        return s_next, i_next


def step_coupled_sis(config: ModelConfig, S: FloatArray, I: FloatArray, step_index: int,
                     stepper: CoupledStepper | None = None) -> tuple[FloatArray, FloatArray, int]:
    """Single coupled step; returns the new fields and the clamp count.

    Building the stepper is the expensive part, so loops should construct
    one CoupledStepper and pass it in.
    """
    if stepper is None:
        stepper = CoupledStepper(config)
    before = stepper.clamp_count
    s_next, i_next = stepper.step(np.asarray(S, dtype=float), np.asarray(I, dtype=float), step_index)
    return s_next, i_next, stepper.clamp_count - before


def trapezoid_weights(grid: Grid1D) -> FloatArray:
    w = np.full(grid.N + 1, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    return w


def simulate(config: ModelConfig, periods: int, record_last_period: bool = False,
             stop_below: float | None = None) -> SimulationSummary:
    """Runs the coupled system for a whole number of periods.

    Per period the summary records the sup and L1 norms of the infected
    density at the period end and the relative change of the susceptible
    field across the period, which measures approach to a periodic orbit.
    stop_below ends the run early once the infected sup norm falls under
    the given level (the field only keeps shrinking from there).
    """
    stepper = CoupledStepper(config)
    grid = config.grid
    weights = trapezoid_weights(grid)
    S = config.initial_S.evaluate(grid.nodes, config.L)
    I = config.initial_I.evaluate(grid.nodes, config.L)
    records: list[PeriodRecord] = []
    last: tuple[FloatArray, FloatArray, FloatArray] | None = None
    for m in range(periods):
        recording = record_last_period and m == periods - 1
        if recording:
            s_path = np.empty((stepper.n_steps + 1, grid.N + 1))
            i_path = np.empty_like(s_path)
            s_path[0], i_path[0] = S, I
        s_start = S.copy()
        for k in range(stepper.n_steps):
            S, I = stepper.step(S, I, k)
            if recording:
                s_path[k + 1], i_path[k + 1] = S, I
        scale = max(float(np.max(np.abs(S))), 1e-300)
        records.append(PeriodRecord(
            index=m + 1,
            sup_I=float(np.max(np.abs(I))),
            l1_I=float(weights @ np.abs(I)),
            s_closure_defect=float(np.max(np.abs(S - s_start))) / scale,
        ))
        if recording:
            last = (stepper.times, s_path, i_path)
        if stop_below is not None and records[-1].sup_I < stop_below:
            break
    return SimulationSummary(records=records, final_S=S, final_I=I,
                             clamp_count=stepper.clamp_count, last_period=last)
