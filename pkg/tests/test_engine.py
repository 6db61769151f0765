"""Linear period maps, the coupled stepper, and whole-period simulation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from evosis import (
    CoefficientProfile,
    CoupledStepper,
    EvolutionRate,
    Grid1D,
    InitialSpec,
    LinearEquationSpec,
    ModelConfig,
    PeriodMapOperator,
    StepError,
    TimeDirection,
    advance_one_period,
    load_preset,
    push_forward,
    simulate,
    step_coupled_sis,
    step_linear,
)
from evosis.engine import apply_laplacian, laplacian_bands, trapezoid_weights

UNIT_PERIOD = EvolutionRate(kind="constant-one", period=1.0)


def _constant(c0: float) -> CoefficientProfile:
    return CoefficientProfile(form="constant", c0=c0)


def _homogeneous_config(beta: float = 3.0, gamma: float = 1.0, **overrides) -> ModelConfig:
    base = dict(
        d_S=0.05,
        d_I=0.1,
        L=1.0,
        T=1.0,
        rho=UNIT_PERIOD,
        a=_constant(1.0),
        b=_constant(2.0),
        beta=_constant(beta),
        gamma=_constant(gamma),
        initial_S=InitialSpec(mean=0.4),
        initial_I=InitialSpec(mean=0.2),
        grid_points=16,
        steps_per_period=64,
    )
    base.update(overrides)
    return ModelConfig(**base)


def _dense_laplacian(grid: Grid1D) -> np.ndarray:
    columns = [apply_laplacian(grid, basis) for basis in np.eye(grid.N + 1)]
    return np.column_stack(columns)


# ---- discrete Laplacian ----

def test_laplacian_bands_ghost_rows():
    grid = Grid1D(L=1.0, N=4)
    sub, diag, sup = laplacian_bands(grid)
    inv_h2 = 16.0
    assert np.allclose(diag, -2.0 * inv_h2)
    assert sup[0] == pytest.approx(2.0 * inv_h2)
    assert sub[-1] == pytest.approx(2.0 * inv_h2)
    assert np.allclose(sup[1:], inv_h2)
    assert np.allclose(sub[:-1], inv_h2)


def test_laplacian_conserves_trapezoid_mass():
    grid = Grid1D(L=1.5, N=12)
    weights = trapezoid_weights(grid)
    dense = _dense_laplacian(grid)
    assert np.max(np.abs(weights @ dense)) < 1e-11


def test_laplacian_has_exact_cosine_eigenvector():
    grid = Grid1D(L=1.0, N=32)
    mode = np.cos(math.pi * grid.nodes / grid.L)
    eigenvalue = -(2.0 / grid.h**2) * (1.0 - math.cos(math.pi * grid.h / grid.L))
    assert np.max(np.abs(apply_laplacian(grid, mode) - eigenvalue * mode)) < 1e-9


def test_trapezoid_weights_sum_to_length():
    grid = Grid1D(L=2.5, N=10)
    assert trapezoid_weights(grid).sum() == pytest.approx(2.5, abs=1e-14)


# ---- linear stepping ----

def _linear_spec(potential, d: float = 0.1, n_points: int = 16, steps: int = 64,
                 rho: EvolutionRate = UNIT_PERIOD,
                 direction: TimeDirection = TimeDirection.FORWARD) -> LinearEquationSpec:
    return LinearEquationSpec(d=d, rho=rho, potential=potential,
                              grid=Grid1D(L=1.0, N=n_points), steps_per_period=steps,
                              direction=direction)


def test_step_linear_constant_potential_is_exact_on_constants():
    q = 0.7
    spec = _linear_spec(lambda y, t: q)
    u = np.full(17, 2.0)
    stepped = step_linear(spec, u, 0)
    factor = (1.0 + 0.5 * q * spec.dt) / (1.0 - 0.5 * q * spec.dt)
    assert np.max(np.abs(stepped - 2.0 * factor)) < 1e-13


def test_period_map_constant_potential_growth_factor():
    q = 0.7
    steps = 64
    spec = _linear_spec(lambda y, t: q, steps=steps)
    out = advance_one_period(spec, np.ones(17))
    factor = ((1.0 + 0.5 * q * spec.dt) / (1.0 - 0.5 * q * spec.dt)) ** steps
    assert np.max(np.abs(out - factor)) < 1e-11
    assert factor == pytest.approx(math.exp(q), rel=1e-4)


def test_period_map_decays_cosine_mode_at_discrete_rate():
    d, steps = 0.1, 128
    spec = _linear_spec(lambda y, t: 0.0, d=d, n_points=32, steps=steps)
    grid = spec.grid
    mode = np.cos(math.pi * grid.nodes / grid.L)
    eigenvalue = (2.0 / grid.h**2) * (1.0 - math.cos(math.pi * grid.h / grid.L))
    factor = ((1.0 - 0.5 * d * spec.dt * eigenvalue)
              / (1.0 + 0.5 * d * spec.dt * eigenvalue)) ** steps
    out = advance_one_period(spec, mode)
    assert np.max(np.abs(out - factor * mode)) < 1e-10
    assert factor == pytest.approx(math.exp(-d * math.pi**2), rel=1e-3)


def test_pure_diffusion_conserves_mass_on_evolving_domain():
    rho = EvolutionRate(kind="exp-cosine", period=1.0, amplitude=0.3,
                        frequency=2.0 * math.pi)
    spec = _linear_spec(lambda y, t: 0.0, d=0.4, n_points=24, steps=200, rho=rho)
    weights = trapezoid_weights(spec.grid)
    u = 1.0 + 0.5 * np.cos(math.pi * spec.grid.nodes)
    out = advance_one_period(spec, u)
    assert weights @ out == pytest.approx(weights @ u, rel=1e-12)


def test_backward_direction_reverses_sample_times():
    spec = _linear_spec(lambda y, t: 0.0, direction=TimeDirection.BACKWARD)
    times = spec.times()
    assert times[0] == pytest.approx(1.0)
    assert times[-1] == pytest.approx(0.0)


def test_period_map_operator_matches_step_linear_loop():
    def potential(y, t):
        return (1.0 + 0.5 * y) * math.sin(2.0 * math.pi * t)

    spec = _linear_spec(potential, n_points=16, steps=50)
    u = 1.0 + 0.1 * np.cos(math.pi * spec.grid.nodes)
    looped = u.copy()
    for k in range(spec.steps_per_period):
        looped = step_linear(spec, looped, k)
    op = PeriodMapOperator.from_spec(spec)
    assert np.max(np.abs(op.apply(u) - looped)) < 1e-12


def test_period_map_recording_and_dense_matrix_agree_with_apply():
    spec = _linear_spec(lambda y, t: 0.5 * y, n_points=10, steps=40)
    op = PeriodMapOperator.from_spec(spec)
    u = 1.0 + 0.2 * np.cos(math.pi * spec.grid.nodes)
    path = op.apply_recording(u)
    assert path.shape == (41, 11)
    assert np.array_equal(path[0], u)
    assert np.max(np.abs(path[-1] - op.apply(u))) < 1e-13
    dense = op.dense_matrix()
    assert np.max(np.abs(dense @ u - op.apply(u))) < 1e-11


def test_push_forward_scales_nodes_only():
    rho = EvolutionRate(kind="exp-cosine", period=math.pi / 2, amplitude=0.3, frequency=4.0)
    grid = Grid1D(L=1.0, N=4)
    u = np.arange(5.0)
    x, values = push_forward(grid, rho, math.pi / 8, u)
    assert np.allclose(x, float(rho.value(math.pi / 8)) * grid.nodes)
    assert np.array_equal(values, u)


# ---- coupled stepper ----

def test_reaction_keeps_disease_free_state_invariant():
    stepper = CoupledStepper(_homogeneous_config())
    S = np.full(17, 0.3)
    I = np.zeros(17)
    r_s, r_i = stepper.reaction(S, I, 0)
    assert np.array_equal(r_i, np.zeros(17))
    assert np.allclose(r_s, 1.0 * 0.3 - 2.0 * 0.09)


def test_reaction_guards_vanishing_population():
    stepper = CoupledStepper(_homogeneous_config())
    S = np.zeros(17)
    I = np.zeros(17)
    r_s, r_i = stepper.reaction(S, I, 0)
    assert np.all(np.isfinite(r_s))
    assert np.all(np.isfinite(r_i))


def test_coupled_step_fixes_logistic_equilibrium_exactly():
    config = _homogeneous_config()
    stepper = CoupledStepper(config)
    S = np.full(17, 0.5)  # a/b for a=1, b=2
    I = np.zeros(17)
    s_next, i_next = stepper.step(S, I, 0)
    assert np.max(np.abs(s_next - 0.5)) < 1e-13
    assert np.array_equal(i_next, np.zeros(17))
    assert stepper.clamp_count == 0


def test_coupled_step_raises_on_nonfinite_state():
    stepper = CoupledStepper(_homogeneous_config())
    with np.errstate(invalid="ignore"), pytest.raises(StepError):
        stepper.step(np.full(17, np.inf), np.zeros(17), 0)


def test_step_coupled_sis_builds_stepper_when_missing():
    config = _homogeneous_config()
    S = np.full(17, 0.4)
    I = np.full(17, 0.2)
    s_once, i_once, clamps = step_coupled_sis(config, S, I, 0)
    assert clamps == 0
    stepper = CoupledStepper(config)
    s_again, i_again, _ = step_coupled_sis(config, S, I, 0, stepper=stepper)
    assert np.max(np.abs(s_once - s_again)) < 1e-14
    assert np.max(np.abs(i_once - i_again)) < 1e-14


def test_homogeneous_system_settles_at_endemic_equilibrium():
    # spatially flat constants: S* = a/b and I* = S*(beta/gamma - 1)
    summary = simulate(_homogeneous_config(), periods=80)
    assert np.max(np.abs(summary.final_S - 0.5)) < 1e-6
    assert np.max(np.abs(summary.final_I - 1.0)) < 1e-6
    assert summary.clamp_count == 0


# ---- whole-period simulation ----

def test_simulate_records_per_period_diagnostics():
    summary = simulate(_homogeneous_config(), periods=5, record_last_period=True)
    assert [record.index for record in summary.records] == [1, 2, 3, 4, 5]
    assert all(record.sup_I > 0.0 for record in summary.records)
    assert all(record.l1_I > 0.0 for record in summary.records)
    times, s_path, i_path = summary.last_period
    assert times.size == 65
    assert s_path.shape == (65, 17)
    assert i_path.shape == (65, 17)
    assert np.max(np.abs(s_path[-1] - summary.final_S)) < 1e-15


def test_simulate_closure_defect_shrinks_as_orbit_settles():
    summary = simulate(load_preset("example2-fixed").with_resolution(48, 200), periods=12)
    defects = [record.s_closure_defect for record in summary.records]
    assert defects[-1] < 0.1 * defects[1]


def test_simulate_stops_early_below_extinction_level():
    config = load_preset("example4-a").with_resolution(48, 256)
    summary = simulate(config, periods=60, stop_below=1e-8)
    assert len(summary.records) < 30
    assert summary.records[-1].sup_I < 1e-8
    assert summary.clamp_count == 0
