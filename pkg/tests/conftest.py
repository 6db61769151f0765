"""Shared fixtures: coarse preset reproduction numbers and designed configs."""

from __future__ import annotations

import math

import pytest

from evosis import (
    CoefficientProfile,
    EvolutionRate,
    InitialSpec,
    ModelConfig,
    compute_r0,
    load_preset,
    preset_names,
    validate_config,
)

# Coarse resolution shared by the cross-preset checks; at this level every
# preset's reproduction number already agrees with its converged value to
# a few parts in 1e6.
COARSE_GRID = 48
COARSE_STEPS = 256


def _constant(c0: float) -> CoefficientProfile:
    return CoefficientProfile(form="constant", c0=c0)


def _exponential(c0: float, c1: float, c2: float) -> CoefficientProfile:
    return CoefficientProfile(form="exponential", c0=c0, c1=c1, c2=c2)


def _designed_config(mirrored: bool, grid_points: int, steps_per_period: int) -> ModelConfig:
    """Smooth heterogeneous configuration with strictly monotone profiles.

    The standard orientation has transmission increasing and recovery
    strictly decreasing along the material coordinate, so the reproduction
    number rises with the domain length; the mirrored orientation swaps the
    two shapes and reverses that direction. Both orientations keep every
    rate positive over the whole evolving range.
    """
    beta = _exponential(0.2, 0.2, -0.5) if mirrored else _exponential(0.4, -0.15, -0.5)
    gamma = _exponential(0.4, -0.15, -0.5) if mirrored else _exponential(0.2, 0.2, -0.5)
    return validate_config(ModelConfig(
        d_S=0.05,
        d_I=0.1,
        L=1.0,
        T=math.pi,
        rho=EvolutionRate(kind="exp-cosine", period=math.pi, amplitude=0.2, frequency=2.0),
        a=_constant(1.0),
        b=_constant(2.0),
        beta=beta,
        gamma=gamma,
        initial_S=InitialSpec(mean=0.25, modes=((1, 0.01),)),
        initial_I=InitialSpec(mean=0.05, modes=((1, 0.005),)),
        grid_points=grid_points,
        steps_per_period=steps_per_period,
    ))


@pytest.fixture(scope="session")
def designed_config():
    """Factory building the designed monotone configuration."""

    def build(mirrored: bool = False, grid_points: int = 64,
              steps_per_period: int = 256) -> ModelConfig:
        return _designed_config(mirrored, grid_points, steps_per_period)

    return build


@pytest.fixture(scope="session")
def preset_r0() -> dict[str, float]:
    """Reproduction number of every bundled preset at the coarse resolution."""
    values: dict[str, float] = {}
    for name in preset_names():
        config = load_preset(name).with_resolution(COARSE_GRID, COARSE_STEPS)
        values[name] = compute_r0(config).value
    return values
