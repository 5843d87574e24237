"""Per-slot randomness: demand, per-fuel availability, and wind.

Demand follows a truncated AR(1) anchored at each cell's baseline.
Availability realizes each plant's capacity times a clipped-normal factor.
Wind is a sticky Markov chain on the nine direction codes (eight compass
points plus CALM): each cell keeps its direction with the configured
stickiness, otherwise redraws uniformly.

Determinism contract: the generator is numpy's Philox (counter-based,
bit-stable across platforms), keyed by the run seed. Each step draws, in
this fixed order: demand innovations (one normal per cell), availability
innovations (one normal per plant, merit order), stickiness uniforms (one
per cell), then one uniform direction per redrawn cell. The layout is
documented in docs/determinism.md; changing it is a breaking change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_model import CALM, DIRECTIONS, Scenario, ScenarioArrays


@dataclass(frozen=True)
class EnvSample:
    t: int
    demand: np.ndarray  # per-cell demand (MWh)
    availability: np.ndarray  # (cells, fuels) available energy (MWh)
    weather: np.ndarray  # per-cell direction codes
    plant_availability: np.ndarray  # per-plant available energy, merit order


class EnvState:
    """Single-owner stream state. Mutated only by env_step; run replicas on
    independent (scenario, seed) pairs rather than sharing one state."""

    def __init__(self, arrays: ScenarioArrays, seed: int):
        self.arrays = arrays
        self.seed = int(seed)
        self.rng = np.random.Generator(np.random.Philox(key=self.seed))
        self.t = 0
        self.demand = arrays.baseline_demand.copy()
        if arrays.initial_weather is not None:
            self.weather = arrays.initial_weather.copy()
        else:
            self.weather = self.rng.integers(0, len(DIRECTIONS), size=arrays.n_cells)


def env_init(scenario: Scenario | ScenarioArrays, seed: int | None = None) -> EnvState:
    """Seeded stream state: demand at baseline, weather from the initial field
    (or a uniform draw when none is configured)."""
    arrays = ScenarioArrays.ensure(scenario)
    if seed is None:
        seed = arrays.scenario.rng_seed
    return EnvState(arrays, seed)


def env_step(state: EnvState) -> tuple[EnvState, EnvSample]:
    """Advance one slot and return the realized sample.

    The first step keeps the initial weather field (the chain's state at
    t=0); demand takes one AR(1) step away from its baseline anchor.
    """
    a = state.arrays
    rng = state.rng

    xi_demand = rng.standard_normal(a.n_cells)
    deviation = state.demand - a.baseline_demand
    demand = a.baseline_demand + a.demand_persistence * deviation + a.demand_noise * xi_demand
    np.maximum(demand, 0.0, out=demand)

    xi_avail = rng.standard_normal(a.n_plants)
    noise = a.scenario.availability_noise
    factor = np.clip(a.plant_availability_factor + noise * xi_avail, 0.0, 1.0)
    plant_avail = a.plant_capacity * factor
    availability = np.zeros((a.n_cells, a.n_fuels))
    np.add.at(availability, (a.plant_cell, a.plant_fuel), plant_avail)

    stay = rng.random(a.n_cells)
    if state.t > 0:
        redraw = stay >= a.stickiness
        if redraw.any():
            state.weather = state.weather.copy()
            state.weather[redraw] = rng.integers(0, len(DIRECTIONS), size=int(redraw.sum()))

    sample = EnvSample(
        t=state.t,
        demand=demand,
        availability=availability,
        weather=state.weather.copy(),
        plant_availability=plant_avail,
    )
    state.demand = demand
    state.t += 1
    return state, sample
