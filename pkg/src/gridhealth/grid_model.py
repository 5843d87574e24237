"""Domain types, validation, and scenario assembly for the grid-world system model.

A scenario is a rectangular grid of subregions. Each cell may hold power
plants (each burning one fuel type), a population exposed to airborne
pollutants, and an energy demand process. Fuel types carry two independent
emission factors: CO2 (climate) and HAP (hazardous air pollutants, the
health channel). The two are deliberately not forced to be proportional.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

MIX_SUM_ATOL = 1e-9

# Wind direction codes. Offsets are (row, col) with row 0 at the top, so
# "N" moves toward smaller row indices.
DIRECTIONS = ("N", "NE", "E", "SE", "S", "SW", "W", "NW", "CALM")
CALM = 8
DIRECTION_OFFSETS = (
    (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1),
)

ROUTING_MODES = ("local", "pooled")
HEALTH_FORMS = ("linear", "loglinear")


class InvalidMix(ValueError):
    """Raised when a fuel-mix vector leaves the unit simplex."""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class ScenarioError(ValueError):
    """Validation failure carrying every violated invariant, not just the first."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class FuelType:
    id: int
    name: str
    co2_factor: float  # t CO2 per MWh
    hap_factor: float  # kg HAP per MWh


@dataclass(frozen=True)
class PlantSpec:
    plant_id: int
    fuel: int
    capacity: float  # MWh per slot
    availability_factor: float  # mean fraction of capacity available, in [0, 1]


@dataclass(frozen=True)
class DemandVolatility:
    persistence: float = 0.0  # AR(1) coefficient, in [0, 1)
    noise: float = 0.0  # innovation std dev, >= 0


@dataclass(frozen=True)
class Subregion:
    id: int
    coords: tuple[int, int]  # (row, col)
    population: float
    health_slope: float  # excess hospitalization rate per person per unit concentration
    baseline_demand: float  # MWh per slot
    demand_volatility: DemandVolatility = field(default_factory=DemandVolatility)
    plants: tuple[PlantSpec, ...] = ()


@dataclass(frozen=True)
class TransportKernelParams:
    """One-step deposition kernel: fractions of a cell's HAP emission that land
    on the cell itself, one cell downwind, and each of the two lateral
    neighbors. Whatever remains (and any mass directed off-grid) leaves the
    domain. Under CALM wind the whole kernel mass deposits on the source cell.
    """

    self_fraction: float
    downwind_fraction: float
    lateral_fraction: float

    @property
    def total(self) -> float:
        return self.self_fraction + self.downwind_fraction + 2.0 * self.lateral_fraction


@dataclass(frozen=True)
class WeatherParams:
    transition_stickiness: float = 1.0  # probability a cell keeps its direction
    initial_field: tuple[str, ...] | None = None  # per-cell directions, row-major


@dataclass(frozen=True)
class HealthModelParams:
    form: str = "linear"  # "linear" | "loglinear"
    baseline_rate: float = 0.01  # loglinear scale r0 (per person); unused by linear


@dataclass(frozen=True)
class Caps:
    co2: float
    hap: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.co2, self.hap)


@dataclass(frozen=True)
class Scenario:
    grid_dims: tuple[int, int]  # (rows, cols)
    subregions: tuple[Subregion, ...]
    fuels: tuple[FuelType, ...]
    caps: Caps  # time-average totals (CO2 t/slot, HAP kg/slot)
    transport_params: TransportKernelParams
    weather_params: WeatherParams
    health_model: HealthModelParams
    rng_seed: int = 0
    marginal_caps: Caps | None = None  # per-slot totals; must be >= caps
    demand_routing: str = "local"  # "local" | "pooled"
    availability_noise: float = 0.1  # std dev of the clipped-normal availability draw

    @property
    def n_cells(self) -> int:
        return len(self.subregions)

    @property
    def n_fuels(self) -> int:
        return len(self.fuels)


def validate_fuel_mix(weights, n_fuels: int | None = None) -> np.ndarray:
    """Check the box and simplex conditions on a mix vector; return it as an array.

    Entries must lie in [0, 1] and sum to 1 within MIX_SUM_ATOL.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidMix(f"mix must be a nonempty vector, got shape {w.shape}")
    if n_fuels is not None and w.size != n_fuels:
        raise InvalidMix(f"mix has {w.size} entries, expected {n_fuels}")
    if np.any(w < -MIX_SUM_ATOL) or np.any(w > 1.0 + MIX_SUM_ATOL):
        raise InvalidMix(f"mix entries outside [0, 1]: {w.tolist()}")
    total = float(w.sum())
    if abs(total - 1.0) > MIX_SUM_ATOL:
        raise InvalidMix(f"mix entries sum to {total!r}, expected 1")
    return w


def mix_allocation(mix, demand: float) -> np.ndarray:
    """Split `demand` across fuels according to `mix`.

    The last entry absorbs floating-point rounding so the result sums to the
    demand exactly. Linear in demand by construction.
    """
    w = validate_fuel_mix(mix)
    if demand < 0:
        raise ValueError(f"demand must be nonnegative, got {demand}")
    x = w * demand
    x[-1] = demand - float(x[:-1].sum())
    if x[-1] < 0:  # rounding pushed the absorber slightly negative
        x[-1] = 0.0
    err = float(x.sum()) - demand  # settle re-summation rounding onto the absorber
    if err != 0.0 and x[-1] >= err:
        x[-1] -= err
    return x


def _check_kernel(kernel: TransportKernelParams, out: list[Violation]) -> None:
    fractions = (kernel.self_fraction, kernel.downwind_fraction, kernel.lateral_fraction)
    if any(f < 0 for f in fractions):
        out.append(Violation("BadKernel", f"kernel fractions must be >= 0, got {fractions}"))
    elif kernel.total > 1.0 + 1e-12:
        out.append(Violation("BadKernel", f"kernel mass {kernel.total} exceeds 1"))


def validate_scenario(raw: Scenario) -> Scenario:
    """Validate every invariant and return a normalized scenario.

    Normalization: fuels sorted by id, subregions sorted row-major by coords.
    On failure raises ScenarioError naming all violations. A scenario whose
    fuels give no room to trade HAP off (all hap factors equal and positive)
    triggers a warning, not an error.
    """
    v: list[Violation] = []
    rows, cols = raw.grid_dims
    if rows <= 0 or cols <= 0:
        v.append(Violation("BadGridDims", f"grid_dims must be positive, got {raw.grid_dims}"))

    fuels = tuple(sorted(raw.fuels, key=lambda f: f.id))
    if not fuels:
        v.append(Violation("NoFuels", "scenario defines no fuel types"))
    if [f.id for f in fuels] != list(range(len(fuels))):
        v.append(Violation("BadFuelIds", f"fuel ids must be 0..{len(fuels) - 1} with no gaps"))
    for f in fuels:
        if f.co2_factor < 0 or f.hap_factor < 0:
            v.append(Violation("NegativeFactor", f"fuel {f.id} ({f.name}) has a negative emission factor"))
    fuel_ids = {f.id for f in fuels}

    subregions = tuple(sorted(raw.subregions, key=lambda s: s.coords))
    if rows > 0 and cols > 0 and len(subregions) != rows * cols:
        v.append(Violation(
            "BadGridDims",
            f"{len(subregions)} subregions do not cover a {rows}x{cols} grid ({rows * cols} cells)",
        ))
    seen_coords: set[tuple[int, int]] = set()
    seen_plant_ids: set[int] = set()
    for s in subregions:
        r, c = s.coords
        if s.coords in seen_coords:
            v.append(Violation("DuplicateCoords", f"two subregions share coords {s.coords}"))
        seen_coords.add(s.coords)
        if not (0 <= r < rows and 0 <= c < cols):
            v.append(Violation("BadCoords", f"subregion {s.id} coords {s.coords} off the grid"))
        if s.population < 0:
            v.append(Violation("NegativePopulation", f"subregion {s.id} population {s.population} < 0"))
        if s.health_slope < 0:
            v.append(Violation("NegativeSlope", f"subregion {s.id} health_slope {s.health_slope} < 0"))
        if s.baseline_demand < 0:
            v.append(Violation("NegativeDemand", f"subregion {s.id} baseline_demand < 0"))
        dv = s.demand_volatility
        if not (0.0 <= dv.persistence < 1.0) or dv.noise < 0:
            v.append(Violation("BadVolatility", f"subregion {s.id} volatility ({dv.persistence}, {dv.noise}) invalid"))
        for p in s.plants:
            if p.fuel not in fuel_ids:
                v.append(Violation("UnknownFuelId", f"plant {p.plant_id} references unknown fuel id {p.fuel}"))
            if p.capacity < 0:
                v.append(Violation("NegativeCapacity", f"plant {p.plant_id} capacity {p.capacity} < 0"))
            if not (0.0 <= p.availability_factor <= 1.0):
                v.append(Violation("BadAvailabilityFactor", f"plant {p.plant_id} availability_factor {p.availability_factor} outside [0, 1]"))
            if p.plant_id in seen_plant_ids:
                v.append(Violation("DuplicatePlantId", f"plant id {p.plant_id} used more than once"))
            seen_plant_ids.add(p.plant_id)
    # Subregion ids double as row-major array indices downstream.
    if all(0 <= r < rows and 0 <= c < cols for s in subregions for r, c in [s.coords]) and len(seen_coords) == len(subregions):
        expected = {s.coords: i for i, s in enumerate(subregions)}
        for s in subregions:
            if s.id != expected[s.coords]:
                v.append(Violation("BadSubregionId", f"subregion at {s.coords} must have id {expected[s.coords]} (row-major rank), got {s.id}"))

    if raw.caps.co2 <= 0 or raw.caps.hap <= 0:
        v.append(Violation("BadCaps", f"caps must be > 0, got ({raw.caps.co2}, {raw.caps.hap})"))
    if raw.marginal_caps is not None:
        if raw.marginal_caps.co2 < raw.caps.co2 or raw.marginal_caps.hap < raw.caps.hap:
            v.append(Violation(
                "InconsistentCaps",
                "marginal caps tighter than average caps: "
                f"({raw.marginal_caps.co2}, {raw.marginal_caps.hap}) < ({raw.caps.co2}, {raw.caps.hap})",
            ))

    _check_kernel(raw.transport_params, v)

    wp = raw.weather_params
    if not (0.0 <= wp.transition_stickiness <= 1.0):
        v.append(Violation("BadStickiness", f"transition_stickiness {wp.transition_stickiness} outside [0, 1]"))
    if wp.initial_field is not None:
        if len(wp.initial_field) != len(subregions):
            v.append(Violation("BadInitialField", f"initial_field has {len(wp.initial_field)} entries for {len(subregions)} cells"))
        for d in wp.initial_field:
            if d not in DIRECTIONS:
                v.append(Violation("BadInitialField", f"unknown wind direction {d!r}"))

    if raw.health_model.form not in HEALTH_FORMS:
        v.append(Violation("BadHealthForm", f"health model form {raw.health_model.form!r} not one of {HEALTH_FORMS}"))
    if raw.health_model.baseline_rate < 0:
        v.append(Violation("BadHealthForm", "loglinear baseline_rate must be >= 0"))
    if raw.demand_routing not in ROUTING_MODES:
        v.append(Violation("BadRouting", f"demand_routing {raw.demand_routing!r} not one of {ROUTING_MODES}"))
    if raw.availability_noise < 0:
        v.append(Violation("BadAvailabilityNoise", "availability_noise must be >= 0"))

    if v:
        raise ScenarioError(v)

    hap_factors = sorted(f.hap_factor for f in fuels)
    if hap_factors and hap_factors[0] > 0 and hap_factors[0] == hap_factors[-1]:
        warnings.warn(
            "all fuels share the same positive HAP factor; the health objective cannot "
            "distinguish fuel mixes",
            stacklevel=2,
        )

    return replace(raw, fuels=fuels, subregions=subregions)


class ScenarioArrays:
    """Array view of a validated scenario, shared by the env, policies, and harness.

    Plants are ordered by (cell, fuel, plant_id); that order is the merit order
    used by the per-plant dispatch loop.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.rows, self.cols = scenario.grid_dims
        self.n_cells = scenario.n_cells
        self.n_fuels = scenario.n_fuels
        subs = scenario.subregions
        self.population = np.array([s.population for s in subs], dtype=float)
        self.health_slope = np.array([s.health_slope for s in subs], dtype=float)
        self.pop_slope = self.population * self.health_slope
        self.baseline_demand = np.array([s.baseline_demand for s in subs], dtype=float)
        self.demand_persistence = np.array([s.demand_volatility.persistence for s in subs], dtype=float)
        self.demand_noise = np.array([s.demand_volatility.noise for s in subs], dtype=float)
        self.co2_factor = np.array([f.co2_factor for f in scenario.fuels], dtype=float)
        self.hap_factor = np.array([f.hap_factor for f in scenario.fuels], dtype=float)

        plants = [(s.id, p) for s in subs for p in sorted(s.plants, key=lambda p: (p.fuel, p.plant_id))]
        self.n_plants = len(plants)
        self.plant_cell = np.array([cell for cell, _ in plants], dtype=int)
        self.plant_fuel = np.array([p.fuel for _, p in plants], dtype=int)
        self.plant_id = np.array([p.plant_id for _, p in plants], dtype=int)
        self.plant_capacity = np.array([p.capacity for _, p in plants], dtype=float)
        self.plant_availability_factor = np.array([p.availability_factor for _, p in plants], dtype=float)
        # installed capacity per (cell, fuel)
        self.capacity = np.zeros((self.n_cells, self.n_fuels))
        np.add.at(self.capacity, (self.plant_cell, self.plant_fuel), self.plant_capacity)

        wp = scenario.weather_params
        if wp.initial_field is not None:
            self.initial_weather = np.array([DIRECTIONS.index(d) for d in wp.initial_field], dtype=int)
        else:
            self.initial_weather = None
        self.stickiness = wp.transition_stickiness
        self.pooled = scenario.demand_routing == "pooled"

    @classmethod
    def ensure(cls, scenario_or_arrays) -> "ScenarioArrays":
        if isinstance(scenario_or_arrays, cls):
            return scenario_or_arrays
        return cls(scenario_or_arrays)


def figure1_scenario() -> Scenario:
    """The built-in 3x3 demo grid: three plant pairs, three populated cells.

    Layout (row-major): dirty/pop/clean, pop/hybrid/hybrid, clean/pop/dirty.
    Per-plant capacities 20/40/40 (clean/hybrid/dirty), total demand 100,
    deterministic: fixed wind field, no demand or availability noise. Both
    dirty plumes exit the grid; the center hybrid plant blows across all
    three populated cells. Emission caps (35, 35) sit halfway between the
    stationary emissions of the pure emission-minimizing allocation (30, 30)
    and the pure health-minimizing one (40, 40), so a cap-aware policy has
    room to beat one on health and the other on emissions.
    """
    fuels = (
        FuelType(0, "clean", co2_factor=0.0, hap_factor=0.0),
        FuelType(1, "hybrid", co2_factor=0.5, hap_factor=0.5),
        FuelType(2, "dirty", co2_factor=1.0, hap_factor=1.0),
    )
    calm = DemandVolatility(0.0, 0.0)

    def plant_cell(cell_id, coords, plant_id, fuel, capacity):
        return Subregion(
            id=cell_id, coords=coords, population=0.0, health_slope=0.0,
            baseline_demand=0.0, demand_volatility=calm,
            plants=(PlantSpec(plant_id, fuel, capacity, 1.0),),
        )

    def pop_cell(cell_id, coords, demand):
        return Subregion(
            id=cell_id, coords=coords, population=1000.0, health_slope=0.001,
            baseline_demand=demand, demand_volatility=calm, plants=(),
        )

    subregions = (
        plant_cell(0, (0, 0), 0, 2, 40.0),   # dirty, plume exits NW
        pop_cell(1, (0, 1), 34.0),
        plant_cell(2, (0, 2), 1, 0, 20.0),   # clean
        pop_cell(3, (1, 0), 33.0),
        plant_cell(4, (1, 1), 2, 1, 40.0),   # hybrid, plume covers all pops
        plant_cell(5, (1, 2), 3, 1, 40.0),   # hybrid, plume misses pops
        plant_cell(6, (2, 0), 4, 0, 20.0),   # clean
        pop_cell(7, (2, 1), 33.0),
        plant_cell(8, (2, 2), 5, 2, 40.0),   # dirty, plume exits SE
    )
    wind = ("NW", "CALM", "NE", "CALM", "W", "W", "SW", "CALM", "SE")
    return validate_scenario(Scenario(
        grid_dims=(3, 3),
        subregions=subregions,
        fuels=fuels,
        caps=Caps(co2=35.0, hap=35.0),
        transport_params=TransportKernelParams(0.4, 0.4, 0.1),
        weather_params=WeatherParams(transition_stickiness=1.0, initial_field=wind),
        health_model=HealthModelParams(form="linear"),
        rng_seed=7,
        demand_routing="pooled",
        availability_noise=0.0,
    ))
