"""Inner loop: split a cell's per-fuel energy across its individual plants.

No per-plant cost data exists at this layer, so the merit order is plant id
ascending within each fuel. The module boundary exists so a richer inner
optimization can replace the fill rule without touching the policy layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_model import PlantSpec
from .policy_engine import InsufficientAvailability


@dataclass(frozen=True)
class PlantSetpoint:
    plant_id: int
    output: float  # MWh this slot


def dispatch_plants(per_fuel_energy, plants, availability) -> list[PlantSetpoint]:
    """Fill plants in (fuel, plant_id) merit order until each fuel's
    allocation is exhausted.

    `availability` maps plant_id to the plant's realized available energy
    this slot. Raises InsufficientAvailability when an allocation exceeds
    the summed availability of its fuel — the upstream solver must never
    let that happen.
    """
    x = np.asarray(per_fuel_energy, dtype=float)
    by_fuel: dict[int, list[PlantSpec]] = {}
    for p in plants:
        by_fuel.setdefault(p.fuel, []).append(p)
    setpoints: list[PlantSetpoint] = []
    for fuel, group in sorted(by_fuel.items()):
        group.sort(key=lambda p: p.plant_id)
        remaining = float(x[fuel]) if fuel < x.size else 0.0
        total_avail = sum(float(availability[p.plant_id]) for p in group)
        if remaining > total_avail + 1e-9:
            raise InsufficientAvailability(
                f"fuel {fuel}: allocation {remaining} exceeds availability {total_avail}")
        for p in group:
            avail = float(availability[p.plant_id])
            take = avail if avail < remaining else remaining
            setpoints.append(PlantSetpoint(p.plant_id, take))
            remaining -= take
            if remaining <= 0:
                remaining = 0.0
    for fuel in range(x.size):
        if x[fuel] > 1e-9 and fuel not in by_fuel:
            raise InsufficientAvailability(f"fuel {fuel}: allocation {x[fuel]} with no plants")
    return setpoints


def dispatch_grid(per_fuel_energy, arrays, plant_availability) -> np.ndarray:
    """Vectorized whole-grid dispatch over the merit-ordered plant arrays.

    Returns per-plant outputs aligned with ScenarioArrays' plant order.
    Conservation: outputs of each (cell, fuel) group sum to the allocation.
    """
    x = np.asarray(per_fuel_energy, dtype=float)
    out = np.zeros(arrays.n_plants)
    # plants are pre-sorted by (cell, fuel, plant_id); walk groups in order
    start = 0
    while start < arrays.n_plants:
        cell = arrays.plant_cell[start]
        fuel = arrays.plant_fuel[start]
        end = start
        while (end < arrays.n_plants and arrays.plant_cell[end] == cell
               and arrays.plant_fuel[end] == fuel):
            end += 1
        need = float(x[cell, fuel])
        avail = plant_availability[start:end]
        if need > float(avail.sum()) + 1e-9:
            raise InsufficientAvailability(
                f"cell {cell} fuel {fuel}: allocation {need} exceeds availability {avail.sum()}")
        for k in range(start, end):
            take = float(plant_availability[k])
            take = take if take < need else need
            out[k] = take
            need -= take
            if need <= 0:
                break
        start = end
    return out
