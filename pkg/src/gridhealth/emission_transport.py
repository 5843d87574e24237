"""Emission accounting and one-step pollutant transport on the grid.

CO2 is a global quantity: only its total matters, so it stays where it is
booked. HAP mass moves: a wind-direction-dependent kernel deposits fractions
of each cell's emission on the cell itself, the cell one step downwind, and
the two lateral neighbors. Mass directed past the grid edge leaves the
domain (open boundary, no reflection). Deposition is memoryless per slot:
each slot's concentration field is rebuilt from that slot's emissions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_model import (
    CALM,
    DIRECTION_OFFSETS,
    TransportKernelParams,
    validate_fuel_mix,
)


class NegativeConcentration(ValueError):
    pass


@dataclass(frozen=True)
class EmissionRecord:
    t: int
    co2: np.ndarray  # per-cell CO2 emitted (t)
    hap_emitted: np.ndarray  # per-cell HAP emitted at source (kg)
    concentration: np.ndarray  # per-cell HAP deposited (kg), exposure proxy


def co2_emissions(mix, demand: float, fuels) -> float:
    """CO2 emitted by serving `demand` with the given fuel mix."""
    w = validate_fuel_mix(mix, n_fuels=len(fuels))
    if demand < 0:
        raise ValueError("demand must be nonnegative")
    factors = np.array([f.co2_factor for f in fuels])
    return float(demand * (w @ factors))


def hap_emissions_at_source(mix, demand: float, fuels) -> float:
    """HAP emitted at the source cell by serving `demand` with the given mix."""
    w = validate_fuel_mix(mix, n_fuels=len(fuels))
    if demand < 0:
        raise ValueError("demand must be nonnegative")
    factors = np.array([f.hap_factor for f in fuels])
    return float(demand * (w @ factors))


def _lateral_dirs(direction: int) -> tuple[int, int]:
    # the two directions perpendicular to the wind (90 degrees either way)
    return ((direction + 2) % 8, (direction + 6) % 8)


def build_transport_matrix(weather, grid_dims: tuple[int, int],
                           kernel: TransportKernelParams) -> np.ndarray:
    """Row-substochastic matrix T with T[j, i] = fraction of cell j's HAP
    deposited on cell i under the current wind field.

    Cells are indexed row-major. A CALM cell deposits its whole kernel mass
    (self + downwind + 2*lateral) on itself. Off-grid targets are dropped.
    """
    rows, cols = grid_dims
    n = rows * cols
    w = np.asarray(weather, dtype=int)
    if w.shape != (n,):
        raise ValueError(f"weather field shape {w.shape} does not match {rows}x{cols} grid")
    T = np.zeros((n, n))
    for j in range(n):
        r, c = divmod(j, cols)
        d = int(w[j])
        if d == CALM:
            T[j, j] += kernel.total
            continue
        T[j, j] += kernel.self_fraction
        targets = [(DIRECTION_OFFSETS[d], kernel.downwind_fraction)]
        for lat in _lateral_dirs(d):
            targets.append((DIRECTION_OFFSETS[lat], kernel.lateral_fraction))
        for (dr, dc), frac in targets:
            rr, cc = r + dr, c + dc
            if 0 <= rr < rows and 0 <= cc < cols:
                T[j, rr * cols + cc] += frac
    return T


def disperse(hap_emitted, transport: np.ndarray) -> np.ndarray:
    """Deposit per-cell emissions through the transport matrix: c = T' e."""
    e = np.asarray(hap_emitted, dtype=float)
    if np.any(e < 0):
        raise ValueError("emissions must be nonnegative")
    return transport.T @ e
