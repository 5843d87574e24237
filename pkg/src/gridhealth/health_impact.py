"""Concentration-response models mapping deposited HAP to expected hospitalizations.

Two forms. Linear: h_i = population_i * slope_i * c_i, which keeps the
per-slot allocation problem exactly solvable. Loglinear:
h_i = population_i * r0 * (exp(slope_i * c_i) - 1), a convex excess-risk
curve that reduces to the linear form with slope population * r0 * beta for
small exposures. Counts are expectations; fractional values are meaningful.
"""

from __future__ import annotations

import numpy as np

from .grid_model import ScenarioArrays

from .emission_transport import NegativeConcentration


def _fields(scenario_or_arrays):
    a = ScenarioArrays.ensure(scenario_or_arrays)
    hm = a.scenario.health_model
    return a.population, a.health_slope, hm.form, hm.baseline_rate


def hospitalizations(concentration, scenario) -> np.ndarray:
    """Expected hospitalizations per cell from the deposited-HAP field."""
    c = np.asarray(concentration, dtype=float)
    if np.any(c < 0):
        raise NegativeConcentration(f"concentration must be nonnegative, got min {c.min()}")
    pop, beta, form, r0 = _fields(scenario)
    if form == "linear":
        return pop * beta * c
    return pop * r0 * np.expm1(beta * c)


def marginal_health(concentration, scenario) -> np.ndarray:
    """d(hospitalizations)/d(concentration) per cell, at the given field."""
    c = np.asarray(concentration, dtype=float)
    pop, beta, form, r0 = _fields(scenario)
    if form == "linear":
        return pop * beta * np.ones_like(c)
    return pop * r0 * beta * np.exp(beta * c)
