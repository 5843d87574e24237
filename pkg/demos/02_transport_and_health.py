"""Following one slot through the pipeline by hand.

Emissions are booked at the source cell, deposited through the wind-indexed
transport kernel, and converted to expected hospitalizations by each cell's
population and response slope. This script walks a single slot of the
built-in grid and prints every intermediate field.

Run:  python demos/02_transport_and_health.py
"""

import numpy as np

from gridhealth import (
    ScenarioArrays,
    build_transport_matrix,
    disperse,
    figure1_scenario,
    hospitalizations,
    min_emission_policy,
)
from gridhealth.stochastic_env import env_init, env_step

scenario = figure1_scenario()
arrays = ScenarioArrays.ensure(scenario)
state = env_init(scenario, seed=7)
state, sample = env_step(state)


def show(label, vector, fmt="{:7.2f}"):
    print(f"{label:<22}" + "  ".join(fmt.format(v) for v in vector))


decision = min_emission_policy(sample, scenario)
hap_emitted = decision.per_fuel_energy @ arrays.hap_factor
co2_emitted = decision.per_fuel_energy @ arrays.co2_factor

T = build_transport_matrix(sample.weather, scenario.grid_dims, scenario.transport_params)
concentration = disperse(hap_emitted, T)
harm = hospitalizations(concentration, scenario)

print("cells are row-major 0..8; populated cells are 1, 3, 7\n")
show("demand (MWh)", sample.demand)
show("CO2 emitted (t)", co2_emitted)
show("HAP emitted (kg)", hap_emitted)
show("HAP deposited (kg)", concentration)
show("hospitalizations", harm, fmt="{:7.3f}")

print(f"""
mass balance: {hap_emitted.sum():.1f} kg emitted, {concentration.sum():.1f} kg
deposited in-grid; the rest left the domain with the plumes that point off
the edge. The center hybrid plant (cell 4) pushes {T[4, 3] * 100:.0f}% of its
emission onto the populated cell to its west and {T[4, 1] * 100:.0f}% onto
each lateral neighbor, which is exactly where the harm shows up.
""")

# the same emission placed at a plume-free cell is harmless
relocated = np.zeros(9)
relocated[0] = hap_emitted.sum()  # dirty corner, plume exits NW
harm_relocated = hospitalizations(disperse(relocated, T), scenario)
print(f"relocating all {hap_emitted.sum():.0f} kg to the NW dirty corner would cause "
      f"{harm_relocated.sum():.3f} hospitalizations: location, not just mass, drives harm.")
