"""Health-aware power grid fuel-mix dispatch.

A grid-world simulator plus a constrained online policy engine: fuel mixes
are chosen per slot to minimize expected hospitalizations from hazardous air
pollutant exposure, while virtual queues enforce time-average CO2 and HAP
caps and optional per-slot limits bound instantaneous emissions.
"""

from .grid_model import (
    Caps,
    DemandVolatility,
    FuelType,
    HealthModelParams,
    InvalidMix,
    PlantSpec,
    Scenario,
    ScenarioArrays,
    ScenarioError,
    Subregion,
    TransportKernelParams,
    Violation,
    WeatherParams,
    figure1_scenario,
    mix_allocation,
    validate_fuel_mix,
    validate_scenario,
)
from .stochastic_env import EnvSample, EnvState, env_init, env_step
from .emission_transport import (
    EmissionRecord,
    build_transport_matrix,
    co2_emissions,
    disperse,
    hap_emissions_at_source,
)
from .health_impact import hospitalizations, marginal_health
from .policy_engine import (
    InstanceTooLarge,
    InsufficientAvailability,
    NonConvergence,
    OracleResult,
    PolicyConfig,
    SlotDecision,
    VirtualQueues,
    marginal_cap_filter,
    min_emission_policy,
    min_health_policy,
    oracle_fixed_mix,
    proportional_policy,
    slot_cost_coefficients,
    solve_slot_linear,
    solve_slot_nonlinear,
    update_queues,
)
from .plant_dispatch import PlantSetpoint, dispatch_plants
from .sim_harness import Metrics, compare_policies, default_policy_table, run_episode, sweep
from .scenario_io import dump_scenario, load_scenario, scenario_from_dict, scenario_to_dict
from .testbeds import random_feasible_scenario, two_region_testbed

__version__ = "0.1.0"

BUILTIN_SCENARIOS = {
    "figure1": figure1_scenario,
    "two_region": two_region_testbed,
}
