"""Episode orchestration: observe, decide, dispatch, emit, disperse, tally, queue.

The slot order is fixed: the controller sees the slot's realized demand,
availability, and wind before allocating (observe-then-allocate), plants are
dispatched, emissions are booked at source, HAP is deposited through the
transport kernel, hospitalizations are tallied, and the virtual queues absorb
any excess over the caps. Episodes are deterministic functions of
(scenario, policy, horizon, seed); paired comparisons reuse one seed so every
policy faces the identical randomness stream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .emission_transport import EmissionRecord, build_transport_matrix
from .grid_model import Caps, DIRECTIONS, Scenario, ScenarioArrays, validate_scenario
from .health_impact import hospitalizations
from .plant_dispatch import dispatch_grid
from .policy_engine import (
    PolicyConfig,
    SlotDecision,
    VirtualQueues,
    damage_per_kg,
    fixed_mix_policy,
    marginal_cap_filter,
    min_emission_policy,
    min_health_policy,
    proportional_policy,
    slot_cost_coefficients,
    solve_slot_linear,
    solve_slot_nonlinear,
    update_queues,
)
from .stochastic_env import env_init, env_step

SWEEP_AXES = ("cap_co2", "cap_hap", "V")


@dataclass(frozen=True)
class Metrics:
    horizon: int
    avg_hospitalizations: float
    avg_co2: float
    avg_hap: float
    cap_violation_co2: float  # max(avg_co2 - cap, 0)
    cap_violation_hap: float
    total_shortfall: float
    terminal_q_co2: float
    terminal_q_hap: float
    trajectory: tuple | None = None

    def to_dict(self, include_trajectory: bool = True) -> dict:
        d = {
            "horizon": self.horizon,
            "avg_hospitalizations": self.avg_hospitalizations,
            "avg_co2": self.avg_co2,
            "avg_hap": self.avg_hap,
            "cap_violation": {"co2": self.cap_violation_co2, "hap": self.cap_violation_hap},
            "total_shortfall": self.total_shortfall,
            "terminal_queues": {"co2": self.terminal_q_co2, "hap": self.terminal_q_hap},
        }
        if include_trajectory and self.trajectory is not None:
            d["trajectory"] = list(self.trajectory)
        return d


def _decide(config: PolicyConfig, queues: VirtualQueues, sample, arrays: ScenarioArrays,
            damage: np.ndarray) -> SlotDecision:
    kind = config.kind
    if kind == "lyapunov":
        if arrays.scenario.health_model.form == "linear":
            kappa = slot_cost_coefficients(queues, sample, arrays, config.V, damage=damage)
            return solve_slot_linear(kappa, sample, arrays)
        return solve_slot_nonlinear(queues, sample, arrays, config.V, config)
    if kind == "min_emission":
        return min_emission_policy(sample, arrays)
    if kind == "min_health":
        kappa = np.outer(damage, arrays.hap_factor)
        return solve_slot_linear(kappa, sample, arrays)
    if kind == "proportional":
        return proportional_policy(sample, arrays)
    if kind == "oracle_fixed":
        if config.fixed_mixes is None:
            raise ValueError("oracle_fixed policy requires fixed_mixes")
        return fixed_mix_policy(sample, arrays, np.asarray(config.fixed_mixes, dtype=float))
    raise ValueError(f"unknown policy kind {kind!r}")


def _decision_kappa(config: PolicyConfig, queues: VirtualQueues, sample, arrays,
                    damage: np.ndarray) -> np.ndarray:
    # cost surface handed to the marginal-cap re-solve
    if config.kind == "min_health":
        return np.outer(damage, arrays.hap_factor)
    if config.kind == "lyapunov":
        return slot_cost_coefficients(queues, sample, arrays, config.V, damage=damage)
    return np.tile(arrays.co2_factor + arrays.hap_factor, (arrays.n_cells, 1))


def run_episode(scenario: Scenario, policy_config: PolicyConfig, T: int,
                seed: int | None = None, include_trajectory: bool = False) -> Metrics:
    """Simulate T slots and return time-averaged metrics.

    Deterministic given (scenario, policy_config, T, seed). Shortfalls and
    cap violations are reported in the metrics, never raised.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    arrays = ScenarioArrays.ensure(scenario)
    scn = arrays.scenario
    state = env_init(arrays, seed)
    queues = VirtualQueues.fresh(scn.caps.as_tuple())
    has_marginal = scn.marginal_caps is not None

    hosp_sum = 0.0
    co2_sum = 0.0
    hap_sum = 0.0
    shortfall_sum = 0.0
    records: list[dict] | None = [] if include_trajectory else None

    cached_weather = None
    transport = None
    damage = None
    for _ in range(T):
        state, sample = env_step(state)
        if cached_weather is None or not np.array_equal(sample.weather, cached_weather):
            cached_weather = sample.weather
            transport = build_transport_matrix(
                sample.weather, (arrays.rows, arrays.cols), scn.transport_params)
            damage = transport @ arrays.pop_slope

        decision = _decide(policy_config, queues, sample, arrays, damage)
        if has_marginal:
            kappa = _decision_kappa(policy_config, queues, sample, arrays, damage)
            decision = marginal_cap_filter(decision, sample, arrays, kappa=kappa)
        setpoints = dispatch_grid(decision.per_fuel_energy, arrays, sample.plant_availability)

        x = decision.per_fuel_energy
        hap_cells = x @ arrays.hap_factor
        emissions = EmissionRecord(
            t=sample.t,
            co2=x @ arrays.co2_factor,
            hap_emitted=hap_cells,
            concentration=transport.T @ hap_cells,
        )
        h = hospitalizations(emissions.concentration, arrays)
        queues = update_queues(queues, (emissions.co2.sum(), emissions.hap_emitted.sum()))

        hosp_sum += float(h.sum())
        co2_sum += float(emissions.co2.sum())
        hap_sum += float(emissions.hap_emitted.sum())
        shortfall_sum += float(decision.shortfall.sum())
        if records is not None:
            records.append({
                "t": sample.t,
                "demand": [float(v) for v in sample.demand],
                "weather": [DIRECTIONS[int(w)] for w in sample.weather],
                "mix": [[float(v) for v in row] for row in decision.mixes],
                "energy": [[float(v) for v in row] for row in x],
                "shortfall": [float(v) for v in decision.shortfall],
                "co2": [float(v) for v in emissions.co2],
                "hap": [float(v) for v in emissions.hap_emitted],
                "concentration": [float(v) for v in emissions.concentration],
                "hospitalizations": [float(v) for v in h],
                "queues": {"co2": queues.q_co2, "hap": queues.q_hap},
                "setpoints": [
                    {"plant_id": int(pid), "output": float(out)}
                    for pid, out in zip(arrays.plant_id, setpoints)
                ],
            })

    return Metrics(
        horizon=T,
        avg_hospitalizations=hosp_sum / T,
        avg_co2=co2_sum / T,
        avg_hap=hap_sum / T,
        cap_violation_co2=max(co2_sum / T - scn.caps.co2, 0.0),
        cap_violation_hap=max(hap_sum / T - scn.caps.hap, 0.0),
        total_shortfall=shortfall_sum,
        terminal_q_co2=queues.q_co2,
        terminal_q_hap=queues.q_hap,
        trajectory=tuple(records) if records is not None else None,
    )


def compare_policies(scenario: Scenario, configs: dict[str, PolicyConfig], T: int,
                     seed: int | None = None, include_trajectory: bool = False) -> dict[str, Metrics]:
    """Run each policy against the identical randomness stream (same seed)."""
    return {
        name: run_episode(scenario, cfg, T, seed=seed, include_trajectory=include_trajectory)
        for name, cfg in configs.items()
    }


def default_policy_table(V: float = 10.0) -> dict[str, PolicyConfig]:
    return {
        "min_emission": PolicyConfig(kind="min_emission"),
        "min_health": PolicyConfig(kind="min_health"),
        "lyapunov": PolicyConfig(kind="lyapunov", V=V),
    }


def sweep(scenario: Scenario, axis: str, values, T: int, seed: int | None = None,
          policy_config: PolicyConfig | None = None) -> list[dict]:
    """One metrics row per axis value; the frontier view for cap and V studies."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    cfg = policy_config or PolicyConfig(kind="lyapunov")
    rows = []
    for value in values:
        scn, run_cfg = scenario, cfg
        if axis == "cap_co2":
            scn = validate_scenario(replace(scenario, caps=Caps(float(value), scenario.caps.hap)))
        elif axis == "cap_hap":
            scn = validate_scenario(replace(scenario, caps=Caps(scenario.caps.co2, float(value))))
        else:
            run_cfg = replace(cfg, V=float(value))
        metrics = run_episode(scn, run_cfg, T, seed=seed)
        rows.append({"axis": axis, "value": float(value), "metrics": metrics})
    return rows


def trajectory_to_jsonl(records) -> bytes:
    """Canonical line-delimited serialization; byte-stable across surfaces."""
    lines = [json.dumps(r, sort_keys=True, separators=(",", ":")) for r in records]
    return ("\n".join(lines) + "\n").encode() if lines else b""
