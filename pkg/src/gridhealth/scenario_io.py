"""Scenario and run-request JSON (de)serialization.

The on-disk schema mirrors the domain types field for field and is strict:
unknown keys are rejected so a typo cannot silently change a study. The
format is documented in docs/scenario-format.md.
"""

from __future__ import annotations

import json
from pathlib import Path

from .grid_model import (
    Caps,
    DemandVolatility,
    FuelType,
    HealthModelParams,
    PlantSpec,
    Scenario,
    ScenarioError,
    Subregion,
    TransportKernelParams,
    Violation,
    WeatherParams,
    validate_scenario,
)
from .policy_engine import PolicyConfig

_SCENARIO_KEYS = {
    "grid_dims", "subregions", "fuels", "caps", "marginal_caps", "transport_params",
    "weather_params", "health_model", "rng_seed", "demand_routing", "availability_noise",
}
_SUBREGION_KEYS = {"id", "coords", "population", "health_slope", "baseline_demand",
                   "demand_volatility", "plants"}
_FUEL_KEYS = {"id", "name", "co2_factor", "hap_factor"}
_PLANT_KEYS = {"plant_id", "fuel", "capacity", "availability_factor"}
_VOLATILITY_KEYS = {"persistence", "noise"}
_CAPS_KEYS = {"co2", "hap"}
_TRANSPORT_KEYS = {"self_fraction", "downwind_fraction", "lateral_fraction"}
_WEATHER_KEYS = {"transition_stickiness", "initial_field"}
_HEALTH_KEYS = {"form", "baseline_rate"}
_POLICY_KEYS = {"kind", "V", "gradient_steps", "step_size", "tolerance",
                "oracle_resolution", "fixed_mixes"}
_RUN_REQUEST_KEYS = {"scenario", "policy_config", "T", "seed", "include_trajectory"}


def _reject_unknown(obj: dict, allowed: set[str], where: str, violations: list[Violation]) -> None:
    for key in obj:
        if key not in allowed:
            violations.append(Violation("UnknownField", f"unknown field {key!r} in {where}"))


def scenario_from_dict(doc: dict) -> Scenario:
    """Parse and validate a scenario document; raises ScenarioError listing
    every structural and semantic violation found."""
    if not isinstance(doc, dict):
        raise ScenarioError([Violation("BadDocument", "scenario document must be a JSON object")])
    v: list[Violation] = []
    _reject_unknown(doc, _SCENARIO_KEYS, "scenario", v)
    for req in ("grid_dims", "subregions", "fuels", "caps", "transport_params",
                "weather_params", "health_model"):
        if req not in doc:
            v.append(Violation("MissingField", f"scenario is missing {req!r}"))
    if v:
        raise ScenarioError(v)

    fuels = []
    for f in doc["fuels"]:
        _reject_unknown(f, _FUEL_KEYS, f"fuel {f.get('id')}", v)
        fuels.append(FuelType(
            id=int(f["id"]), name=str(f["name"]),
            co2_factor=float(f["co2_factor"]), hap_factor=float(f["hap_factor"]),
        ))
    subregions = []
    for s in doc["subregions"]:
        _reject_unknown(s, _SUBREGION_KEYS, f"subregion {s.get('id')}", v)
        vol = s.get("demand_volatility", {})
        _reject_unknown(vol, _VOLATILITY_KEYS, f"subregion {s.get('id')} demand_volatility", v)
        plants = []
        for p in s.get("plants", []):
            _reject_unknown(p, _PLANT_KEYS, f"plant {p.get('plant_id')}", v)
            plants.append(PlantSpec(
                plant_id=int(p["plant_id"]), fuel=int(p["fuel"]),
                capacity=float(p["capacity"]),
                availability_factor=float(p["availability_factor"]),
            ))
        subregions.append(Subregion(
            id=int(s["id"]), coords=(int(s["coords"][0]), int(s["coords"][1])),
            population=float(s.get("population", 0.0)),
            health_slope=float(s.get("health_slope", 0.0)),
            baseline_demand=float(s.get("baseline_demand", 0.0)),
            demand_volatility=DemandVolatility(
                persistence=float(vol.get("persistence", 0.0)),
                noise=float(vol.get("noise", 0.0)),
            ),
            plants=tuple(plants),
        ))
    caps_doc = doc["caps"]
    _reject_unknown(caps_doc, _CAPS_KEYS, "caps", v)
    marginal = doc.get("marginal_caps")
    if marginal is not None:
        _reject_unknown(marginal, _CAPS_KEYS, "marginal_caps", v)
    tp = doc["transport_params"]
    _reject_unknown(tp, _TRANSPORT_KEYS, "transport_params", v)
    wp = doc["weather_params"]
    _reject_unknown(wp, _WEATHER_KEYS, "weather_params", v)
    hm = doc["health_model"]
    _reject_unknown(hm, _HEALTH_KEYS, "health_model", v)
    if v:
        raise ScenarioError(v)

    initial_field = wp.get("initial_field")
    scenario = Scenario(
        grid_dims=(int(doc["grid_dims"][0]), int(doc["grid_dims"][1])),
        subregions=tuple(subregions),
        fuels=tuple(fuels),
        caps=Caps(co2=float(caps_doc["co2"]), hap=float(caps_doc["hap"])),
        marginal_caps=None if marginal is None else Caps(co2=float(marginal["co2"]),
                                                         hap=float(marginal["hap"])),
        transport_params=TransportKernelParams(
            self_fraction=float(tp["self_fraction"]),
            downwind_fraction=float(tp["downwind_fraction"]),
            lateral_fraction=float(tp["lateral_fraction"]),
        ),
        weather_params=WeatherParams(
            transition_stickiness=float(wp.get("transition_stickiness", 1.0)),
            initial_field=None if initial_field is None else tuple(str(d) for d in initial_field),
        ),
        health_model=HealthModelParams(
            form=str(hm.get("form", "linear")),
            baseline_rate=float(hm.get("baseline_rate", 0.01)),
        ),
        rng_seed=int(doc.get("rng_seed", 0)),
        demand_routing=str(doc.get("demand_routing", "local")),
        availability_noise=float(doc.get("availability_noise", 0.1)),
    )
    return validate_scenario(scenario)


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "grid_dims": list(scenario.grid_dims),
        "subregions": [
            {
                "id": s.id,
                "coords": list(s.coords),
                "population": s.population,
                "health_slope": s.health_slope,
                "baseline_demand": s.baseline_demand,
                "demand_volatility": {
                    "persistence": s.demand_volatility.persistence,
                    "noise": s.demand_volatility.noise,
                },
                "plants": [
                    {
                        "plant_id": p.plant_id,
                        "fuel": p.fuel,
                        "capacity": p.capacity,
                        "availability_factor": p.availability_factor,
                    }
                    for p in s.plants
                ],
            }
            for s in scenario.subregions
        ],
        "fuels": [
            {"id": f.id, "name": f.name, "co2_factor": f.co2_factor, "hap_factor": f.hap_factor}
            for f in scenario.fuels
        ],
        "caps": {"co2": scenario.caps.co2, "hap": scenario.caps.hap},
        "marginal_caps": None if scenario.marginal_caps is None else {
            "co2": scenario.marginal_caps.co2, "hap": scenario.marginal_caps.hap,
        },
        "transport_params": {
            "self_fraction": scenario.transport_params.self_fraction,
            "downwind_fraction": scenario.transport_params.downwind_fraction,
            "lateral_fraction": scenario.transport_params.lateral_fraction,
        },
        "weather_params": {
            "transition_stickiness": scenario.weather_params.transition_stickiness,
            "initial_field": None if scenario.weather_params.initial_field is None
            else list(scenario.weather_params.initial_field),
        },
        "health_model": {
            "form": scenario.health_model.form,
            "baseline_rate": scenario.health_model.baseline_rate,
        },
        "rng_seed": scenario.rng_seed,
        "demand_routing": scenario.demand_routing,
        "availability_noise": scenario.availability_noise,
    }


def load_scenario(path: str | Path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def dump_scenario(scenario: Scenario, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2, sort_keys=True)
        fh.write("\n")


def scenario_canonical_bytes(scenario: Scenario) -> bytes:
    return json.dumps(scenario_to_dict(scenario), sort_keys=True,
                      separators=(",", ":")).encode()


def policy_config_from_dict(doc: dict) -> PolicyConfig:
    v: list[Violation] = []
    _reject_unknown(doc, _POLICY_KEYS, "policy_config", v)
    if v:
        raise ScenarioError(v)
    kwargs = dict(doc)
    if "kind" in kwargs:
        kwargs["kind"] = str(kwargs["kind"]).lower()
    if "fixed_mixes" in kwargs and kwargs["fixed_mixes"] is not None:
        kwargs["fixed_mixes"] = tuple(tuple(float(x) for x in row) for row in kwargs["fixed_mixes"])
    try:
        return PolicyConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ScenarioError([Violation("BadPolicyConfig", str(exc))]) from exc


def policy_config_to_dict(cfg: PolicyConfig) -> dict:
    return {
        "kind": cfg.kind,
        "V": cfg.V,
        "gradient_steps": cfg.gradient_steps,
        "step_size": cfg.step_size,
        "tolerance": cfg.tolerance,
        "oracle_resolution": cfg.oracle_resolution,
        "fixed_mixes": None if cfg.fixed_mixes is None else [list(r) for r in cfg.fixed_mixes],
    }
