import json

import pytest

from gridhealth import ScenarioError, figure1_scenario
from gridhealth.scenario_io import (
    dump_scenario,
    load_scenario,
    policy_config_from_dict,
    scenario_canonical_bytes,
    scenario_from_dict,
    scenario_to_dict,
)


def test_round_trip_through_dict(figure1):
    doc = scenario_to_dict(figure1)
    back = scenario_from_dict(doc)
    assert scenario_canonical_bytes(back) == scenario_canonical_bytes(figure1)


def test_round_trip_through_file(tmp_path, two_region):
    path = tmp_path / "scenario.json"
    dump_scenario(two_region, path)
    back = load_scenario(path)
    assert scenario_canonical_bytes(back) == scenario_canonical_bytes(two_region)


def test_unknown_top_level_field_rejected(figure1):
    doc = scenario_to_dict(figure1)
    doc["wind_speed"] = 3.0
    with pytest.raises(ScenarioError) as excinfo:
        scenario_from_dict(doc)
    assert any(v.code == "UnknownField" for v in excinfo.value.violations)


def test_unknown_nested_field_rejected(figure1):
    doc = scenario_to_dict(figure1)
    doc["subregions"][0]["plants"][0]["efficiency"] = 0.9
    with pytest.raises(ScenarioError) as excinfo:
        scenario_from_dict(doc)
    assert any("efficiency" in v.message for v in excinfo.value.violations)


def test_missing_required_field_rejected(figure1):
    doc = scenario_to_dict(figure1)
    del doc["fuels"]
    with pytest.raises(ScenarioError) as excinfo:
        scenario_from_dict(doc)
    assert any(v.code == "MissingField" for v in excinfo.value.violations)


def test_semantic_violations_surface_from_files(tmp_path, figure1):
    doc = scenario_to_dict(figure1)
    doc["subregions"][1]["coords"] = [0, 0]  # duplicates cell 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ScenarioError) as excinfo:
        load_scenario(path)
    assert any(v.code == "DuplicateCoords" for v in excinfo.value.violations)


def test_policy_config_parsing_rejects_unknown_keys():
    with pytest.raises(ScenarioError):
        policy_config_from_dict({"kind": "lyapunov", "gamma": 2.0})
    cfg = policy_config_from_dict({"kind": "lyapunov", "V": 25.0})
    assert cfg.V == 25.0


def test_policy_config_rejects_bad_kind():
    with pytest.raises(ScenarioError):
        policy_config_from_dict({"kind": "dqn"})
