import json

import pytest

from gridhealth.cli import main
from gridhealth.scenario_io import dump_scenario, scenario_to_dict
from gridhealth import figure1_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compare_builtin_three_rows(capsys):
    code, out, err = run_cli(capsys, "compare", "--scenario", "figure1",
                             "--T", "1000", "--seed", "7", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert {r["policy"] for r in rows} == {"min_emission", "min_health", "lyapunov"}
    by = {r["policy"]: r for r in rows}
    assert by["lyapunov"]["avg_hospitalizations"] < by["min_emission"]["avg_hospitalizations"]
    assert (by["lyapunov"]["avg_co2"] + by["lyapunov"]["avg_hap"]
            < by["min_health"]["avg_co2"] + by["min_health"]["avg_hap"])


def test_validate_reports_every_violation(tmp_path, capsys):
    doc = scenario_to_dict(figure1_scenario())
    doc["subregions"][1]["coords"] = [0, 0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "validate", "--scenario", str(bad))
    assert code == 1
    assert "DuplicateCoords" in err


def test_validate_accepts_good_file(tmp_path, capsys):
    path = tmp_path / "ok.json"
    dump_scenario(figure1_scenario(), path)
    code, out, err = run_cli(capsys, "validate", "--scenario", str(path))
    assert code == 0


def test_unknown_scenario_is_validation_error(capsys):
    code, out, err = run_cli(capsys, "run", "--scenario", "nope")
    assert code == 1
    assert "UnknownScenario" in err


def test_run_twice_byte_identical(tmp_path, capsys):
    outputs = []
    trajectories = []
    for k in range(2):
        out_path = tmp_path / f"m{k}.json"
        traj_path = tmp_path / f"t{k}.jsonl"
        code, _, _ = run_cli(capsys, "run", "--scenario", "figure1",
                             "--policy", "lyapunov", "--V", "10",
                             "--T", "200", "--seed", "7", "--format", "json",
                             "--out", str(out_path), "--trajectory-out", str(traj_path))
        assert code == 0
        outputs.append(out_path.read_bytes())
        trajectories.append(traj_path.read_bytes())
    assert outputs[0] == outputs[1]
    assert trajectories[0] == trajectories[1]
    assert trajectories[0].count(b"\n") == 200


def test_sweep_csv(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "sweep", "--scenario", "two_region",
                         "--axis", "V", "--values", "1,10", "--T", "200",
                         "--format", "csv", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert len(lines) == 3  # header + two rows
    assert lines[0].startswith("axis,value")


def test_table_format_prints_rows(capsys):
    code, out, err = run_cli(capsys, "run", "--scenario", "two_region",
                             "--policy", "min_emission", "--T", "50")
    assert code == 0
    assert "avg_hospitalizations" in out
    assert "min_emission" in out


def test_bad_policy_name_is_validation_error(capsys):
    code, out, err = run_cli(capsys, "compare", "--scenario", "figure1",
                             "--T", "10", "--policies", "lyapunov,dqn")
    assert code == 1
    assert "BadPolicy" in err
