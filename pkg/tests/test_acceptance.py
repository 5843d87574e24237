"""Acceptance suite: one test per release criterion, each printing a
pass/fail line. Tolerances are pinned here and nowhere else.

Run with `pytest tests/test_acceptance.py -v -s`.
"""

import dataclasses
import functools
import json
import threading
import time
import urllib.request

import numpy as np
import pytest

from gridhealth import (
    Caps,
    PolicyConfig,
    ScenarioArrays,
    TransportKernelParams,
    VirtualQueues,
    build_transport_matrix,
    compare_policies,
    disperse,
    figure1_scenario,
    hospitalizations,
    marginal_cap_filter,
    marginal_health,
    min_health_policy,
    oracle_fixed_mix,
    run_episode,
    slot_cost_coefficients,
    solve_slot_linear,
)
from gridhealth.cli import main as cli_main
from gridhealth.grid_model import CALM, DIRECTIONS
from gridhealth.policy_engine import _greedy_fill
from gridhealth.sim_harness import default_policy_table, trajectory_to_jsonl
from gridhealth.service import create_server
from gridhealth.stochastic_env import env_init, env_step
from gridhealth.testbeds import random_feasible_scenario, two_region_testbed

from conftest import single_cell_scenario
from oracles import grid_best_objective
from test_policy_engine import TRI_PLANTS, sample_with


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {name}")
                raise
            print(f"[PASS] {name}")

        return wrapper

    return decorate


@criterion("figure1 grid: cap-aware policy beats min_emission on health and min_health on emissions")
def test_figure1_reproduction():
    start = time.monotonic()
    scenario = figure1_scenario()
    table = compare_policies(scenario, default_policy_table(V=10.0), 1000, seed=7)
    elapsed = time.monotonic() - start
    a, b, c = table["min_emission"], table["min_health"], table["lyapunov"]
    # the built-in caps sit strictly between A's and B's emission levels
    assert a.avg_co2 < scenario.caps.co2 < b.avg_co2
    assert a.avg_hap < scenario.caps.hap < b.avg_hap
    assert c.avg_hospitalizations < a.avg_hospitalizations
    assert c.avg_co2 + c.avg_hap < b.avg_co2 + b.avg_hap
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


@criterion("oracle equivalence: drift-plus-penalty within 5% of enumeration")
def test_oracle_equivalence():
    start = time.monotonic()
    scenario = two_region_testbed()
    oracle = oracle_fixed_mix(scenario, horizon=100, resolution=0.05)
    assert oracle.feasible
    metrics = run_episode(scenario, PolicyConfig(kind="lyapunov", V=100.0), 10_000)
    elapsed = time.monotonic() - start
    assert abs(metrics.avg_hospitalizations - oracle.objective) <= 0.05 * oracle.objective
    assert metrics.avg_co2 <= scenario.caps.co2 * 1.05
    assert metrics.avg_hap <= scenario.caps.hap * 1.05
    assert elapsed < 30.0, f"took {elapsed:.2f}s"


@criterion("time-average cap enforcement on 10 random feasible scenarios")
def test_constraint_enforcement():
    for seed in range(10):
        scenario = random_feasible_scenario(seed)
        m = run_episode(scenario, PolicyConfig(kind="lyapunov", V=10.0), 10_000)
        assert m.avg_co2 <= scenario.caps.co2 * 1.05, f"seed {seed}: CO2 {m.avg_co2} vs {scenario.caps.co2}"
        assert m.avg_hap <= scenario.caps.hap * 1.05, f"seed {seed}: HAP {m.avg_hap} vs {scenario.caps.hap}"
        assert m.terminal_q_co2 / 10_000 < 0.01 * scenario.caps.co2, f"seed {seed}: queue {m.terminal_q_co2}"
        assert m.terminal_q_hap / 10_000 < 0.01 * scenario.caps.hap, f"seed {seed}: queue {m.terminal_q_hap}"


@criterion("per-slot solver exactness against the 0.01 mix-grid enumeration")
def test_solver_exactness():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        kappa = rng.uniform(0, 10, size=3)
        P = float(rng.uniform(10, 100))
        while True:
            caps = rng.dirichlet(np.ones(3)) * P * float(rng.uniform(1.1, 2.0))
            caps = np.minimum(caps, P)
            if caps.sum() >= 1.06 * P:
                break
        x, short = _greedy_fill(kappa, caps.copy(), P)
        assert short == 0.0
        greedy_obj = float(x @ kappa)
        grid_obj, n_feasible = grid_best_objective(kappa, caps, P)
        assert n_feasible >= 1
        assert greedy_obj <= grid_obj + 1e-9
        # reverse gap is bounded by the grid discretization
        assert grid_obj - greedy_obj <= 2 * 3 * 0.01 * P * float(np.abs(kappa).max())


@criterion("drift-plus-penalty identity: cost-weighted allocation == V*h + q*e")
def test_drift_plus_penalty_identity():
    rng = np.random.default_rng(99)
    scenarios = [random_feasible_scenario(s) for s in range(5)]
    for k in range(1000):
        scenario = scenarios[k % len(scenarios)]
        arrays = ScenarioArrays.ensure(scenario)
        sample = sample_with(scenario, seed=k)
        q = VirtualQueues(float(rng.uniform(0, 5)), float(rng.uniform(0, 5)),
                          scenario.caps.as_tuple())
        V = float(rng.uniform(0, 2))
        kappa = slot_cost_coefficients(q, sample, arrays, V)
        decision = solve_slot_linear(kappa, sample, arrays)
        x = decision.per_fuel_energy
        lhs = float((kappa * x).sum())
        T = build_transport_matrix(sample.weather, (arrays.rows, arrays.cols),
                                   scenario.transport_params)
        hap = x @ arrays.hap_factor
        co2 = x @ arrays.co2_factor
        h = hospitalizations(T.T @ hap, arrays)
        rhs = V * float(h.sum()) + q.q_co2 * float(co2.sum()) + q.q_hap * float(hap.sum())
        assert abs(lhs - rhs) <= 1e-9


@criterion("deposition mass balance on 1000 random emission/weather fields")
def test_mass_balance():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        rows, cols = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        n = rows * cols
        parts = rng.dirichlet(np.ones(4))
        unit_kernel = bool(rng.random() < 0.3)
        if unit_kernel:
            k3 = parts[:3] / parts[:3].sum()  # kernel mass sums to one
            kernel = TransportKernelParams(k3[0], k3[1], k3[2] / 2.0)
        else:
            kernel = TransportKernelParams(parts[0], parts[1], parts[2] / 2.0)
        weather = rng.integers(0, 9, size=n)
        e = rng.uniform(0, 20, size=n)
        T = build_transport_matrix(weather, (rows, cols), kernel)
        deposited = disperse(e, T)
        assert deposited.sum() <= e.sum() + 1e-9
        if unit_kernel and rows >= 3 and cols >= 3:
            # interior-only source, full kernel: every plume lands in-grid
            interior = np.zeros(n)
            interior[(rows // 2) * cols + cols // 2] = 11.0
            dep = disperse(interior, T)
            assert dep.sum() == pytest.approx(11.0, abs=1e-9)


@criterion("loglinear health gradient matches central finite differences")
def test_gradient_check():
    rng = np.random.default_rng(42)
    step = 1e-5
    for _ in range(100):
        pop = float(rng.uniform(10, 5000))
        beta = float(rng.uniform(0.05, 2.0))
        r0 = float(rng.uniform(0.001, 0.1))
        c = float(rng.uniform(0.0, 5.0))
        s = single_cell_scenario(TRI_PLANTS, population=pop, slope=beta,
                                 health_form="loglinear", baseline_rate=r0)
        analytic = marginal_health([c], s)[0]
        numeric = (hospitalizations([c + step], s)[0] - hospitalizations([c - step], s)[0]) / (2 * step)
        assert abs(analytic - numeric) / abs(analytic) < 1e-6


@criterion("monotonicity: health in exposure, emissions in dirty weight, health in V")
def test_monotonicity_suite():
    rng = np.random.default_rng(5)
    # hospitalizations monotone in concentration, both response forms
    for form in ("linear", "loglinear"):
        s = single_cell_scenario(TRI_PLANTS, population=1500.0, slope=0.4,
                                 health_form=form, baseline_rate=0.02)
        for _ in range(200):
            c = float(rng.uniform(0, 8))
            bump = float(rng.uniform(0, 4))
            assert hospitalizations([c + bump], s)[0] >= hospitalizations([c], s)[0]
    # emissions monotone in the dirty-fuel weight at fixed demand (default factors)
    from gridhealth import co2_emissions, hap_emissions_at_source
    from conftest import DEFAULT_FUELS
    for _ in range(200):
        w = rng.dirichlet(np.ones(3))
        demand = float(rng.uniform(1, 100))
        shift = float(rng.uniform(0, w[0]))
        w2 = np.array([w[0] - shift, w[1], w[2] + shift])  # clean -> dirty
        assert co2_emissions(w2, demand, DEFAULT_FUELS) >= co2_emissions(w, demand, DEFAULT_FUELS) - 1e-12
        assert hap_emissions_at_source(w2, demand, DEFAULT_FUELS) >= \
            hap_emissions_at_source(w, demand, DEFAULT_FUELS) - 1e-12
    # raising V never raises hospitalizations (1% margin) and never shrinks queues
    scenario = two_region_testbed()
    results = [run_episode(scenario, PolicyConfig(kind="lyapunov", V=v), 10_000)
               for v in (1.0, 10.0, 100.0)]
    for lo, hi in zip(results, results[1:]):
        assert hi.avg_hospitalizations <= lo.avg_hospitalizations * 1.01
        assert (hi.terminal_q_co2 + hi.terminal_q_hap
                >= (lo.terminal_q_co2 + lo.terminal_q_hap) - 1e-9)


@criterion("determinism: identical trajectory bytes in-process, via CLI, via HTTP")
def test_determinism_across_surfaces(tmp_path):
    config = PolicyConfig(kind="lyapunov", V=10.0)
    runs = [run_episode(figure1_scenario(), config, 1000, seed=7, include_trajectory=True)
            for _ in range(2)]
    engine_bytes = trajectory_to_jsonl(runs[0].trajectory)
    assert engine_bytes == trajectory_to_jsonl(runs[1].trajectory)

    cli_bytes = []
    for k in range(2):
        path = tmp_path / f"traj{k}.jsonl"
        code = cli_main(["run", "--scenario", "figure1", "--policy", "lyapunov",
                         "--V", "10", "--T", "1000", "--seed", "7",
                         "--format", "json", "--out", str(tmp_path / f"m{k}.json"),
                         "--trajectory-out", str(path)])
        assert code == 0
        cli_bytes.append(path.read_bytes())
    assert cli_bytes[0] == cli_bytes[1] == engine_bytes

    server, store = create_server(port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        port = server.server_address[1]
        body = json.dumps({
            "scenario": "figure1", "policy_config": {"kind": "lyapunov", "V": 10.0},
            "T": 1000, "seed": 7, "include_trajectory": True,
        }).encode()
        req = urllib.request.Request(f"http://127.0.0.1:{port}/api/runs", data=body,
                                     headers={"Content-Type": "application/json"})
        with urllib.request.urlopen(req, timeout=30) as resp:
            job_id = json.loads(resp.read())["job_id"]
        record = None
        for _ in range(600):
            with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/api/runs/{job_id}", timeout=30) as resp:
                record = json.loads(resp.read())
            if record["status"] in ("DONE", "FAILED"):
                break
            time.sleep(0.05)
        assert record is not None and record["status"] == "DONE"
        http_bytes = trajectory_to_jsonl(record["result"]["trajectory"])
        assert http_bytes == engine_bytes
    finally:
        server.shutdown()
        store.shutdown()
        server.server_close()


@criterion("marginal caps: every filtered slot stays under the per-slot limits")
def test_marginal_cap_filter_slots():
    rng = np.random.default_rng(31)
    scenarios = []
    for seed in range(5):
        s = random_feasible_scenario(seed)
        scenarios.append(dataclasses.replace(
            s, marginal_caps=Caps(s.caps.co2 * 1.05, s.caps.hap * 1.05)))
    checked = 0
    engaged = 0
    for k in range(1000):
        scenario = scenarios[k % len(scenarios)]
        arrays = ScenarioArrays.ensure(scenario)
        m = scenario.marginal_caps
        sample = sample_with(scenario, seed=k)
        decision = min_health_policy(sample, arrays)
        before_co2 = float((decision.per_fuel_energy * arrays.co2_factor).sum())
        before_hap = float((decision.per_fuel_energy * arrays.hap_factor).sum())
        if before_co2 > m.co2 or before_hap > m.hap:
            engaged += 1
        out = marginal_cap_filter(decision, sample, arrays)
        co2 = float((out.per_fuel_energy * arrays.co2_factor).sum())
        hap = float((out.per_fuel_energy * arrays.hap_factor).sum())
        assert co2 <= m.co2 + 1e-9
        assert hap <= m.hap + 1e-9
        checked += 1
    assert checked == 1000
    assert engaged >= 100, f"filter engaged only {engaged} times; testbed too loose"
