"""Online fuel-mix allocation: drift-plus-penalty control plus baselines.

The controller keeps one virtual queue per time-average emission cap. Each
slot it observes demand, availability, and wind, prices a MWh of each fuel
at each cell as

    kappa[i, n] = V * damage[i] * hap[n] + q_co2 * co2[n] + q_hap * hap[n]

where damage[i] is the expected hospitalization cost of one kg of HAP
emitted at cell i under the current wind, and the queues q grow whenever a
slot's total emissions exceed the cap. Minimizing kappa-cost per slot while
meeting demand is a fractional knapsack, solved exactly by a greedy fill.
Queue stability then forces the time-average caps to hold, and larger V
trades queue growth for lower hospitalizations.

Two baselines mirror the fixed scenario policies: min_emission prices fuels
by their summed emission factors only; min_health prices them by the damage
coefficient only, ignoring the caps. A brute-force stationary-mix
enumeration provides ground truth on small deterministic instances.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linprog

from .emission_transport import build_transport_matrix
from .grid_model import Scenario, ScenarioArrays
from .stochastic_env import EnvSample, env_init, env_step

POLICY_KINDS = ("lyapunov", "min_emission", "min_health", "proportional", "oracle_fixed")


class InstanceTooLarge(ValueError):
    """Stationary-mix enumeration would exceed the candidate budget."""


class NonConvergence(RuntimeError):
    """The convex inner solver failed to make progress; indicates a bug."""


class InsufficientAvailability(ValueError):
    """A per-fuel allocation exceeds the summed plant availabilities."""


@dataclass(frozen=True)
class VirtualQueues:
    q_co2: float
    q_hap: float
    caps: tuple[float, float]  # (CO2 cap, HAP cap) per slot, time-average targets

    @classmethod
    def fresh(cls, caps) -> "VirtualQueues":
        return cls(0.0, 0.0, (float(caps[0]), float(caps[1])))


def update_queues(queues: VirtualQueues, emission_totals) -> VirtualQueues:
    """Backlog recursion q <- max(q + slot_total - cap, 0) for both pollutants."""
    co2_total, hap_total = emission_totals
    return replace(
        queues,
        q_co2=max(queues.q_co2 + float(co2_total) - queues.caps[0], 0.0),
        q_hap=max(queues.q_hap + float(hap_total) - queues.caps[1], 0.0),
    )


@dataclass(frozen=True)
class PolicyConfig:
    kind: str = "lyapunov"
    V: float = 10.0  # penalty weight on hospitalizations
    gradient_steps: int = 200  # inner solver budget (loglinear health)
    step_size: float | None = None  # None: auto from a Lipschitz estimate
    tolerance: float = 1e-9  # inner solver stopping threshold
    oracle_resolution: float = 0.05  # mix grid spacing for the enumeration oracle
    fixed_mixes: tuple | None = None  # per-cell stationary mixes (oracle_fixed)

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.V < 0:
            raise ValueError("V must be >= 0")
        res = self.oracle_resolution
        if not (0 < res <= 1) or abs(round(1 / res) - 1 / res) > 1e-9:
            raise ValueError("oracle_resolution must divide 1 evenly")


@dataclass(frozen=True)
class SlotDecision:
    mixes: np.ndarray  # (cells, fuels) production mix per cell, rows on the simplex
    per_fuel_energy: np.ndarray  # (cells, fuels) MWh allocated
    shortfall: np.ndarray  # per-cell unmet demand (MWh)


def damage_per_kg(env_sample: EnvSample, scenario) -> np.ndarray:
    """Expected hospitalizations caused by one kg of HAP emitted at each cell,
    under the current wind field (linear health response)."""
    a = ScenarioArrays.ensure(scenario)
    T = build_transport_matrix(env_sample.weather, (a.rows, a.cols), a.scenario.transport_params)
    return T @ a.pop_slope


def slot_cost_coefficients(queues: VirtualQueues, env_sample: EnvSample,
                           scenario, V: float, damage: np.ndarray | None = None) -> np.ndarray:
    """Marginal drift-plus-penalty cost of one MWh of each fuel at each cell."""
    a = ScenarioArrays.ensure(scenario)
    if damage is None:
        damage = damage_per_kg(env_sample, a)
    return (V * np.outer(damage, a.hap_factor)
            + queues.q_co2 * a.co2_factor
            + queues.q_hap * a.hap_factor)


def _greedy_fill(cost: np.ndarray, cap: np.ndarray, demand: float) -> tuple[np.ndarray, float]:
    """Fill `demand` into items sorted by cost (stable, so input order breaks ties).

    Returns the allocation and the unserved remainder.
    """
    x = np.zeros_like(cap)
    remaining = float(demand)
    if remaining <= 0:
        return x, 0.0
    for k in np.argsort(cost, kind="stable"):
        c = float(cap[k])
        if c <= 0:
            continue
        take = c if c < remaining else remaining
        x[k] = take
        remaining -= take
        if remaining <= 0:
            remaining = 0.0
            break
    return x, remaining


def _mixes_from_energy(x: np.ndarray) -> np.ndarray:
    """Normalize per-cell allocations to simplex rows; idle cells default to
    the first fuel (the mix is payoff-irrelevant at zero energy but must
    still be a valid simplex point)."""
    produced = x.sum(axis=1)
    mixes = np.zeros_like(x)
    active = produced > 0
    mixes[active] = x[active] / produced[active, None]
    mixes[~active, 0] = 1.0
    return mixes


def _pool_shortfall(demand: np.ndarray, unserved: float) -> np.ndarray:
    """Attribute a pooled unserved remainder to cells in proportion to demand."""
    total = float(demand.sum())
    if unserved <= 0 or total <= 0:
        return np.zeros_like(demand)
    return demand * (unserved / total)


def solve_slot_linear(kappa: np.ndarray, env_sample: EnvSample, scenario) -> SlotDecision:
    """Exact per-slot minimizer of a linear cost under demand and availability.

    Local routing: each cell's demand is served from its own plants (one
    knapsack per cell over fuels, ties broken by ascending fuel id). Pooled
    routing: all demand is served from every (cell, fuel) item, ties broken
    by fuel id then cell id. Demand beyond total availability becomes
    shortfall, never an error.
    """
    a = ScenarioArrays.ensure(scenario)
    avail = env_sample.availability
    P = env_sample.demand
    S, N = avail.shape
    if a.pooled:
        # fuel-major item order encodes the (fuel id, cell id) tie-break
        costs = np.ascontiguousarray(kappa.T).ravel()
        caps = np.ascontiguousarray(avail.T).ravel()
        flat, unserved = _greedy_fill(costs, caps, float(P.sum()))
        x = flat.reshape(N, S).T
        shortfall = _pool_shortfall(P, unserved)
    else:
        x = np.zeros((S, N))
        shortfall = np.zeros(S)
        for i in range(S):
            x[i], shortfall[i] = _greedy_fill(kappa[i], avail[i], float(P[i]))
    return SlotDecision(_mixes_from_energy(x), x, shortfall)


def min_emission_policy(env_sample: EnvSample, scenario) -> SlotDecision:
    """Serve demand at minimal summed emission factors, blind to health and caps."""
    a = ScenarioArrays.ensure(scenario)
    kappa = np.tile(a.co2_factor + a.hap_factor, (a.n_cells, 1))
    return solve_slot_linear(kappa, env_sample, a)


def min_health_policy(env_sample: EnvSample, scenario) -> SlotDecision:
    """Serve demand at minimal expected hospitalizations, blind to the caps."""
    a = ScenarioArrays.ensure(scenario)
    kappa = np.outer(damage_per_kg(env_sample, a), a.hap_factor)
    return solve_slot_linear(kappa, env_sample, a)


def proportional_policy(env_sample: EnvSample, scenario) -> SlotDecision:
    """Naive baseline: allocate each problem's demand proportionally to availability."""
    a = ScenarioArrays.ensure(scenario)
    avail = env_sample.availability
    P = env_sample.demand
    x = np.zeros_like(avail)
    if a.pooled:
        total_avail = avail.sum()
        served = min(float(P.sum()), float(total_avail))
        if total_avail > 0:
            x = avail * (served / total_avail)
        shortfall = _pool_shortfall(P, float(P.sum()) - served)
    else:
        shortfall = np.zeros(a.n_cells)
        for i in range(a.n_cells):
            row_avail = float(avail[i].sum())
            served = min(float(P[i]), row_avail)
            if row_avail > 0:
                x[i] = avail[i] * (served / row_avail)
            shortfall[i] = float(P[i]) - served
    return SlotDecision(_mixes_from_energy(x), x, shortfall)


def fixed_mix_policy(env_sample: EnvSample, scenario, mixes) -> SlotDecision:
    """Apply a stationary per-cell mix, clipping at availability (local routing)."""
    a = ScenarioArrays.ensure(scenario)
    if a.pooled:
        raise ValueError("fixed stationary mixes are defined for local demand routing")
    W = np.asarray(mixes, dtype=float)
    target = W * env_sample.demand[:, None]
    x = np.minimum(target, env_sample.availability)
    shortfall = env_sample.demand - x.sum(axis=1)
    np.maximum(shortfall, 0.0, out=shortfall)
    return SlotDecision(_mixes_from_energy(x), x, shortfall)


def _project_capped_simplex(v: np.ndarray, cap: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto {x : sum(x) = total, 0 <= x <= cap}.

    Bisection on the shift tau in x = clip(v - tau, 0, cap); the sum is
    monotone nonincreasing in tau.
    """
    if total <= 0:
        return np.zeros_like(v)
    cap_sum = float(cap.sum())
    if cap_sum <= total:
        return cap.copy()
    lo = float((v - cap).min())
    hi = float(v.max())
    for _ in range(100):
        tau = 0.5 * (lo + hi)
        s = float(np.clip(v - tau, 0.0, cap).sum())
        if s > total:
            lo = tau
        else:
            hi = tau
    return np.clip(v - 0.5 * (lo + hi), 0.0, cap)


def solve_slot_nonlinear(queues: VirtualQueues, env_sample: EnvSample, scenario,
                         V: float, config: PolicyConfig) -> SlotDecision:
    """Projected gradient descent on the per-slot drift-plus-penalty objective
    for the loglinear (convex) health response.

    Feasible set: per problem, allocations sum to the servable demand and
    respect availability bounds. Backtracking line search guarantees
    monotone objective decrease; the best iterate is returned.
    """
    a = ScenarioArrays.ensure(scenario)
    avail = env_sample.availability
    P = env_sample.demand
    T = build_transport_matrix(env_sample.weather, (a.rows, a.cols), a.scenario.transport_params)
    r0 = a.scenario.health_model.baseline_rate
    pop, beta = a.population, a.health_slope
    lin_cost = queues.q_co2 * a.co2_factor + queues.q_hap * a.hap_factor  # (N,)

    if a.pooled:
        problems = [(np.arange(a.n_cells), float(P.sum()))]
    else:
        problems = [(np.array([i]), float(P[i])) for i in range(a.n_cells)]

    def objective(x):
        conc = T.T @ (x @ a.hap_factor)
        health = float((pop * r0 * np.expm1(beta * conc)).sum())
        return V * health + float((x * lin_cost).sum())

    def gradient(x):
        conc = T.T @ (x @ a.hap_factor)
        g_emit = T @ (pop * r0 * beta * np.exp(beta * conc))  # d(health)/d(hap emitted)
        return V * np.outer(g_emit, a.hap_factor) + lin_cost

    def project(x):
        out = np.zeros_like(x)
        for cells, dem in problems:
            block = x[cells]
            served = min(dem, float(avail[cells].sum()))
            out[cells] = _project_capped_simplex(
                block.ravel(), avail[cells].ravel(), served,
            ).reshape(block.shape)
        return out

    x = project(proportional_policy(env_sample, a).per_fuel_energy)
    f = objective(x)
    best_x, best_f = x, f
    if config.step_size is not None:
        eta0 = config.step_size
    else:
        g0 = gradient(x)
        scale = float(np.abs(g0).max())
        eta0 = 1.0 / max(scale, 1e-12)
    stalls = 0
    for _ in range(config.gradient_steps):
        g = gradient(x)
        eta = eta0
        improved = False
        while eta > 1e-18:
            trial = project(x - eta * g)
            f_trial = objective(trial)
            if f_trial <= f:
                improved = f_trial < f - config.tolerance
                x, f = trial, f_trial
                break
            eta *= 0.5
        if f < best_f:
            best_x, best_f = x, f
        if not improved:
            stalls += 1
            if stalls >= 3:
                break
        else:
            stalls = 0

    x = best_x
    served = x.sum(axis=1)
    shortfall = np.maximum(P - served, 0.0)
    if a.pooled:
        shortfall = _pool_shortfall(P, max(float(P.sum() - served.sum()), 0.0))
    return SlotDecision(_mixes_from_energy(x), x, shortfall)


def marginal_cap_filter(decision: SlotDecision, env_sample: EnvSample, scenario,
                        kappa: np.ndarray | None = None,
                        caps: tuple[float, float] | None = None) -> SlotDecision:
    """Enforce per-slot emission limits on a decision.

    If the slot's CO2 or HAP total exceeds its limit, the slot is re-solved
    as a linear program: serve as much demand as possible subject to the
    per-slot caps, then minimize kappa-cost among max-service allocations.
    Demand that cannot be served under the caps becomes shortfall. The
    returned totals respect the caps by construction.
    """
    a = ScenarioArrays.ensure(scenario)
    if caps is None:
        if a.scenario.marginal_caps is None:
            return decision
        caps = a.scenario.marginal_caps.as_tuple()
    m_co2, m_hap = float(caps[0]), float(caps[1])
    x = decision.per_fuel_energy
    co2_total = float((x * a.co2_factor).sum())
    hap_total = float((x * a.hap_factor).sum())
    if co2_total <= m_co2 + 1e-12 and hap_total <= m_hap + 1e-12:
        return decision

    if kappa is None:
        kappa = np.tile(a.co2_factor + a.hap_factor, (a.n_cells, 1))
    avail = env_sample.availability
    P = env_sample.demand
    S, N = avail.shape
    n_var = S * N
    if a.pooled:
        problem_rows = [np.ones(n_var)]
        problem_demands = [float(P.sum())]
    else:
        problem_rows = []
        problem_demands = []
        for i in range(S):
            row = np.zeros((S, N))
            row[i] = 1.0
            problem_rows.append(row.ravel())
            problem_demands.append(float(P[i]))
    co2_row = np.tile(a.co2_factor, S)
    hap_row = np.tile(a.hap_factor, S)
    A_ub = np.vstack(problem_rows + [co2_row, hap_row])
    b_ub = np.array(problem_demands + [m_co2, m_hap])
    flat_kappa = kappa.ravel()
    big = 1.0 + 2.0 * float(np.abs(flat_kappa).max())
    # lexicographic: any extra MWh served outweighs any kappa rearrangement
    c = flat_kappa - big
    res = linprog(c, A_ub=A_ub, b_ub=b_ub,
                  bounds=list(zip(np.zeros(n_var), avail.ravel())), method="highs")
    if not res.success:
        raise RuntimeError(f"marginal-cap LP failed: {res.message}")
    x_new = np.maximum(res.x.reshape(S, N), 0.0)
    x_new = np.minimum(x_new, avail)

    # exact repair of solver feasibility slack: shrink uniformly so the slot
    # totals land strictly under the caps
    co2_new = float((x_new * a.co2_factor).sum())
    hap_new = float((x_new * a.hap_factor).sum())
    ratio = 1.0
    if co2_new > m_co2:
        ratio = min(ratio, m_co2 / co2_new)
    if hap_new > m_hap:
        ratio = min(ratio, m_hap / hap_new)
    if ratio < 1.0:
        x_new *= ratio * (1.0 - 1e-12)

    if a.pooled:
        shortfall = _pool_shortfall(P, max(float(P.sum() - x_new.sum()), 0.0))
    else:
        shortfall = np.maximum(P - x_new.sum(axis=1), 0.0)
    return SlotDecision(_mixes_from_energy(x_new), x_new, shortfall)


def _simplex_grid(n_fuels: int, resolution: float) -> np.ndarray:
    """All mix vectors with entries on a resolution-spaced grid summing to 1."""
    m = round(1.0 / resolution)
    out: list[list[int]] = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], m, n_fuels)
    return np.array(out, dtype=float) / m


@dataclass(frozen=True)
class OracleResult:
    mixes: np.ndarray  # (cells, fuels) stationary mix per cell
    objective: float  # time-average hospitalizations (inf if infeasible)
    feasible: bool
    avg_co2: float
    avg_hap: float


def oracle_fixed_mix(scenario: Scenario, horizon: int, resolution: float = 0.05,
                     candidate_budget: int = 10_000_000) -> OracleResult:
    """Ground truth by enumeration: best stationary mix on a simplex grid.

    Simulates the environment once for `horizon` slots, then evaluates every
    candidate mix assignment against that trajectory. A candidate is
    feasible when it never exceeds availability (no shortfall) and its
    time-average emissions respect the caps. Demand cells get independent
    mixes when there are at most two of them, otherwise all share one mix.
    """
    a = ScenarioArrays.ensure(scenario)
    if a.pooled:
        raise ValueError("the stationary-mix oracle is defined for local demand routing")
    base = _simplex_grid(a.n_fuels, resolution)
    M = len(base)
    dec_cells = np.flatnonzero(a.baseline_demand > 0)
    per_cell = len(dec_cells) <= 2
    n_candidates = M ** len(dec_cells) if per_cell else M
    if n_candidates > candidate_budget:
        raise InstanceTooLarge(
            f"{n_candidates} candidate mixes exceed the budget of {candidate_budget}")
    if n_candidates == 0 or len(dec_cells) == 0:
        mixes = np.zeros((a.n_cells, a.n_fuels))
        mixes[:, 0] = 1.0
        return OracleResult(mixes, 0.0, True, 0.0, 0.0)

    # candidate mixes per decision cell: (C, k, N)
    if per_cell:
        k = len(dec_cells)
        idx = np.stack(np.meshgrid(*([np.arange(M)] * k), indexing="ij"), axis=-1).reshape(-1, k)
        W = base[idx]  # (C, k, N)
    else:
        W = np.repeat(base[:, None, :], len(dec_cells), axis=1)  # (M, k, N)

    C = W.shape[0]
    hosp_sum = np.zeros(C)
    co2_sum = np.zeros(C)
    hap_sum = np.zeros(C)
    ok = np.ones(C, dtype=bool)
    hm = a.scenario.health_model
    state = env_init(a, a.scenario.rng_seed)
    for _ in range(horizon):
        state, sample = env_step(state)
        P = sample.demand[dec_cells]  # (k,)
        x = W * P[None, :, None]  # (C, k, N)
        ok &= (x <= sample.availability[dec_cells][None, :, :] + 1e-12).all(axis=(1, 2))
        e_hap_cells = np.zeros((C, a.n_cells))
        e_hap_cells[:, dec_cells] = x @ a.hap_factor
        co2_sum += (x @ a.co2_factor).sum(axis=1)
        hap_sum += e_hap_cells.sum(axis=1)
        T = build_transport_matrix(sample.weather, (a.rows, a.cols), a.scenario.transport_params)
        conc = e_hap_cells @ T  # (C, S): row c is T' e for candidate c
        if hm.form == "linear":
            hosp_sum += conc @ a.pop_slope
        else:
            hosp_sum += (a.population * hm.baseline_rate * np.expm1(a.health_slope * conc)).sum(axis=1)

    avg_hosp = hosp_sum / horizon
    avg_co2 = co2_sum / horizon
    avg_hap = hap_sum / horizon
    feasible = ok & (avg_co2 <= a.scenario.caps.co2 + 1e-9) & (avg_hap <= a.scenario.caps.hap + 1e-9)
    mixes = np.zeros((a.n_cells, a.n_fuels))
    mixes[:, 0] = 1.0
    if not feasible.any():
        return OracleResult(mixes, float("inf"), False, float("nan"), float("nan"))
    masked = np.where(feasible, avg_hosp, np.inf)
    best = int(np.argmin(masked))
    mixes[dec_cells] = W[best]
    return OracleResult(mixes, float(avg_hosp[best]), True, float(avg_co2[best]), float(avg_hap[best]))
