// Wire types. These mirror the server's JSON schemas exactly; the dashboard
// never reshapes or recomputes the numbers inside them.

export interface CapPair {
    co2: number;
    hap: number;
}

export interface Metrics {
    horizon: number;
    avg_hospitalizations: number;
    avg_co2: number;
    avg_hap: number;
    cap_violation: CapPair;
    total_shortfall: number;
    terminal_queues: CapPair;
    trajectory?: TrajectorySlot[];
}

export interface TrajectorySlot {
    t: number;
    demand: number[];
    weather: string[];
    mix: number[][];
    energy: number[][];
    shortfall: number[];
    co2: number[];
    hap: number[];
    concentration: number[];
    hospitalizations: number[];
    queues: CapPair;
    setpoints: { plant_id: number; output: number }[];
}

export type JobStatus = 'QUEUED' | 'RUNNING' | 'DONE' | 'FAILED';

export interface JobRecord {
    job_id: string;
    status: JobStatus;
    result: Metrics | SweepResult | null;
    error: string | null;
}

export interface SweepResult {
    axis: string;
    rows: { value: number; metrics: Metrics }[];
}

export type PolicyKind = 'lyapunov' | 'min_emission' | 'min_health' | 'proportional';

export interface PolicyConfigDoc {
    kind: PolicyKind;
    V?: number;
}

export interface PlantDoc {
    plant_id: number;
    fuel: number;
    capacity: number;
    availability_factor: number;
}

export interface SubregionDoc {
    id: number;
    coords: [number, number];
    population: number;
    health_slope: number;
    baseline_demand: number;
    demand_volatility: { persistence: number; noise: number };
    plants: PlantDoc[];
}

export interface ScenarioDoc {
    grid_dims: [number, number];
    subregions: SubregionDoc[];
    fuels: { id: number; name: string; co2_factor: number; hap_factor: number }[];
    caps: CapPair;
    marginal_caps: CapPair | null;
    transport_params: { self_fraction: number; downwind_fraction: number; lateral_fraction: number };
    weather_params: { transition_stickiness: number; initial_field: string[] | null };
    health_model: { form: string; baseline_rate: number };
    rng_seed: number;
    demand_routing: string;
    availability_noise: number;
}

export interface RunRequest {
    scenario: string | ScenarioDoc;
    policy_config: PolicyConfigDoc;
    T: number;
    seed: number;
    include_trajectory?: boolean;
}

export interface ApiErrorBody {
    code: string;
    message: string;
    violations: string[];
}
