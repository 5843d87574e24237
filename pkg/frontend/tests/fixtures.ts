import type { JobRecord, Metrics, ScenarioDoc, TrajectorySlot } from '../src/types.js';

export function tinyScenario(): ScenarioDoc {
    return {
        grid_dims: [1, 2],
        subregions: [
            {
                id: 0,
                coords: [0, 0],
                population: 1000,
                health_slope: 0.01,
                baseline_demand: 60,
                demand_volatility: { persistence: 0, noise: 0 },
                plants: [
                    { plant_id: 0, fuel: 0, capacity: 15, availability_factor: 1 },
                    { plant_id: 1, fuel: 1, capacity: 50, availability_factor: 1 },
                ],
            },
            {
                id: 1,
                coords: [0, 1],
                population: 0,
                health_slope: 0,
                baseline_demand: 0,
                demand_volatility: { persistence: 0, noise: 0 },
                plants: [],
            },
        ],
        fuels: [
            { id: 0, name: 'clean', co2_factor: 0, hap_factor: 0 },
            { id: 1, name: 'gas', co2_factor: 0.6, hap_factor: 0.1 },
        ],
        caps: { co2: 31.05, hap: 70 },
        marginal_caps: null,
        transport_params: { self_fraction: 0.5, downwind_fraction: 0.3, lateral_fraction: 0.1 },
        weather_params: { transition_stickiness: 1, initial_field: ['E', 'E'] },
        health_model: { form: 'linear', baseline_rate: 0.01 },
        rng_seed: 0,
        demand_routing: 'local',
        availability_noise: 0,
    };
}

/** Metrics with deliberately awkward float values: any recomputation on the
 * client would not reproduce them bit for bit. */
export function awkwardMetrics(tag: number, trajectory?: TrajectorySlot[]): Metrics {
    const base: Metrics = {
        horizon: 1000,
        avg_hospitalizations: 3.0000000000017 + tag * 0.1234567890123,
        avg_co2: 35.000000000031 + tag,
        avg_hap: 34.99999999998 + tag,
        cap_violation: { co2: 0, hap: 1.1102230246251565e-14 + tag * 1e-13 },
        total_shortfall: 0,
        terminal_queues: { co2: 4.999999999994 + tag, hap: 0 },
    };
    if (trajectory) {
        base.trajectory = trajectory;
    }
    return base;
}

export function slot(t: number, overrides: Partial<TrajectorySlot> = {}): TrajectorySlot {
    return {
        t,
        demand: [60, 0],
        weather: ['E', 'E'],
        mix: [
            [0.25, 0.75],
            [1, 0],
        ],
        energy: [
            [15, 45],
            [0, 0],
        ],
        shortfall: [0, 0],
        co2: [27, 0],
        hap: [4.5, 0],
        concentration: [2.25, 1.35],
        hospitalizations: [0.0225, 0],
        queues: { co2: t * 1.5, hap: 0 },
        setpoints: [
            { plant_id: 0, output: 15 },
            { plant_id: 1, output: 45 },
        ],
        ...overrides,
    };
}

export function doneRecord(jobId: string, result: Metrics): JobRecord {
    return { job_id: jobId, status: 'DONE', result, error: null };
}
