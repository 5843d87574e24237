// The what-if loop: set caps and V, launch paired runs for the selected
// policies, and append the finished comparison to the history so the
// operator can read the effect of the last adjustment. One submission may
// be in flight at a time; server-side validation errors surface as the
// violations list instead of a row.

import type { ApiClient } from './api.js';
import { ApiRequestError } from './api.js';
import { pollJob, type SleepFn } from './jobs.js';
import { paretoFromSweep, rowFromRecords } from './comparison.js';
import {
    pushHistory,
    scenarioWithCaps,
    type ComparisonRow,
    type ViewState,
} from './state.js';
import type { JobRecord, Metrics, PolicyKind, RunRequest, SweepResult } from './types.js';

const POLICY_CONFIG: Record<PolicyKind, (V: number) => { kind: PolicyKind; V?: number }> = {
    min_emission: () => ({ kind: 'min_emission' }),
    min_health: () => ({ kind: 'min_health' }),
    lyapunov: (V) => ({ kind: 'lyapunov', V }),
    proportional: () => ({ kind: 'proportional' }),
};

export interface PanelOptions {
    intervalMs?: number;
    sleep?: SleepFn;
}

export class WhatIfPanel {
    private readonly api: ApiClient;
    private readonly options: PanelOptions;
    private inFlight = false;
    state: ViewState;

    constructor(api: ApiClient, state: ViewState, options: PanelOptions = {}) {
        this.api = api;
        this.state = state;
        this.options = options;
    }

    get busy(): boolean {
        return this.inFlight;
    }

    private buildRequest(policy: PolicyKind, withTrajectory: boolean): RunRequest {
        if (!this.state.scenario) {
            throw new Error('no scenario selected');
        }
        return {
            scenario: scenarioWithCaps(this.state.scenario, this.state.capCo2, this.state.capHap),
            policy_config: POLICY_CONFIG[policy](this.state.V),
            T: this.state.horizon,
            seed: this.state.seed,
            include_trajectory: withTrajectory,
        };
    }

    /** Launch one run per selected policy on the shared seed, wait for all
     * records, and append a comparison row built verbatim from them. */
    async runComparison(): Promise<ComparisonRow | null> {
        if (this.inFlight) {
            return null;
        }
        this.inFlight = true;
        try {
            const jobIds: Record<string, string> = {};
            for (const policy of this.state.policies) {
                // the cap-aware run also carries the trajectory for the map
                const withTrajectory = policy === 'lyapunov';
                jobIds[policy] = await this.api.submitRun(this.buildRequest(policy, withTrajectory));
            }
            this.state = { ...this.state, activeJobIds: Object.values(jobIds), violations: [] };
            const records: Record<string, JobRecord> = {};
            for (const [policy, jobId] of Object.entries(jobIds)) {
                records[policy] = await pollJob(this.api, jobId, this.options);
            }
            const row = rowFromRecords(
                `${this.state.scenarioName} caps=(${this.state.capCo2}, ${this.state.capHap}) V=${this.state.V}`,
                { co2: this.state.capCo2, hap: this.state.capHap },
                this.state.V,
                this.state.seed,
                this.state.horizon,
                records,
            );
            const lyapunov = records['lyapunov']?.result as Metrics | undefined;
            this.state = pushHistory(
                {
                    ...this.state,
                    activeJobIds: [],
                    trajectory: lyapunov?.trajectory ?? this.state.trajectory,
                    slot: 0,
                },
                row,
            );
            return row;
        } catch (error) {
            this.state = {
                ...this.state,
                activeJobIds: [],
                violations:
                    error instanceof ApiRequestError && error.body.violations.length > 0
                        ? error.body.violations
                        : [String(error instanceof Error ? error.message : error)],
            };
            return null;
        } finally {
            this.inFlight = false;
        }
    }

    /** Sweep one cap axis around the current slider setting for the Pareto view. */
    async runCapSweep(axis: 'cap_co2' | 'cap_hap', values: number[]): Promise<void> {
        if (this.inFlight) {
            return;
        }
        this.inFlight = true;
        try {
            const jobId = await this.api.submitSweep({
                ...this.buildRequest('lyapunov', false),
                axis,
                values,
            });
            const record = await pollJob(this.api, jobId, this.options);
            this.state = {
                ...this.state,
                pareto: paretoFromSweep(record.result as SweepResult),
                violations: [],
            };
        } catch (error) {
            this.state = {
                ...this.state,
                violations:
                    error instanceof ApiRequestError && error.body.violations.length > 0
                        ? error.body.violations
                        : [String(error instanceof Error ? error.message : error)],
            };
        } finally {
            this.inFlight = false;
        }
    }
}
