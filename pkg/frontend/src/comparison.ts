// Comparison rows are verbatim projections of job records: the dashboard
// displays exactly what the server computed, never derived values.
// (The one exception, bar pixel heights, happens at paint time in charts.ts
// and never feeds back into displayed numbers.)

import type { ComparisonRow, ParetoPoint } from './state.js';
import type { JobRecord, Metrics, SweepResult } from './types.js';

let nextRowId = 1;

export function resetRowIds(): void {
    nextRowId = 1;
}

export function rowFromRecords(
    label: string,
    caps: { co2: number; hap: number },
    V: number,
    seed: number,
    horizon: number,
    records: Record<string, JobRecord>,
): ComparisonRow {
    const metrics: Record<string, Metrics> = {};
    for (const [policy, record] of Object.entries(records)) {
        if (record.status !== 'DONE' || record.result === null) {
            throw new Error(`job for ${policy} is ${record.status}, not DONE`);
        }
        metrics[policy] = record.result as Metrics;
    }
    return { id: nextRowId++, label, caps, V, seed, horizon, metrics };
}

export function paretoFromSweep(result: SweepResult): ParetoPoint[] {
    return result.rows.map((row) => ({
        axisValue: row.value,
        health: row.metrics.avg_hospitalizations,
        co2: row.metrics.avg_co2,
    }));
}

export interface ComparisonCell {
    policy: string;
    health: number;
    co2: number;
    hap: number;
    shortfall: number;
}

/** Flatten a row for table rendering; values are the record's, untouched. */
export function rowCells(row: ComparisonRow): ComparisonCell[] {
    return Object.entries(row.metrics).map(([policy, m]) => ({
        policy,
        health: m.avg_hospitalizations,
        co2: m.avg_co2,
        hap: m.avg_hap,
        shortfall: m.total_shortfall,
    }));
}
