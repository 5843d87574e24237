// Chart geometry as data. Layout functions map server numbers to pixel
// rectangles/points; the numbers alongside each shape are the server's,
// untouched, so tests can assert passthrough without a canvas.

import type { ComparisonRow, ParetoPoint } from './state.js';
import type { TrajectorySlot } from './types.js';
import { rowCells } from './comparison.js';

export interface Bar {
    group: string; // metric name
    policy: string;
    value: number; // verbatim metric value
    x: number;
    y: number;
    width: number;
    height: number;
}

export const POLICY_COLORS: Record<string, string> = {
    min_emission: '#7a7a7a',
    min_health: '#2e7d32',
    lyapunov: '#1565c0',
    proportional: '#b26a00',
};

export function pairedBars(row: ComparisonRow, width: number, height: number): Bar[] {
    const cells = rowCells(row);
    const groups: [string, (c: (typeof cells)[number]) => number][] = [
        ['hospitalizations', (c) => c.health],
        ['CO2', (c) => c.co2],
        ['HAP', (c) => c.hap],
    ];
    const maxima = groups.map(([, pick]) => Math.max(...cells.map(pick), 1e-12));
    const groupWidth = width / groups.length;
    const barWidth = (groupWidth * 0.8) / Math.max(cells.length, 1);
    const bars: Bar[] = [];
    groups.forEach(([name, pick], g) => {
        cells.forEach((cell, k) => {
            const value = pick(cell);
            const h = (value / maxima[g]) * (height - 20);
            bars.push({
                group: name,
                policy: cell.policy,
                value,
                x: g * groupWidth + groupWidth * 0.1 + k * barWidth,
                y: height - h,
                width: barWidth * 0.9,
                height: h,
            });
        });
    });
    return bars;
}

export interface SeriesPoint {
    x: number;
    y: number;
    t: number;
    value: number; // verbatim queue value
}

export function queueSeries(
    trajectory: TrajectorySlot[],
    pollutant: 'co2' | 'hap',
    width: number,
    height: number,
): SeriesPoint[] {
    if (trajectory.length === 0) {
        return [];
    }
    const values = trajectory.map((slot) => slot.queues[pollutant]);
    const max = Math.max(...values, 1e-12);
    return trajectory.map((slot, k) => ({
        x: (k / Math.max(trajectory.length - 1, 1)) * width,
        y: height - (values[k] / max) * height,
        t: slot.t,
        value: values[k],
    }));
}

export interface ScatterPoint {
    x: number;
    y: number;
    health: number; // verbatim
    co2: number; // verbatim
    axisValue: number;
}

export function paretoScatter(points: ParetoPoint[], width: number, height: number): ScatterPoint[] {
    if (points.length === 0) {
        return [];
    }
    const maxHealth = Math.max(...points.map((p) => p.health), 1e-12);
    const maxCo2 = Math.max(...points.map((p) => p.co2), 1e-12);
    return points.map((p) => ({
        x: (p.co2 / maxCo2) * (width - 10) + 5,
        y: height - (p.health / maxHealth) * (height - 10) - 5,
        health: p.health,
        co2: p.co2,
        axisValue: p.axisValue,
    }));
}
