import assert from 'node:assert/strict';
import { test } from 'node:test';

import { pairedBars, paretoScatter, queueSeries } from '../src/charts.js';
import { paretoFromSweep, resetRowIds, rowFromRecords } from '../src/comparison.js';
import { capSliderBounds, scenarioWithCaps, scrubTo, initialViewState, selectScenario } from '../src/state.js';
import { awkwardMetrics, doneRecord, slot, tinyScenario } from './fixtures.js';

function sampleRow() {
    resetRowIds();
    return rowFromRecords('r', { co2: 31.05, hap: 70 }, 10, 7, 1000, {
        min_emission: doneRecord('a', awkwardMetrics(1)),
        lyapunov: doneRecord('b', awkwardMetrics(3)),
    });
}

test('rowFromRecords refuses unfinished jobs', () => {
    assert.throws(() => rowFromRecords('r', { co2: 1, hap: 1 }, 10, 7, 100, {
        lyapunov: { job_id: 'x', status: 'RUNNING', result: null, error: null },
    }), /RUNNING/);
});

test('paired bars carry the exact served values', () => {
    const row = sampleRow();
    const bars = pairedBars(row, 360, 200);
    assert.equal(bars.length, 6); // 3 metric groups x 2 policies
    const healthBars = bars.filter((b) => b.group === 'hospitalizations');
    assert.deepEqual(
        healthBars.map((b) => b.value).sort(),
        [awkwardMetrics(1).avg_hospitalizations, awkwardMetrics(3).avg_hospitalizations].sort(),
    );
    for (const bar of bars) {
        assert.ok(bar.height >= 0 && bar.y >= 0);
    }
});

test('queue series preserves queue values and slot order', () => {
    const trajectory = [slot(0), slot(1), slot(2)];
    const points = queueSeries(trajectory, 'co2', 300, 100);
    assert.deepEqual(points.map((p) => p.value), trajectory.map((s) => s.queues.co2));
    assert.deepEqual(points.map((p) => p.t), [0, 1, 2]);
    assert.ok(points[0].x === 0 && points[2].x === 300);
});

test('pareto points are verbatim sweep metrics', () => {
    const sweep = {
        axis: 'cap_co2',
        rows: [
            { value: 20, metrics: awkwardMetrics(1) },
            { value: 40, metrics: awkwardMetrics(2) },
        ],
    };
    const points = paretoFromSweep(sweep);
    assert.deepEqual(points.map((p) => p.health),
        sweep.rows.map((r) => r.metrics.avg_hospitalizations));
    const scatter = paretoScatter(points, 200, 150);
    assert.deepEqual(scatter.map((p) => p.co2), sweep.rows.map((r) => r.metrics.avg_co2));
});

test('slider bounds bracket the scenario defaults', () => {
    const bounds = capSliderBounds(tinyScenario());
    assert.ok(bounds.co2.min > 0);
    assert.ok(bounds.co2.min < 31.05 && 31.05 < bounds.co2.max);
    assert.ok(bounds.hap.min < 70 && 70 < bounds.hap.max);
});

test('cap override touches nothing else in the scenario', () => {
    const doc = tinyScenario();
    const out = scenarioWithCaps(doc, 11, 22);
    assert.deepEqual(out.caps, { co2: 11, hap: 22 });
    assert.deepEqual({ ...out, caps: doc.caps }, doc);
});

test('scrubber clamps to the cached trajectory', () => {
    let state = selectScenario(initialViewState(), 'tiny', tinyScenario());
    state = { ...state, trajectory: [slot(0), slot(1), slot(2)] };
    assert.equal(scrubTo(state, -3).slot, 0);
    assert.equal(scrubTo(state, 1).slot, 1);
    assert.equal(scrubTo(state, 99).slot, 2);
});
