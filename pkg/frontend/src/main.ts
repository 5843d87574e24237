// Browser bootstrap: binds the view state to the DOM. All computation lives
// in the pure modules; this file only paints and forwards events.

import { ApiClient } from './api.js';
import { pairedBars, paretoScatter, queueSeries, POLICY_COLORS } from './charts.js';
import { buildGrid } from './gridMap.js';
import {
    capSliderBounds,
    initialViewState,
    scrubTo,
    selectScenario,
    withSliders,
    type ViewState,
} from './state.js';
import { rowCells } from './comparison.js';
import { WhatIfPanel } from './whatifPanel.js';

const api = new ApiClient('');
const panel = new WhatIfPanel(api, initialViewState());

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing element #${id}`);
    }
    return node as T;
}

function fmt(v: number): string {
    return Number.isFinite(v) ? v.toPrecision(5).replace(/\.?0+$/, '') : String(v);
}

function renderMap(state: ViewState): void {
    const canvas = el<HTMLCanvasElement>('grid-map');
    const ctx = canvas.getContext('2d');
    if (!ctx || !state.scenario) {
        return;
    }
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (!state.trajectory || state.trajectory.length === 0) {
        ctx.fillStyle = '#666';
        ctx.fillText('run a comparison to populate the map', 20, 40);
        return;
    }
    const slot = state.trajectory[state.slot];
    const [rows, cols] = state.scenario.grid_dims;
    const size = Math.min(canvas.width / cols, canvas.height / rows);
    for (const cell of buildGrid(state.scenario, slot, state.layer)) {
        const x = cell.col * size;
        const y = cell.row * size;
        ctx.fillStyle = cell.fill;
        ctx.fillRect(x, y, size - 2, size - 2);
        ctx.strokeStyle = '#bbb';
        ctx.strokeRect(x, y, size - 2, size - 2);
        ctx.fillStyle = '#111';
        ctx.font = `${size / 4}px sans-serif`;
        ctx.fillText(cell.arrow, x + size * 0.72, y + size * 0.3);
        if (cell.glyph) {
            ctx.fillText(cell.glyph, x + size * 0.08, y + size * 0.3);
        }
        if (cell.population > 0) {
            ctx.font = `${size / 6}px sans-serif`;
            ctx.fillText(`pop ${cell.population}`, x + size * 0.08, y + size * 0.9);
        }
        if (state.layer !== 'wind') {
            ctx.font = `${size / 6}px sans-serif`;
            ctx.fillText(fmt(cell.value), x + size * 0.08, y + size * 0.55);
        }
    }
    el('slot-label').textContent = `slot ${slot.t}`;
    const scrubber = el<HTMLInputElement>('scrubber');
    scrubber.max = String(state.trajectory.length - 1);
    scrubber.value = String(state.slot);
}

function renderHistory(state: ViewState): void {
    const tbody = el<HTMLTableSectionElement>('history-body');
    tbody.innerHTML = '';
    for (const row of [...state.history].reverse()) {
        for (const cell of rowCells(row)) {
            const tr = document.createElement('tr');
            tr.innerHTML =
                `<td>#${row.id}</td><td>${fmt(row.caps.co2)} / ${fmt(row.caps.hap)}</td>` +
                `<td>${fmt(row.V)}</td><td>${cell.policy}</td>` +
                `<td>${fmt(cell.health)}</td><td>${fmt(cell.co2)}</td>` +
                `<td>${fmt(cell.hap)}</td><td>${fmt(cell.shortfall)}</td>`;
            tbody.appendChild(tr);
        }
    }
}

function renderCharts(state: ViewState): void {
    const bars = el<HTMLCanvasElement>('bars');
    const bctx = bars.getContext('2d');
    if (bctx) {
        bctx.clearRect(0, 0, bars.width, bars.height);
        const latest = state.history[state.history.length - 1];
        if (latest) {
            for (const bar of pairedBars(latest, bars.width, bars.height)) {
                bctx.fillStyle = POLICY_COLORS[bar.policy] ?? '#444';
                bctx.fillRect(bar.x, bar.y, bar.width, bar.height);
            }
            bctx.fillStyle = '#111';
            bctx.font = '12px sans-serif';
            bctx.fillText('hospitalizations', 10, 12);
            bctx.fillText('CO2', bars.width / 3 + 10, 12);
            bctx.fillText('HAP', (2 * bars.width) / 3 + 10, 12);
        }
    }
    const queues = el<HTMLCanvasElement>('queues');
    const qctx = queues.getContext('2d');
    if (qctx) {
        qctx.clearRect(0, 0, queues.width, queues.height);
        if (state.trajectory) {
            for (const [pollutant, color] of [['co2', '#1565c0'], ['hap', '#2e7d32']] as const) {
                const points = queueSeries(state.trajectory, pollutant, queues.width, queues.height);
                qctx.strokeStyle = color;
                qctx.beginPath();
                points.forEach((p, k) => (k === 0 ? qctx.moveTo(p.x, p.y) : qctx.lineTo(p.x, p.y)));
                qctx.stroke();
            }
        }
    }
    const pareto = el<HTMLCanvasElement>('pareto');
    const pctx = pareto.getContext('2d');
    if (pctx) {
        pctx.clearRect(0, 0, pareto.width, pareto.height);
        pctx.fillStyle = '#7b1fa2';
        for (const point of paretoScatter(state.pareto, pareto.width, pareto.height)) {
            pctx.beginPath();
            pctx.arc(point.x, point.y, 4, 0, 2 * Math.PI);
            pctx.fill();
        }
    }
}

function render(): void {
    const state = panel.state;
    el('violations').textContent = state.violations.join('\n');
    el<HTMLButtonElement>('run').disabled = panel.busy;
    el<HTMLButtonElement>('sweep').disabled = panel.busy;
    el('status').textContent = panel.busy
        ? `running ${state.activeJobIds.length || '...'} job(s)`
        : 'idle';
    renderHistory(state);
    renderCharts(state);
    renderMap(state);
}

function bindSlider(id: string, labelId: string, apply: (value: number) => void): void {
    const input = el<HTMLInputElement>(id);
    input.addEventListener('input', () => {
        apply(Number(input.value));
        el(labelId).textContent = input.value;
        render();
    });
}

async function boot(): Promise<void> {
    const builtins = await api.builtinScenarios();
    const select = el<HTMLSelectElement>('scenario');
    select.innerHTML = '';
    for (const name of Object.keys(builtins).sort()) {
        const option = document.createElement('option');
        option.value = name;
        option.textContent = name;
        select.appendChild(option);
    }

    const applyScenario = (name: string) => {
        panel.state = selectScenario(panel.state, name, builtins[name]);
        const bounds = capSliderBounds(builtins[name]);
        for (const [id, b, value] of [
            ['cap-co2', bounds.co2, panel.state.capCo2],
            ['cap-hap', bounds.hap, panel.state.capHap],
        ] as const) {
            const input = el<HTMLInputElement>(id);
            input.min = String(b.min);
            input.max = String(b.max);
            input.step = String(b.step);
            input.value = String(value);
        }
        el('cap-co2-label').textContent = String(panel.state.capCo2);
        el('cap-hap-label').textContent = String(panel.state.capHap);
        render();
    };
    select.addEventListener('change', () => applyScenario(select.value));
    applyScenario(select.value || 'figure1');

    bindSlider('cap-co2', 'cap-co2-label', (v) => {
        panel.state = withSliders(panel.state, { capCo2: v });
    });
    bindSlider('cap-hap', 'cap-hap-label', (v) => {
        panel.state = withSliders(panel.state, { capHap: v });
    });
    bindSlider('v-knob', 'v-label', (v) => {
        panel.state = withSliders(panel.state, { V: v });
    });

    el<HTMLSelectElement>('layer').addEventListener('change', (event) => {
        panel.state = { ...panel.state, layer: (event.target as HTMLSelectElement).value as never };
        render();
    });
    el<HTMLInputElement>('scrubber').addEventListener('input', (event) => {
        panel.state = scrubTo(panel.state, Number((event.target as HTMLInputElement).value));
        render();
    });

    el('run').addEventListener('click', async () => {
        render();
        await panel.runComparison();
        render();
    });
    el('sweep').addEventListener('click', async () => {
        const center = panel.state.capCo2;
        const values = [0.6, 0.8, 1.0, 1.2, 1.5].map((f) => Number((center * f).toFixed(6)));
        render();
        await panel.runCapSweep('cap_co2', values);
        render();
    });

    render();
}

boot().catch((error) => {
    document.body.insertAdjacentHTML(
        'beforeend',
        `<pre class="boot-error">failed to reach the API: ${String(error)}</pre>`,
    );
});
