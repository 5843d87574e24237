// Grid map view model: one cell per subregion, colored by the selected
// trajectory layer, with wind arrows and plant glyphs. Everything here is a
// pure function of (scenario, trajectory slot, layer) so rendering a stored
// trajectory is deterministic.

import type { MapLayer } from './state.js';
import type { ScenarioDoc, TrajectorySlot } from './types.js';

export const WIND_ARROWS: Record<string, string> = {
    N: '↑', NE: '↗', E: '→', SE: '↘',
    S: '↓', SW: '↙', W: '←', NW: '↖', CALM: '·',
};

export interface CellView {
    cell: number;
    row: number;
    col: number;
    value: number; // selected layer value (dominant-fuel share for mix)
    fill: string; // css color
    arrow: string;
    glyph: string; // plant marker, '' for plant-free cells
    population: number;
}

export function layerValues(slot: TrajectorySlot, layer: MapLayer): number[] {
    switch (layer) {
        case 'concentration':
            return slot.concentration;
        case 'hospitalizations':
            return slot.hospitalizations;
        case 'mix':
            // share of the cell's energy from its dominant fuel
            return slot.mix.map((weights, i) => {
                const produced = slot.energy[i].reduce((a, b) => a + b, 0);
                return produced > 0 ? Math.max(...weights) : 0;
            });
        case 'wind':
            return slot.weather.map(() => 0); // arrows carry the information
    }
}

export function heatColor(value: number, max: number): string {
    if (max <= 0) {
        return 'rgb(245,245,245)';
    }
    const ratio = Math.min(Math.max(value / max, 0), 1);
    const red = Math.round(255 - 20 * ratio);
    const greenBlue = Math.round(245 - 195 * ratio);
    return `rgb(${red},${greenBlue},${greenBlue})`;
}

function plantGlyph(scenario: ScenarioDoc, cell: number): string {
    const sub = scenario.subregions[cell];
    if (!sub || sub.plants.length === 0) {
        return '';
    }
    const names = sub.plants.map((p) => {
        const fuel = scenario.fuels.find((f) => f.id === p.fuel);
        return (fuel ? fuel.name : '?').charAt(0).toUpperCase();
    });
    return [...new Set(names)].join('');
}

export function buildGrid(scenario: ScenarioDoc, slot: TrajectorySlot, layer: MapLayer): CellView[] {
    const [rows, cols] = scenario.grid_dims;
    const values = layerValues(slot, layer);
    const max = Math.max(...values, 0);
    const cells: CellView[] = [];
    for (let cell = 0; cell < rows * cols; cell += 1) {
        cells.push({
            cell,
            row: Math.floor(cell / cols),
            col: cell % cols,
            value: values[cell],
            fill: heatColor(values[cell], max),
            arrow: WIND_ARROWS[slot.weather[cell]] ?? '?',
            glyph: plantGlyph(scenario, cell),
            population: scenario.subregions[cell]?.population ?? 0,
        });
    }
    return cells;
}
