// Dashboard view state and its pure update helpers. Slider bounds derive
// from the selected scenario; nothing here talks to the network.

import type { CapPair, Metrics, PolicyKind, ScenarioDoc, TrajectorySlot } from './types.js';

export type MapLayer = 'concentration' | 'hospitalizations' | 'mix' | 'wind';

export const HISTORY_LIMIT = 20;

export interface SliderBounds {
    min: number;
    max: number;
    step: number;
}

export interface ComparisonRow {
    id: number;
    label: string;
    caps: CapPair;
    V: number;
    seed: number;
    horizon: number;
    metrics: Record<string, Metrics>; // policy name -> metrics, verbatim from job records
}

export interface ParetoPoint {
    axisValue: number;
    health: number;
    co2: number;
}

export interface ViewState {
    scenarioName: string;
    scenario: ScenarioDoc | null;
    capCo2: number;
    capHap: number;
    V: number;
    horizon: number;
    seed: number;
    policies: PolicyKind[];
    layer: MapLayer;
    slot: number;
    activeJobIds: string[];
    history: ComparisonRow[];
    trajectory: TrajectorySlot[] | null; // cached trajectory of the latest cap-aware run
    pareto: ParetoPoint[];
    violations: string[];
}

export function initialViewState(): ViewState {
    return {
        scenarioName: 'figure1',
        scenario: null,
        capCo2: 0,
        capHap: 0,
        V: 10,
        horizon: 1000,
        seed: 7,
        policies: ['min_emission', 'min_health', 'lyapunov'],
        layer: 'concentration',
        slot: 0,
        activeJobIds: [],
        history: [],
        trajectory: null,
        pareto: [],
        violations: [],
    };
}

export function capSliderBounds(scenario: ScenarioDoc): { co2: SliderBounds; hap: SliderBounds } {
    // default caps anchor the middle of the range; zero is invalid server-side
    const bounds = (cap: number): SliderBounds => ({
        min: Math.max(cap / 10, 0.01),
        max: cap * 3,
        step: cap / 100,
    });
    return { co2: bounds(scenario.caps.co2), hap: bounds(scenario.caps.hap) };
}

export function selectScenario(state: ViewState, name: string, doc: ScenarioDoc): ViewState {
    return {
        ...state,
        scenarioName: name,
        scenario: doc,
        capCo2: doc.caps.co2,
        capHap: doc.caps.hap,
        slot: 0,
        trajectory: null,
        violations: [],
    };
}

export function withSliders(
    state: ViewState,
    update: Partial<Pick<ViewState, 'capCo2' | 'capHap' | 'V' | 'horizon' | 'seed'>>,
): ViewState {
    return { ...state, ...update, violations: [] };
}

export function pushHistory(state: ViewState, row: ComparisonRow): ViewState {
    const history = [...state.history, row];
    while (history.length > HISTORY_LIMIT) {
        history.shift();
    }
    return { ...state, history };
}

export function scrubTo(state: ViewState, slot: number): ViewState {
    const last = state.trajectory ? state.trajectory.length - 1 : 0;
    return { ...state, slot: Math.min(Math.max(slot, 0), Math.max(last, 0)) };
}

/** The scenario document actually submitted: the stored builtin with the
 * user's cap sliders written into it. No other field is touched. */
export function scenarioWithCaps(doc: ScenarioDoc, capCo2: number, capHap: number): ScenarioDoc {
    return { ...doc, caps: { co2: capCo2, hap: capHap } };
}
