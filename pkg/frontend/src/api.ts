// Thin client over the /api/* endpoints. Every number the dashboard shows
// arrives through here and is passed on verbatim.

import type { ApiErrorBody, JobRecord, RunRequest, ScenarioDoc } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
    readonly status: number;
    readonly body: ApiErrorBody;

    constructor(status: number, body: ApiErrorBody) {
        super(body.message || `request failed with ${status}`);
        this.status = status;
        this.body = body;
    }
}

async function parseError(response: Response): Promise<ApiRequestError> {
    let body: ApiErrorBody = { code: 'unknown', message: `HTTP ${response.status}`, violations: [] };
    try {
        body = (await response.json()) as ApiErrorBody;
    } catch {
        // non-JSON error body; keep the fallback
    }
    return new ApiRequestError(response.status, body);
}

export class ApiClient {
    private readonly baseUrl: string;
    private readonly fetchImpl: FetchLike;

    constructor(baseUrl = '', fetchImpl: FetchLike = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl.replace(/\/$/, '');
        this.fetchImpl = fetchImpl;
    }

    private async get<T>(path: string): Promise<T> {
        const response = await this.fetchImpl(`${this.baseUrl}${path}`, { method: 'GET' });
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json()) as T;
    }

    private async post<T>(path: string, body: unknown): Promise<T> {
        const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(body),
        });
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json()) as T;
    }

    async health(): Promise<boolean> {
        try {
            await this.get<{ status: string }>('/api/health');
            return true;
        } catch {
            return false;
        }
    }

    async builtinScenarios(): Promise<Record<string, ScenarioDoc>> {
        const body = await this.get<{ builtin: Record<string, ScenarioDoc> }>('/api/scenarios/builtin');
        return body.builtin;
    }

    async submitRun(request: RunRequest): Promise<string> {
        const body = await this.post<{ job_id: string }>('/api/runs', request);
        return body.job_id;
    }

    async submitSweep(request: RunRequest & { axis: string; values: number[] }): Promise<string> {
        const body = await this.post<{ job_id: string }>('/api/sweeps', request);
        return body.job_id;
    }

    async getJob(jobId: string): Promise<JobRecord> {
        return this.get<JobRecord>(`/api/runs/${jobId}`);
    }
}
