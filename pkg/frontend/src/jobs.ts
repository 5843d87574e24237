// Job polling against the async run/sweep contract: submit, then poll the
// job record until it reaches a terminal state.

import type { ApiClient } from './api.js';
import type { JobRecord } from './types.js';

export const JOB_POLL_INTERVAL_MS = 500;

export type SleepFn = (ms: number) => Promise<void>;

const realSleep: SleepFn = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export class JobFailedError extends Error {
    readonly record: JobRecord;

    constructor(record: JobRecord) {
        super(record.error || 'job failed');
        this.record = record;
    }
}

export async function pollJob(
    api: ApiClient,
    jobId: string,
    options: { intervalMs?: number; sleep?: SleepFn; maxPolls?: number } = {},
): Promise<JobRecord> {
    const intervalMs = options.intervalMs ?? JOB_POLL_INTERVAL_MS;
    const sleep = options.sleep ?? realSleep;
    const maxPolls = options.maxPolls ?? 2400; // 20 minutes at the default interval
    for (let polls = 0; polls < maxPolls; polls += 1) {
        const record = await api.getJob(jobId);
        if (record.status === 'DONE') {
            return record;
        }
        if (record.status === 'FAILED') {
            throw new JobFailedError(record);
        }
        await sleep(intervalMs);
    }
    throw new Error(`job ${jobId} did not finish after ${maxPolls} polls`);
}
