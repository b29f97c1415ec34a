import type { ApiClient, JobDoc, StepReport } from './api.js';

export const POLL_INTERVAL_MS = 500;
const MAX_POLL_ATTEMPTS = 600; // five minutes at the default interval

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Poll an evolve job until it leaves the running state.
 * Resolves with the step report on success, throws on job error or
 * when the attempt budget runs out.
 */
export async function pollJob(
  client: ApiClient,
  sessionId: string,
  jobId: string,
  intervalMs = POLL_INTERVAL_MS,
  maxAttempts = MAX_POLL_ATTEMPTS,
): Promise<StepReport> {
  for (let attempt = 0; attempt < maxAttempts; attempt++) {
    const job: JobDoc = await client.getJob(sessionId, jobId);
    if (job.status === 'done' && job.report) {
      return job.report;
    }
    if (job.status === 'error') {
      throw new Error(job.error ?? 'evolution step failed');
    }
    await sleep(intervalMs);
  }
  throw new Error(`job ${jobId} still running after ${maxAttempts} polls`);
}
