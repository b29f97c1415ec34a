import { describe, expect, test } from 'vitest';

import type { ApiClient, JobDoc, StepReport } from '../src/api.js';
import { pollJob } from '../src/poll.js';

const REPORT = { iteration: 1, n_updates: 4 } as unknown as StepReport;

function clientWithJobs(sequence: Array<Partial<JobDoc>>): ApiClient {
  let i = 0;
  return {
    getJob: async () => {
      const doc = sequence[Math.min(i, sequence.length - 1)];
      i += 1;
      return { job_id: 'j', report: null, error: null, ...doc } as JobDoc;
    },
  } as unknown as ApiClient;
}

describe('pollJob', () => {
  test('resolves with the report once the job is done', async () => {
    const client = clientWithJobs([
      { status: 'running' },
      { status: 'running' },
      { status: 'done', report: REPORT },
    ]);
    const report = await pollJob(client, 's', 'j', 1);
    expect(report).toEqual(REPORT);
  });

  test('throws the server error message on a failed job', async () => {
    const client = clientWithJobs([
      { status: 'running' },
      { status: 'error', error: 'bin is unoccupied' },
    ]);
    await expect(pollJob(client, 's', 'j', 1)).rejects.toThrow('bin is unoccupied');
  });

  test('gives up after the attempt budget', async () => {
    const client = clientWithJobs([{ status: 'running' }]);
    await expect(pollJob(client, 's', 'j', 1, 3)).rejects.toThrow('after 3 polls');
  });
});
