import { beforeEach, describe, expect, test } from 'vitest';

import type {
  ApiClient,
  GridCell,
  GridSnapshot,
  JobDoc,
  SolutionDoc,
  StepReport,
} from '../src/api.js';
import { App } from '../src/app.js';

function cell(bin: string, occupied: boolean, fitness = 1): GridCell {
  const [i, j, d] = bin.split('-').map(Number);
  return {
    index: [i, j, d],
    bin,
    depth: d,
    bounds: [1 + 0.4 * i, 1.4 + 0.4 * i, 1 + 0.9 * j, 1.9 + 0.9 * j],
    occupied,
    n_feasible: occupied ? 1 : 0,
    n_infeasible: 0,
    age: 0,
    elite: occupied ? { id: `s-${bin}`, fitness, bc: [1.2, 1.4] } : null,
    mean_fitness: occupied ? fitness : null,
    min_violation: null,
  };
}

function snapshot(iteration: number, cells: GridCell[], mode = 'user'): GridSnapshot {
  return {
    iteration,
    mode,
    n_steps: 3,
    emitter: 'preference',
    rect: [1, 5, 1, 10],
    base_resolution: [10, 10],
    coverage: 0.01,
    stats: {},
    cells,
  };
}

function solution(id: string, blocks: number): SolutionDoc {
  return {
    id,
    feasible: true,
    fitness: 2,
    violation: 0,
    bc: [1.2, 1.4],
    genotype_length: 10,
    axes: [blocks, 1, 1],
    descriptors: {},
    block_count: blocks,
    blocks: Array.from({ length: blocks }, (_, x) => ({
      x,
      y: 0,
      z: 0,
      type: 'body',
      functional: false,
      orientation: [1, 0, 0] as [number, number, number],
    })),
  };
}

const REPORT: StepReport = {
  iteration: 1,
  selected_bin: [0, 0, 0],
  emitter_bins: [],
  n_updates: 4,
  solutions_generated: 40,
  newly_occupied: [],
  occupied_count: 2,
  emitter_step_seconds: 0.01,
  wall_seconds: 0.05,
};

/** Scriptable stand-in for the HTTP client. */
class StubClient {
  grid = snapshot(0, [cell('0-0-0', true), cell('1-0-0', false)]);
  jobDocs: JobDoc[] = [];
  releaseJob: (() => void) | null = null;
  calls: string[] = [];

  async createSession() {
    this.calls.push('create');
    return { session_id: 'sess', grid: this.grid };
  }

  async getGrid() {
    this.calls.push('grid');
    return this.grid;
  }

  async evolveBin() {
    this.calls.push('evolve');
    return { job_id: 'job-1' };
  }

  async evolveRandom() {
    this.calls.push('evolve-random');
    return { job_id: 'job-1' };
  }

  async getJob(): Promise<JobDoc> {
    this.calls.push('job');
    const next = this.jobDocs.shift();
    if (!next) throw new Error('stub: no job docs left');
    return next;
  }

  async getSolution(_s: string, bin: string, interior = false) {
    this.calls.push(`solution:${bin}:${interior}`);
    return { solution: solution(`s-${bin}`, interior ? 3 : 5), interior };
  }

  async exportBlueprint(_s: string, bin: string) {
    this.calls.push(`export:${bin}`);
    return {
      version: 1,
      schema_version: 1,
      blocks: solution('x', 6).blocks.map(({ x, y, z, type }) => ({
        x, y, z, type, orientation: [1, 0, 0],
      })),
      metadata: {},
    };
  }

  async reinitialise() {
    this.calls.push('reinitialise');
    return { grid: snapshot(3, [cell('2-1-0', true)]) };
  }

  async patchConfig() {
    this.calls.push('patch');
    return { emitter: 'preference', n_steps: 3, safe_mode: true };
  }

  async getMetrics() {
    return { rows: [] };
  }
}

async function settled(): Promise<void> {
  // Drain the microtask queue so pending handler chains run.
  for (let i = 0; i < 20; i++) await Promise.resolve();
}

async function until(check: () => boolean, ms = 2000): Promise<void> {
  const deadline = Date.now() + ms;
  while (!check()) {
    if (Date.now() > deadline) throw new Error('condition never held');
    await new Promise((r) => setTimeout(r, 5));
  }
}

let root: HTMLElement;
let stub: StubClient;
let app: App;

beforeEach(async () => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById('app')!;
  stub = new StubClient();
  app = new App(root, stub as unknown as ApiClient, { seed: 1, pollIntervalMs: 1 });
  await app.start();
});

describe('App', () => {
  test('start renders a tile per grid cell and logs the session', () => {
    expect(root.querySelectorAll('.heatmap-cell')).toHaveLength(2);
    expect(app.log.lines().some((l) => l.includes('session sess created'))).toBe(true);
    expect(app.controls.evolveSelected.disabled).toBe(true);
  });

  test('clicking a tile previews its ship and enables export', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();
    expect(app.scene.blockCount()).toBe(5);
    expect(app.solution?.id).toBe('s-0-0-0');
    expect(root.querySelector<HTMLButtonElement>('#export-button')!.disabled).toBe(false);
    expect(root.querySelector('#properties')!.textContent).toContain('s-0-0-0');
  });

  test('interior toggle refetches the same bin with the interior flag', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();
    root.querySelector<HTMLInputElement>('#interior-toggle')!.checked = true;
    root.querySelector<HTMLInputElement>('#interior-toggle')!
      .dispatchEvent(new Event('change'));
    await settled();
    expect(stub.calls).toContain('solution:0-0-0:true');
    expect(app.scene.blockCount()).toBe(3);
  });

  test('the step flow disables controls while the job runs and refreshes after', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();

    // Hold the job in the running state until the test releases it.
    let release!: () => void;
    const gate = new Promise<void>((r) => (release = r));
    stub.getJob = async () => {
      await gate;
      return { job_id: 'job-1', status: 'done', report: REPORT, error: null };
    };
    stub.grid = snapshot(1, [cell('0-0-0', true), cell('1-0-0', true)]);

    app.controls.evolveSelected.click();
    await settled();
    expect(app.controls.busy).toBe(true);
    expect(app.controls.evolveRandom.disabled).toBe(true);
    expect(app.controls.reinitialise.disabled).toBe(true);

    release();
    await until(() => !app.controls.busy);
    expect(app.snapshot?.iteration).toBe(1);
    expect(stub.calls.filter((c) => c === 'grid')).toHaveLength(1);
    expect(app.log.lines().some((l) => l.includes('iteration 1: 4 updates'))).toBe(true);
  });

  test('a failed job surfaces in the log and re-enables the controls', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();
    stub.jobDocs = [
      { job_id: 'job-1', status: 'error', report: null, error: 'bin is unoccupied' },
    ];
    app.controls.evolveSelected.click();
    await until(() => !app.controls.busy);
    expect(app.log.lines().some((l) => l.includes('bin is unoccupied'))).toBe(true);
    expect(app.controls.evolveRandom.disabled).toBe(false);
  });

  test('reinitialise swaps in the fresh grid and clears the selection', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();
    app.controls.reinitialise.click();
    await until(() => !app.controls.busy);
    expect(app.heatmap.selectedBin).toBeNull();
    expect(root.querySelectorAll('[data-bin="2-1-0"]')).toHaveLength(1);
    expect(app.log.lines().some((l) => l.includes('reinitialised'))).toBe(true);
  });

  test('export goes through the client and lands in the log', async () => {
    root.querySelector<HTMLElement>('[data-bin="0-0-0"]')!.click();
    await settled();
    root.querySelector<HTMLButtonElement>('#export-button')!.click();
    await settled();
    expect(stub.calls).toContain('export:0-0-0');
    expect(app.log.lines().some((l) => l.includes('exported 0-0-0: 6 blocks'))).toBe(true);
  });

  test('study mode hides the random button from the start', async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const studyStub = new StubClient();
    studyStub.grid = snapshot(0, [cell('0-0-0', true)], 'study');
    const studyApp = new App(
      document.getElementById('app')!,
      studyStub as unknown as ApiClient,
      { mode: 'study', pollIntervalMs: 1 },
    );
    await studyApp.start();
    expect(studyApp.controls.evolveRandom.classList.contains('hidden')).toBe(true);
  });
});
