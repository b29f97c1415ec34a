/** Typed client for the voxelites session service. */

export interface ElitePreview {
  id: string;
  fitness: number;
  bc: number[];
}

export interface GridCell {
  index: [number, number, number];
  bin: string;
  depth: number;
  bounds: [number, number, number, number];
  occupied: boolean;
  n_feasible: number;
  n_infeasible: number;
  age: number;
  elite: ElitePreview | null;
  mean_fitness: number | null;
  min_violation: number | null;
}

export interface GridSnapshot {
  iteration: number;
  mode: string;
  n_steps: number;
  emitter: string;
  rect: [number, number, number, number];
  base_resolution: [number, number];
  coverage: number;
  stats: Record<string, unknown>;
  cells: GridCell[];
}

export interface StepReport {
  iteration: number;
  selected_bin: number[] | null;
  emitter_bins: number[][];
  n_updates: number;
  solutions_generated: number;
  newly_occupied: number[][];
  occupied_count: number;
  emitter_step_seconds: number;
  wall_seconds: number;
}

export interface JobDoc {
  job_id: string;
  status: 'running' | 'done' | 'error';
  report: StepReport | null;
  error: string | null;
}

export interface SolutionBlock {
  x: number;
  y: number;
  z: number;
  type: string;
  functional: boolean;
  orientation: [number, number, number];
}

export interface SolutionDoc {
  id: string;
  feasible: boolean;
  fitness: number;
  violation: number;
  bc: number[];
  genotype_length: number;
  axes: [number, number, number];
  descriptors: Record<string, number>;
  block_count: number;
  blocks: SolutionBlock[];
}

export interface BlueprintDoc {
  version: number;
  schema_version: number;
  blocks: Array<{ x: number; y: number; z: number; type: string; orientation: number[] }>;
  metadata: Record<string, unknown>;
}

export interface MetricsRow {
  iteration: number;
  event: string;
  selected_bin: string;
  emitter_kind: string;
  solutions_generated: number;
  mean_complexity: number | null;
  occupied_bin_count: number;
  emitter_step_seconds: number;
}

export interface CreateSessionResult {
  session_id: string;
  grid: GridSnapshot;
}

export interface EngineOverrides {
  n_steps?: number;
  initial_population?: number;
  emitter?: string | Record<string, unknown>;
  safe_mode?: boolean;
  [key: string]: unknown;
}

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(`${status}: ${detail}`);
    this.status = status;
  }
}

/** "i-j-depth" address of a grid cell, as the service expects it. */
export function binAddress(index: [number, number, number]): string {
  return index.join('-');
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl = '', fetchFn: typeof fetch = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, doc.detail ?? response.statusText);
    }
    return doc as T;
  }

  createSession(
    mode: string,
    seed?: number,
    config?: EngineOverrides,
  ): Promise<CreateSessionResult> {
    return this.request('POST', '/sessions', { mode, seed, config });
  }

  getGrid(sessionId: string): Promise<GridSnapshot> {
    return this.request('GET', `/sessions/${sessionId}/grid`);
  }

  evolveBin(sessionId: string, index: [number, number, number]): Promise<{ job_id: string }> {
    return this.request('POST', `/sessions/${sessionId}/evolve`, { bin: index });
  }

  evolveRandom(sessionId: string): Promise<{ job_id: string }> {
    return this.request('POST', `/sessions/${sessionId}/evolve`, { random: true });
  }

  getJob(sessionId: string, jobId: string): Promise<JobDoc> {
    return this.request('GET', `/sessions/${sessionId}/jobs/${jobId}`);
  }

  getSolution(
    sessionId: string,
    bin: string,
    interior = false,
  ): Promise<{ solution: SolutionDoc; interior: boolean }> {
    const query = interior ? '?interior=true' : '';
    return this.request('GET', `/sessions/${sessionId}/solutions/${bin}${query}`);
  }

  exportBlueprint(sessionId: string, bin: string): Promise<BlueprintDoc> {
    return this.request('POST', `/sessions/${sessionId}/export/${bin}`);
  }

  getMetrics(sessionId: string): Promise<{ rows: MetricsRow[] }> {
    return this.request('GET', `/sessions/${sessionId}/metrics`);
  }

  patchConfig(
    sessionId: string,
    patch: Record<string, unknown>,
  ): Promise<{ emitter: string; n_steps: number; safe_mode: boolean }> {
    return this.request('PATCH', `/sessions/${sessionId}/config`, patch);
  }

  reinitialise(sessionId: string): Promise<{ grid: GridSnapshot }> {
    return this.request('POST', `/sessions/${sessionId}/reinitialise`);
  }
}
