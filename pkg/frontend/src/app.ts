import { ApiClient } from './api.js';
import type { GridCell, GridSnapshot, SolutionDoc } from './api.js';
import { ControlsPanel } from './controls.js';
import { GridHeatmap, METRICS } from './heatmap.js';
import type { MetricName } from './heatmap.js';
import { LogPanel } from './log.js';
import { pollJob } from './poll.js';
import { VoxelScene } from './scene.js';

export interface AppOptions {
  mode?: string;
  seed?: number;
  pollIntervalMs?: number;
  config?: Record<string, unknown>;
}

const PANEL_TEMPLATE = `
  <header class="topbar">
    <h1>voxelites</h1>
    <span id="session-label"></span>
    <label class="metric-label">Metric
      <select id="metric-select"></select>
    </label>
  </header>
  <main class="layout">
    <section class="pane grid-pane">
      <h2>Population</h2>
      <div id="heatmap"></div>
    </section>
    <section class="pane preview-pane">
      <h2>Preview</h2>
      <canvas id="preview-canvas" width="480" height="360"></canvas>
      <div class="preview-row">
        <label><input id="interior-toggle" type="checkbox"> Show insides</label>
        <button id="export-button" type="button" disabled>Export blueprint</button>
      </div>
      <dl id="properties" class="properties"></dl>
    </section>
    <section class="pane controls-pane">
      <h2>Controls</h2>
      <div id="controls"></div>
    </section>
    <section class="pane log-pane">
      <h2>Log</h2>
      <div id="log"></div>
    </section>
  </main>
`;

/**
 * The session UI: archive heatmap, 3D preview with properties, the
 * population controls, and a log. All state shown is derived from the
 * last server snapshot plus one pending-job flag; every mutation goes
 * through the HTTP API and re-reads the grid afterwards.
 */
export class App {
  readonly client: ApiClient;
  readonly heatmap: GridHeatmap;
  readonly controls: ControlsPanel;
  readonly log: LogPanel;
  readonly scene: VoxelScene;

  sessionId = '';
  snapshot: GridSnapshot | null = null;
  solution: SolutionDoc | null = null;
  interiorView = false;

  private readonly mode: string;
  private readonly seed: number | undefined;
  private readonly pollIntervalMs: number;
  private readonly config: Record<string, unknown>;
  private readonly exportButton: HTMLButtonElement;
  private readonly interiorToggle: HTMLInputElement;
  private readonly properties: HTMLElement;
  private readonly sessionLabel: HTMLElement;
  private nSteps = 3;

  constructor(root: HTMLElement, client: ApiClient, options: AppOptions = {}) {
    this.client = client;
    this.mode = options.mode ?? 'user';
    this.seed = options.seed;
    this.pollIntervalMs = options.pollIntervalMs ?? 500;
    this.config = options.config ?? {};
    root.innerHTML = PANEL_TEMPLATE;

    const byId = <T extends HTMLElement>(id: string): T => {
      const el = root.querySelector<T>(`#${id}`);
      if (!el) throw new Error(`app: missing #${id}`);
      return el;
    };

    this.sessionLabel = byId('session-label');
    this.properties = byId('properties');
    this.exportButton = byId<HTMLButtonElement>('export-button');
    this.interiorToggle = byId<HTMLInputElement>('interior-toggle');
    this.log = new LogPanel(byId('log'));
    this.scene = new VoxelScene(byId<HTMLCanvasElement>('preview-canvas'));
    this.heatmap = new GridHeatmap(byId('heatmap'), (cell) => {
      void this.showSolution(cell);
    });
    this.controls = new ControlsPanel(byId('controls'), {
      onEvolveSelected: () => void this.evolveSelected(),
      onEvolveRandom: () => void this.evolveRandom(),
      onReinitialise: () => void this.reinitialise(),
      onSafeMode: (enabled) => void this.patchSafeMode(enabled),
      onIterations: (n) => void this.patchIterations(n),
    });

    const metricSelect = byId<HTMLSelectElement>('metric-select');
    for (const metric of METRICS) {
      const option = document.createElement('option');
      option.value = metric;
      option.textContent = metric;
      metricSelect.appendChild(option);
    }
    metricSelect.addEventListener('change', () => {
      this.heatmap.setMetric(metricSelect.value as MetricName);
    });

    this.interiorToggle.addEventListener('change', () => {
      this.interiorView = this.interiorToggle.checked;
      const cell = this.heatmap.selectedCell();
      if (cell) void this.showSolution(cell);
    });
    this.exportButton.addEventListener('click', () => void this.exportSelected());
  }

  /** Create the session and render the initial grid. */
  async start(): Promise<void> {
    const created = await this.client.createSession(this.mode, this.seed, {
      n_steps: this.nSteps,
      ...this.config,
    });
    this.sessionId = created.session_id;
    this.applySnapshot(created.grid);
    this.controls.setMode(created.grid.mode);
    this.sessionLabel.textContent =
      `session ${this.sessionId} · mode ${created.grid.mode} · emitter ${created.grid.emitter}`;
    this.log.append(
      `session ${this.sessionId} created: ` +
      `${created.grid.cells.filter((c) => c.occupied).length} occupied bins`,
    );
  }

  private applySnapshot(snapshot: GridSnapshot): void {
    this.snapshot = snapshot;
    this.nSteps = snapshot.n_steps;
    this.heatmap.render(snapshot);
    this.controls.setHasSelection(this.heatmap.selectedCell() !== null);
  }

  async refreshGrid(): Promise<void> {
    this.applySnapshot(await this.client.getGrid(this.sessionId));
  }

  /** Fetch and display a bin's elite; hulled by default, raw inside view on toggle. */
  async showSolution(cell: GridCell): Promise<void> {
    this.controls.setHasSelection(true);
    try {
      const doc = await this.client.getSolution(this.sessionId, cell.bin, this.interiorView);
      this.solution = doc.solution;
      this.scene.showBlocks(doc.solution.blocks);
      this.renderProperties(doc.solution);
      this.exportButton.disabled = false;
    } catch (err) {
      this.log.error(`fetch ${cell.bin} failed: ${(err as Error).message}`);
    }
  }

  private renderProperties(solution: SolutionDoc): void {
    const rows: Array<[string, string]> = [
      ['id', solution.id],
      ['feasible', String(solution.feasible)],
      ['fitness', solution.fitness.toFixed(3)],
      ['violation', solution.violation.toFixed(2)],
      ['BC', solution.bc.map((v) => v.toFixed(2)).join(', ')],
      ['axes', solution.axes.join(' × ')],
      ['blocks', String(solution.block_count)],
      ['genotype length', String(solution.genotype_length)],
    ];
    this.properties.innerHTML = rows
      .map(([k, v]) => `<dt>${k}</dt><dd>${v}</dd>`)
      .join('');
  }

  /** The numbered interaction loop: post evolve, poll, re-read the grid. */
  private async runStepFlow(start: () => Promise<{ job_id: string }>): Promise<void> {
    if (this.controls.busy) return;
    this.controls.setBusy(true);
    try {
      const { job_id } = await start();
      const report = await pollJob(
        this.client,
        this.sessionId,
        job_id,
        this.pollIntervalMs,
      );
      await this.refreshGrid();
      this.log.append(
        `iteration ${report.iteration}: ${report.n_updates} updates, ` +
        `${report.solutions_generated} solutions, ` +
        `${report.occupied_count} bins occupied ` +
        `(${report.wall_seconds.toFixed(2)}s)`,
      );
      const cell = this.heatmap.selectedCell();
      if (cell) await this.showSolution(cell);
    } catch (err) {
      this.log.error((err as Error).message);
    } finally {
      this.controls.setBusy(false);
    }
  }

  async evolveSelected(): Promise<void> {
    const cell = this.heatmap.selectedCell();
    if (!cell) {
      this.log.error('select an occupied bin first');
      return;
    }
    await this.runStepFlow(() => this.client.evolveBin(this.sessionId, cell.index));
  }

  async evolveRandom(): Promise<void> {
    await this.runStepFlow(() => this.client.evolveRandom(this.sessionId));
  }

  async reinitialise(): Promise<void> {
    if (this.controls.busy) return;
    this.controls.setBusy(true);
    try {
      const { grid } = await this.client.reinitialise(this.sessionId);
      this.heatmap.select(null);
      this.applySnapshot(grid);
      this.log.append('population reinitialised');
    } catch (err) {
      this.log.error((err as Error).message);
    } finally {
      this.controls.setBusy(false);
    }
  }

  async exportSelected(): Promise<void> {
    const cell = this.heatmap.selectedCell();
    if (!cell) return;
    try {
      const blueprint = await this.client.exportBlueprint(this.sessionId, cell.bin);
      this.offerDownload(blueprint, `ship-${cell.bin}.json`);
      this.log.append(
        `exported ${cell.bin}: ${blueprint.blocks.length} blocks (schema v${blueprint.schema_version})`,
      );
    } catch (err) {
      this.log.error(`export failed: ${(err as Error).message}`);
    }
  }

  private offerDownload(doc: unknown, filename: string): void {
    if (typeof URL.createObjectURL !== 'function') return; // headless DOM
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: 'application/json' });
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement('a');
    anchor.href = url;
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(url);
  }

  private async patchSafeMode(enabled: boolean): Promise<void> {
    try {
      await this.client.patchConfig(this.sessionId, { safe_mode: enabled });
      this.log.append(`safe mode ${enabled ? 'on' : 'off'}`);
    } catch (err) {
      this.log.error(`safe mode change rejected: ${(err as Error).message}`);
      this.controls.safeMode.checked = !enabled; // revert to server truth
    }
  }

  private async patchIterations(n: number): Promise<void> {
    try {
      await this.client.patchConfig(this.sessionId, { n_steps: n });
      this.nSteps = n;
      this.log.append(`evolution iterations set to ${n}`);
    } catch (err) {
      this.log.error(`iterations change rejected: ${(err as Error).message}`);
    }
  }
}
