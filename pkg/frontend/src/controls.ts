export interface ControlsHandlers {
  onEvolveSelected: () => void;
  onEvolveRandom: () => void;
  onReinitialise: () => void;
  onSafeMode: (enabled: boolean) => void;
  onIterations: (n: number) => void;
}

/**
 * Population controls. Every mutating control is disabled while a step
 * is in flight; study mode hides the random button and reveals the
 * phase progress bar.
 */
export class ControlsPanel {
  private readonly root: HTMLElement;
  readonly evolveSelected: HTMLButtonElement;
  readonly evolveRandom: HTMLButtonElement;
  readonly reinitialise: HTMLButtonElement;
  readonly safeMode: HTMLInputElement;
  readonly iterations: HTMLInputElement;
  private readonly iterationsValue: HTMLElement;
  private readonly busyIndicator: HTMLElement;
  private readonly progressWrap: HTMLElement;
  private readonly progressFill: HTMLElement;
  private readonly progressLabel: HTMLElement;

  constructor(root: HTMLElement, handlers: ControlsHandlers) {
    this.root = root;
    root.classList.add('controls');
    root.innerHTML = `
      <div class="controls-row">
        <button id="evolve-selected" type="button">Evolve selected</button>
        <button id="evolve-random" type="button">Evolve random</button>
        <button id="reinitialise" type="button">Reinitialise</button>
        <span id="busy-indicator" class="busy hidden">evolving…</span>
      </div>
      <div class="controls-row">
        <label><input id="safe-mode" type="checkbox" checked> Safe mode</label>
        <label class="slider-label">
          Evolution iterations
          <input id="iterations" type="range" min="0" max="10" step="1" value="3">
          <span id="iterations-value">3</span>
        </label>
      </div>
      <div id="study-progress" class="progress hidden">
        <div class="progress-track"><div id="progress-fill" class="progress-fill"></div></div>
        <span id="progress-label"></span>
      </div>
    `;
    this.evolveSelected = this.byId<HTMLButtonElement>('evolve-selected');
    this.evolveRandom = this.byId<HTMLButtonElement>('evolve-random');
    this.reinitialise = this.byId<HTMLButtonElement>('reinitialise');
    this.safeMode = this.byId<HTMLInputElement>('safe-mode');
    this.iterations = this.byId<HTMLInputElement>('iterations');
    this.iterationsValue = this.byId('iterations-value');
    this.busyIndicator = this.byId('busy-indicator');
    this.progressWrap = this.byId('study-progress');
    this.progressFill = this.byId('progress-fill');
    this.progressLabel = this.byId('progress-label');

    this.evolveSelected.addEventListener('click', handlers.onEvolveSelected);
    this.evolveRandom.addEventListener('click', handlers.onEvolveRandom);
    this.reinitialise.addEventListener('click', handlers.onReinitialise);
    this.safeMode.addEventListener('change', () => handlers.onSafeMode(this.safeMode.checked));
    this.iterations.addEventListener('input', () => {
      this.iterationsValue.textContent = this.iterations.value;
      handlers.onIterations(Number(this.iterations.value));
    });
    this.apply();
  }

  private byId<T extends HTMLElement = HTMLElement>(id: string): T {
    const el = this.root.querySelector<T>(`#${id}`);
    if (!el) throw new Error(`controls: missing #${id}`);
    return el;
  }

  private busyFlag = false;
  private hasSelection = false;

  get busy(): boolean {
    return this.busyFlag;
  }

  /** Disable mutating controls while a step runs. */
  setBusy(busy: boolean): void {
    this.busyFlag = busy;
    this.apply();
  }

  /** Selected-bin evolution needs a selection to act on. */
  setHasSelection(has: boolean): void {
    this.hasSelection = has;
    this.apply();
  }

  /** Control state is a pure function of (busy, selection) flags. */
  private apply(): void {
    this.evolveSelected.disabled = this.busyFlag || !this.hasSelection;
    this.evolveRandom.disabled = this.busyFlag;
    this.reinitialise.disabled = this.busyFlag;
    this.safeMode.disabled = this.busyFlag;
    this.iterations.disabled = this.busyFlag;
    this.busyIndicator.classList.toggle('hidden', !this.busyFlag);
  }

  /** Study sessions only evolve from the selected ship. */
  setMode(mode: string): void {
    const study = mode === 'study';
    this.evolveRandom.classList.toggle('hidden', study);
    this.progressWrap.classList.toggle('hidden', !study);
  }

  setProgress(done: number, total: number, label = ''): void {
    const pct = total > 0 ? Math.min(100, (100 * done) / total) : 0;
    this.progressFill.style.width = `${pct}%`;
    this.progressLabel.textContent = label || `${done} / ${total}`;
  }
}
