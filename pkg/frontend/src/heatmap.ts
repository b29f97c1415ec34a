import type { GridCell, GridSnapshot } from './api.js';

export type MetricName = 'fitness' | 'occupancy' | 'age';

export const METRICS: MetricName[] = ['fitness', 'occupancy', 'age'];

/** Value of the active metric for one cell, or null when undefined. */
export function metricValue(cell: GridCell, metric: MetricName): number | null {
  if (!cell.occupied) return null;
  switch (metric) {
    case 'fitness':
      return cell.elite ? cell.elite.fitness : cell.mean_fitness;
    case 'occupancy':
      return cell.n_feasible + cell.n_infeasible;
    case 'age':
      return cell.age;
  }
}

/** Blue-to-amber ramp over [0, 1]; t outside the range is clamped. */
export function heatColour(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const hue = 220 - 180 * clamped; // 220 (blue) down to 40 (amber)
  const light = 28 + 34 * clamped;
  return `hsl(${hue.toFixed(0)}, 70%, ${light.toFixed(0)}%)`;
}

/**
 * Archive heatmap. Every live bin becomes an absolutely positioned tile
 * inside the container, scaled from its behaviour-space bounds, so
 * subdivided bins appear as quadrant tiles of their parent without any
 * special casing. Tiles are coloured by the active metric and clicking
 * one notifies the owner; recolouring on a metric switch reuses the last
 * snapshot rather than refetching.
 */
export class GridHeatmap {
  private readonly container: HTMLElement;
  private readonly onSelect: (cell: GridCell) => void;
  private snapshot: GridSnapshot | null = null;
  private metric: MetricName = 'fitness';
  private selected: string | null = null;

  constructor(container: HTMLElement, onSelect: (cell: GridCell) => void) {
    this.container = container;
    this.container.classList.add('heatmap');
    this.onSelect = onSelect;
  }

  get activeMetric(): MetricName {
    return this.metric;
  }

  get selectedBin(): string | null {
    return this.selected;
  }

  /** The selected cell in the current snapshot, if it is still live. */
  selectedCell(): GridCell | null {
    if (!this.snapshot || this.selected === null) return null;
    return this.snapshot.cells.find((c) => c.bin === this.selected) ?? null;
  }

  render(snapshot: GridSnapshot): void {
    this.snapshot = snapshot;
    // A subdivided bin retires its address; drop a stale selection.
    if (this.selected && !snapshot.cells.some((c) => c.bin === this.selected)) {
      this.selected = null;
    }
    this.redraw();
  }

  setMetric(metric: MetricName): void {
    this.metric = metric;
    this.redraw();
  }

  select(bin: string | null): void {
    this.selected = bin;
    this.redraw();
  }

  private redraw(): void {
    this.container.textContent = '';
    if (!this.snapshot) return;

    const [xLo, xHi, yLo, yHi] = this.snapshot.rect;
    const values = this.snapshot.cells
      .map((c) => metricValue(c, this.metric))
      .filter((v): v is number => v !== null);
    const lo = values.length ? Math.min(...values) : 0;
    const hi = values.length ? Math.max(...values) : 1;
    const span = hi - lo || 1;

    for (const cell of this.snapshot.cells) {
      const tile = document.createElement('div');
      tile.className = 'heatmap-cell';
      tile.dataset.bin = cell.bin;
      tile.dataset.depth = String(cell.depth);

      const [bxLo, bxHi, byLo, byHi] = cell.bounds;
      tile.style.left = `${(100 * (bxLo - xLo)) / (xHi - xLo)}%`;
      tile.style.bottom = `${(100 * (byLo - yLo)) / (yHi - yLo)}%`;
      tile.style.width = `${(100 * (bxHi - bxLo)) / (xHi - xLo)}%`;
      tile.style.height = `${(100 * (byHi - byLo)) / (yHi - yLo)}%`;

      const value = metricValue(cell, this.metric);
      if (value === null) {
        tile.classList.add('unoccupied');
      } else {
        tile.style.backgroundColor = heatColour((value - lo) / span);
        tile.title = `${cell.bin} · ${this.metric} ${value.toFixed(3)}`;
      }
      if (cell.bin === this.selected) {
        tile.classList.add('selected');
      }
      if (cell.occupied) {
        tile.addEventListener('click', () => {
          this.select(cell.bin);
          this.onSelect(cell);
        });
      }
      this.container.appendChild(tile);
    }
  }
}
