/** Append-only log panel; newest entry last, view pinned to the tail. */
export class LogPanel {
  private readonly container: HTMLElement;

  constructor(container: HTMLElement) {
    this.container = container;
    this.container.classList.add('log');
  }

  append(message: string, kind: 'info' | 'error' = 'info'): void {
    const line = document.createElement('div');
    line.className = `log-line ${kind}`;
    const stamp = new Date().toLocaleTimeString();
    line.textContent = `[${stamp}] ${message}`;
    this.container.appendChild(line);
    this.container.scrollTop = this.container.scrollHeight;
  }

  error(message: string): void {
    this.append(message, 'error');
  }

  lines(): string[] {
    return Array.from(this.container.children, (c) => c.textContent ?? '');
  }
}
