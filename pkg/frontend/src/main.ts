import { ApiClient } from './api.js';
import { App } from './app.js';

const params = new URLSearchParams(window.location.search);
const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');

const app = new App(root, new ApiClient(params.get('api') ?? ''), {
  mode: params.get('mode') ?? 'user',
  seed: params.has('seed') ? Number(params.get('seed')) : undefined,
});

app.start().catch((err) => {
  root.innerHTML = `<p class="fatal">session failed to start: ${(err as Error).message}</p>`;
});
