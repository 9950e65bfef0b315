// Entry point: wire the store to the page. The service base URL and graph id
// come from query parameters so one build can point at any backend:
//   index.html?api=http://127.0.0.1:8000&graph=default

import { ApiClient } from './api.js';
import { render } from './render.js';
import { ExplorerStore } from './store.js';

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get('api') ?? 'http://127.0.0.1:8000';
  const graphId = params.get('graph') ?? 'default';
  const container = document.getElementById('app');
  if (!container) throw new Error('missing #app container');

  const store = new ExplorerStore(new ApiClient(baseUrl), graphId);
  store.onChange(() => render(store, container));
  try {
    await store.init();
  } catch (error) {
    container.textContent = `failed to load graph ${graphId}: ${String(error)}`;
  }
}

void boot();
