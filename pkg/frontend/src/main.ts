/** Entry point: dataset upload, document bootstrap, canvas mount. */

import { ApiClient } from './api.js';
import { CanvasView } from './canvas.js';

async function boot(): Promise<void> {
  const api = new ApiClient('');
  const app = document.getElementById('app');
  if (!app) throw new Error('missing #app element');

  const picker = document.createElement('div');
  picker.className = 'dataset-picker';
  picker.innerHTML = `
    <h1>vizcanvas</h1>
    <p>Upload a CSV to start exploring. Click anywhere on the canvas,
       type a hypothesis, and press generate.</p>
    <input type="file" accept=".csv,text/csv" class="csv-input">
    <div class="picker-status"></div>
    <ul class="suggestions"></ul>
  `;
  app.appendChild(picker);
  const input = picker.querySelector<HTMLInputElement>('.csv-input')!;
  const status = picker.querySelector<HTMLElement>('.picker-status')!;

  input.addEventListener('change', async () => {
    const file = input.files?.[0];
    if (!file) return;
    status.textContent = 'ingesting...';
    try {
      const uploaded = await api.uploadDataset(file, file.name);
      const doc = await api.createDocument(uploaded.dataset_id);
      const suggestions = await api.suggestions(uploaded.dataset_id, 4);
      status.textContent =
        `${uploaded.summary.name}: ${uploaded.summary.row_count} rows, ` +
        `${uploaded.summary.columns.length} columns. Try one of these:`;
      const list = picker.querySelector<HTMLElement>('.suggestions')!;
      list.replaceChildren(
        ...suggestions.map((text) => {
          const item = document.createElement('li');
          item.textContent = text;
          return item;
        }),
      );

      const canvasHost = document.createElement('div');
      canvasHost.className = 'canvas-host';
      app.appendChild(canvasHost);
      new CanvasView(api, doc, canvasHost);
    } catch (error) {
      status.textContent = `upload failed: ${String(error)}`;
    }
  });
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  void boot();
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', () => void boot());
}
