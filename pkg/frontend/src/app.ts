// Browser bootstrap: wires the session to the DOM and the keyboard.
// Keys: j/k move, a accept, r reject, s skip, n/p page.

import { RegistryClient } from './api.js';
import { renderClusters, renderError, renderQueue, renderStatus } from './render.js';
import { ReviewSession } from './state.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function startApp(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get('api') ?? 'http://127.0.0.1:8004';
  const client = new RegistryClient(baseUrl);
  const session = new ReviewSession(client);

  const queueEl = el<HTMLDivElement>('queue');
  const clustersEl = el<HTMLDivElement>('clusters');
  const bannerEl = el<HTMLDivElement>('banner');
  const statusEl = el<HTMLSpanElement>('status');
  const editorEl = el<HTMLInputElement>('editor');
  const bandEl = el<HTMLSelectElement>('band');
  const minScoreEl = el<HTMLInputElement>('min-score');

  editorEl.value = window.localStorage.getItem('editor') ?? '';

  function paint(): void {
    const view = session.view();
    bannerEl.innerHTML = view.error ? renderError(view.error) : '';
    queueEl.innerHTML =
      view.status === 'loading'
        ? '<p class="empty">Loading…</p>'
        : renderQueue(view.candidates, view.selected, view.pending, view.rowErrors);
    const selected = session.selectedCandidate();
    const highlight = new Set<string>(selected ? [selected.left, selected.right] : []);
    clustersEl.innerHTML = renderClusters(view.clusters, highlight);
    statusEl.textContent = renderStatus(view.total, view.filters.offset ?? 0, view.candidates.length);
    document.querySelector('.candidate.selected')?.scrollIntoView({ block: 'nearest' });
  }

  async function refresh(): Promise<void> {
    paint();
    await session.refresh();
    paint();
  }

  async function decide(verdict: 'accept' | 'reject'): Promise<void> {
    window.localStorage.setItem('editor', editorEl.value);
    paint(); // show the optimistic/pending state
    await session.decide(verdict, editorEl.value.trim());
    paint();
  }

  document.addEventListener('keydown', (event) => {
    if (event.target instanceof HTMLInputElement || event.target instanceof HTMLSelectElement) return;
    switch (event.key) {
      case 'j':
      case 'ArrowDown':
        session.move(1);
        paint();
        break;
      case 'k':
      case 'ArrowUp':
        session.move(-1);
        paint();
        break;
      case 'a':
        void decide('accept');
        break;
      case 'r':
        void decide('reject');
        break;
      case 's':
        session.skip();
        paint();
        break;
      case 'n':
        if (session.nextPage()) void refresh();
        break;
      case 'p':
        if (session.prevPage()) void refresh();
        break;
      default:
        return;
    }
    event.preventDefault();
  });

  queueEl.addEventListener('click', (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>('.candidate');
    if (!row) return;
    const index = session.view().candidates.findIndex(
      (c) => c.candidate_id === row.dataset.candidate,
    );
    if (index >= 0) {
      session.move(index - session.view().selected);
      paint();
    }
  });

  bannerEl.addEventListener('click', (event) => {
    if ((event.target as HTMLElement).dataset.action === 'retry') void refresh();
  });

  bandEl.addEventListener('change', () => {
    session.setFilters({ band: bandEl.value || undefined });
    void refresh();
  });
  minScoreEl.addEventListener('change', () => {
    const value = parseFloat(minScoreEl.value);
    session.setFilters({ minScore: Number.isNaN(value) ? undefined : value });
    void refresh();
  });

  void refresh();
}

startApp();
