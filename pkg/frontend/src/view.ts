import type { UiState } from './state';
import { exportLock } from './state';
import type { FontInfo } from './types';

const FALLBACK_STACK = 'Georgia, "Times New Roman", serif';

export interface ViewHandlers {
  onLock(fontId: number): void;
}

/** Render the preview list, distribution panel, lock bar, and banner. */
export function render(
  root: HTMLElement,
  state: UiState,
  fonts: FontInfo[],
  handlers: ViewHandlers,
): void {
  renderBanner(root.querySelector('.banner')!, state);
  renderPreviews(root.querySelector('.previews')!, state, handlers);
  renderDistribution(root.querySelector('.distribution')!, state, fonts);
  renderLock(root.querySelector('.lock-bar')!, state);
}

function renderBanner(mount: Element, state: UiState): void {
  mount.textContent = state.banner ?? '';
  (mount as HTMLElement).style.display = state.banner ? 'block' : 'none';
}

function renderPreviews(mount: Element, state: UiState, handlers: ViewHandlers): void {
  mount.textContent = '';
  if (!state.lastResponse || state.draftText.trim() === '') return;
  for (const entry of state.lastResponse.top) {
    const card = document.createElement('div');
    card.className = 'preview' + (state.lockedFont === entry.font_id ? ' locked' : '');
    card.dataset.fontId = String(entry.font_id);

    const sample = document.createElement('div');
    sample.className = 'sample';
    sample.style.fontFamily = `"${entry.css}", ${FALLBACK_STACK}`;
    sample.textContent = state.draftText;

    const meta = document.createElement('div');
    meta.className = 'meta';

    const name = document.createElement('span');
    name.className = 'font-name';
    name.textContent = entry.name;

    const score = document.createElement('span');
    score.className = 'score';
    score.textContent = entry.score.toFixed(2);

    const bar = document.createElement('div');
    bar.className = 'score-bar';
    const fill = document.createElement('div');
    fill.className = 'score-fill';
    fill.style.width = `${Math.round(entry.score * 100)}%`;
    bar.appendChild(fill);

    const lockButton = document.createElement('button');
    lockButton.className = 'lock-button';
    lockButton.textContent = state.lockedFont === entry.font_id ? 'Locked' : 'Lock';
    lockButton.addEventListener('click', () => handlers.onLock(entry.font_id));

    meta.append(name, score, lockButton);
    card.append(sample, meta, bar);
    mount.appendChild(card);
  }
}

function renderDistribution(mount: Element, state: UiState, fonts: FontInfo[]): void {
  mount.textContent = '';
  if (!state.lastResponse) return;
  const dist = state.lastResponse.distribution;
  const chart = document.createElement('div');
  chart.className = 'bars';
  dist.forEach((p, fontId) => {
    const column = document.createElement('div');
    column.className = 'bar-column';
    column.title = `${fonts[fontId]?.name ?? `F${fontId}`}: ${p.toFixed(3)}`;

    const bar = document.createElement('div');
    bar.className = 'bar';
    bar.style.height = `${Math.round(p * 200)}px`;
    bar.dataset.prob = p.toFixed(3);

    const label = document.createElement('div');
    label.className = 'bar-label';
    label.textContent = `F${fontId}`;

    column.append(bar, label);
    chart.appendChild(column);
  });
  const sum = dist.reduce((a, b) => a + b, 0);
  const annotation = document.createElement('div');
  annotation.className = 'sum-annotation';
  annotation.textContent = `sum = ${sum.toFixed(2)}`;
  mount.append(chart, annotation);
}

function renderLock(mount: Element, state: UiState): void {
  mount.textContent = '';
  const payload = exportLock(state);
  if (!payload) return;
  const label = document.createElement('span');
  label.textContent = `Locked: ${payload.font_name}`;

  const json = JSON.stringify(payload);
  const copy = document.createElement('button');
  copy.className = 'copy-export';
  copy.textContent = 'Copy choice as JSON';
  copy.dataset.export = json;
  copy.addEventListener('click', () => {
    void navigator.clipboard?.writeText(json);
  });
  mount.append(label, copy);
}
