/** DOM wiring. Every mutation round-trips through the service and the
 * whole screen re-renders from the response; there is no client-side
 * firing or analysis logic. */

import { Api, ServiceError } from './api.js';
import { renderDiagram } from './diagram.js';
import type { SessionState, TransitionInfo } from './types.js';
import {
  choiceOptions,
  enabledNames,
  legalizeSummary,
  logLines,
  markingBadges,
  needsChoiceDialog,
  replayRows,
} from './viewmodel.js';

const api = new Api('');

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let sessionId: string | null = null;

function showError(message: string): void {
  const banner = $('error-banner');
  banner.textContent = message;
  banner.classList.remove('hidden');
}

function clearError(): void {
  $('error-banner').classList.add('hidden');
}

async function guard<T>(work: () => Promise<T>): Promise<T | null> {
  clearError();
  try {
    return await work();
  } catch (e) {
    showError(e instanceof ServiceError ? e.detail : String(e));
    return null;
  }
}

function renderMarking(state: SessionState): void {
  $('marking').innerHTML = markingBadges(state)
    .map(
      (b) =>
        `<span class="badge${b.count > 0 ? ' filled' : ''}">` +
        `${b.place}: ${b.count}</span>`,
    )
    .join('');
}

function renderTransitions(state: SessionState): void {
  const host = $('transitions');
  host.innerHTML = '';
  for (const t of state.transitions) {
    const btn = document.createElement('button');
    btn.textContent = t.name;
    btn.disabled = !t.enabled;
    btn.className = t.enabled ? 'transition enabled' : 'transition';
    btn.addEventListener('click', () => onFire(t));
    host.appendChild(btn);
  }
}

function renderLog(state: SessionState): void {
  $('firing-log').innerHTML = logLines(state)
    .map((line) => `<li>${line}</li>`)
    .join('');
}

async function renderHistory(): Promise<void> {
  if (!sessionId) return;
  const h = await guard(() => api.history(sessionId!));
  if (!h) return;
  $('diagram').innerHTML = renderDiagram(h.diagram);
  $('term').textContent = h.term;
}

async function refresh(state: SessionState): Promise<void> {
  sessionId = state.id;
  renderMarking(state);
  renderTransitions(state);
  renderLog(state);
  await renderHistory();
}

async function onFire(t: TransitionInfo): Promise<void> {
  if (!sessionId) return;
  if (needsChoiceDialog(t)) {
    openChoiceDialog(t);
    return;
  }
  const state = await guard(() => api.fire(sessionId!, t.name));
  if (state) await refresh(state);
}

function openChoiceDialog(t: TransitionInfo): void {
  const dialog = $('choice-dialog');
  $('choice-title').textContent = `Fire ${t.name}: pick tokens`;
  const list = $('choice-options');
  list.innerHTML = '';
  for (const opt of choiceOptions(t)) {
    const btn = document.createElement('button');
    btn.className = 'choice-option';
    btn.textContent = `positions [${opt.positions.join(', ')}] — ${opt.labels.join(', ')}`;
    btn.addEventListener('click', async () => {
      dialog.classList.add('hidden');
      const state = await guard(() => api.fire(sessionId!, t.name, opt.positions));
      if (state) await refresh(state);
    });
    list.appendChild(btn);
  }
  dialog.classList.remove('hidden');
}

async function onUndo(): Promise<void> {
  if (!sessionId) return;
  const state = await guard(() => api.undo(sessionId!));
  if (state) await refresh(state);
}

async function onLoad(): Promise<void> {
  const example = ($('example-select') as HTMLSelectElement).value;
  const pasted = ($('net-input') as HTMLTextAreaElement).value.trim();
  if (example === 'conflict') {
    showIntegerMode();
    return;
  }
  hideIntegerMode();
  const req = pasted
    ? pasted.startsWith('{')
      ? { net: JSON.parse(pasted) }
      : { pnz: pasted }
    : { example };
  const created = await guard(() => api.createSession(req));
  if (created) await refresh(created);
}

async function onAnalyze(): Promise<void> {
  if (!sessionId) return;
  const rep = await guard(() => api.analysis(sessionId!));
  if (rep) $('analysis-output').textContent = JSON.stringify(rep, null, 2);
}

// --- integer-net mode: replay a sequence, highlight illegal states -------

function showIntegerMode(): void {
  $('stepper-panel').classList.add('hidden');
  $('integer-panel').classList.remove('hidden');
}

function hideIntegerMode(): void {
  $('integer-panel').classList.add('hidden');
  $('stepper-panel').classList.remove('hidden');
}

async function onReplay(): Promise<void> {
  const seq = ($('sequence-input') as HTMLInputElement).value
    .split(',')
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
  const rep = await guard(() =>
    api.integerReplay({ example: 'conflict', sequence: seq }),
  );
  if (!rep) return;
  $('replay-table').innerHTML = replayRows(rep)
    .map(
      (row) =>
        `<tr class="${row.legal ? '' : 'illegal'}"><td>${row.transition}</td>` +
        row.cells
          .map(
            (c) =>
              `<td class="${c.negative ? 'negative' : ''}">` +
              `${c.place}: ${c.count}</td>`,
          )
          .join('') +
        `<td>${row.legal ? 'legal' : 'illegal'}</td></tr>`,
    )
    .join('');
  $('legalized').textContent = `legalized: ${legalizeSummary(rep)}`;
}

export function wire(): void {
  $('load-btn').addEventListener('click', () => void onLoad());
  $('undo-btn').addEventListener('click', () => void onUndo());
  $('analyze-btn').addEventListener('click', () => void onAnalyze());
  $('replay-btn').addEventListener('click', () => void onReplay());
  $('choice-cancel').addEventListener('click', () =>
    $('choice-dialog').classList.add('hidden'),
  );
  void onLoad();
}

// entry point when loaded as a page script
if (typeof document !== 'undefined' && document.getElementById('load-btn')) {
  wire();
}

export { enabledNames }; // re-export for tests of drift-free rendering
