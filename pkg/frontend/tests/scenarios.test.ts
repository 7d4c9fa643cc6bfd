/** Scenario tests against a live service instance: the UI's data layer
 * and view-model driven exactly as the screens drive them. */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { Api, ServiceError } from '../src/api.js';
import { renderDiagram } from '../src/diagram.js';
import {
  choiceOptions,
  enabledNames,
  legalizeSummary,
  replayRows,
} from '../src/viewmodel.js';
import { type LiveService, startService } from './helpers.js';

let service: LiveService;
let api: Api;

beforeAll(async () => {
  service = await startService();
  api = new Api(service.base);
}, 30000);

afterAll(() => {
  service?.stop();
});

describe('evolution token-choice scenario', () => {
  it('offers exactly two options labelled by provenance', async () => {
    const created = await api.createSession({ example: 'evolution' });
    let state = await api.fire(created.id, 't1');
    state = await api.fire(state.id, 't2');

    const t3 = state.transitions.find((t) => t.name === 't3')!;
    expect(t3.enabled).toBe(true);
    const options = choiceOptions(t3);
    expect(options).toHaveLength(2);
    const labels = options.map((o) => o.labels.join(', ')).sort();
    expect(labels).toEqual(['via t1', 'via t2']);

    // picking the t1-produced token goes through and re-renders
    const viaT1 = options.find((o) => o.labels[0] === 'via t1')!;
    // zero-count places are omitted from the marking payload
    const after = await api.fire(state.id, 't3', viaT1.positions);
    expect(after.marking).toEqual({ p2: 1, p3: 1 });
  });

  it('undo restores the previous marking', async () => {
    const created = await api.createSession({ example: 'evolution' });
    const fired = await api.fire(created.id, 't1');
    expect(fired.marking).toEqual({ p1: 1, p2: 1 });
    const undone = await api.undo(created.id);
    expect(undone.marking).toEqual({ p1: 2 });
  });

  it('renders the live history diagram', async () => {
    const created = await api.createSession({ example: 'evolution' });
    await api.fire(created.id, 't1');
    await api.fire(created.id, 't2');
    const hist = await api.history(created.id);
    const svg = renderDiagram(hist.diagram);
    expect(svg).toContain('>t1</text>');
    expect(svg).toContain('>t2</text>');
  });
});

describe('traffic-light scenario', () => {
  it('never displays both-green and never drifts from the service', async () => {
    const created = await api.createSession({ example: 'traffic-light' });
    let state = created;
    for (let step = 0; step < 25; step++) {
      expect(
        state.marking['green1'] > 0 && state.marking['green2'] > 0,
      ).toBe(false);
      // drift check: displayed enabled set matches a fresh GET
      const fresh = await api.getState(state.id);
      expect(enabledNames(state)).toEqual(enabledNames(fresh));
      const enabled = enabledNames(state);
      if (enabled.length === 0) break;
      state = await api.fire(state.id, enabled[step % enabled.length]);
    }
  });

  it('surfaces disabled transitions as 409, rendered inline', async () => {
    const created = await api.createSession({ example: 'evolution' });
    await api.fire(created.id, 't1');
    await api.fire(created.id, 't1');
    const err = await api.fire(created.id, 't1').catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(409);
    expect((err as ServiceError).detail).toContain('NotEnabled');
  });

  it('analysis tab reports safety and mutual exclusion', async () => {
    const created = await api.createSession({ example: 'traffic-light' });
    const rep = await api.analysis(created.id);
    expect(rep.safe).toBe(true);
    expect(rep.mutual_exclusion?.status).toBe('holds');
  });
});

describe('conflict scenario (integer mode)', () => {
  it('shows the illegal state and the legalized order', async () => {
    const rep = await api.integerReplay({
      example: 'conflict',
      sequence: ['tau', 'nu', 'mu'],
    });
    const rows = replayRows(rep);
    expect(rows.map((r) => r.legal)).toEqual([true, false, true]);
    const illegal = rows[1].cells.find((c) => c.place === 'X')!;
    expect(illegal).toEqual({ place: 'X', count: -1, negative: true });
    expect(legalizeSummary(rep)).toBe('tau, mu, nu');
  });

  it('rejects unknown transitions with an inline error', async () => {
    const err = await api
      .integerReplay({ example: 'conflict', sequence: ['zap'] })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(400);
  });
});
