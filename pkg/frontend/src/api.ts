/** Thin typed client over the stepping service. All mutations round-trip;
 * the UI never computes a firing locally. */

import type {
  AnalysisReport,
  CreateResponse,
  HistoryResponse,
  ReplayResponse,
  SessionState,
} from './types.js';

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const detail =
      typeof body === 'object' && body !== null && 'detail' in body
        ? String((body as { detail: unknown }).detail)
        : res.statusText;
    throw new ServiceError(res.status, detail);
  }
  return body as T;
}

export interface CreateRequest {
  example?: string;
  net?: unknown;
  pnz?: string;
  marking?: Record<string, number>;
}

export class Api {
  constructor(private readonly base: string = '') {}

  createSession(req: CreateRequest): Promise<CreateResponse> {
    return request(`${this.base}/sessions`, {
      method: 'POST',
      body: JSON.stringify(req),
    });
  }

  getState(id: string): Promise<SessionState> {
    return request(`${this.base}/sessions/${id}`);
  }

  fire(id: string, transition: string, choice?: number[]): Promise<SessionState> {
    return request(`${this.base}/sessions/${id}/fire`, {
      method: 'POST',
      body: JSON.stringify({ transition, choice: choice ?? null }),
    });
  }

  undo(id: string): Promise<SessionState> {
    return request(`${this.base}/sessions/${id}/undo`, { method: 'POST' });
  }

  history(id: string): Promise<HistoryResponse> {
    return request(`${this.base}/sessions/${id}/history`);
  }

  analysis(id: string): Promise<AnalysisReport> {
    return request(`${this.base}/sessions/${id}/analysis`);
  }

  integerReplay(req: {
    example?: string;
    net?: unknown;
    sequence: (string | number)[];
  }): Promise<ReplayResponse> {
    return request(`${this.base}/integer/replay`, {
      method: 'POST',
      body: JSON.stringify(req),
    });
  }
}
