// Thin client for the planprov HTTP API. All analysis (support status,
// confidence, pertinence, impact) comes from the server; the client never
// recomputes any of it.

import type {
  CatalogDoc,
  Explanation,
  GraphDoc,
  RefutedItem,
  StateFeed,
} from './types.js';

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch.bind(globalThis),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as T & { detail?: string };
    if (!response.ok) {
      throw new ApiError(response.status, payload.detail ?? `HTTP ${response.status}`);
    }
    return payload;
  }

  getGraph(graphId: string): Promise<GraphDoc> {
    return this.request('GET', `/graphs/${graphId}`);
  }

  getCatalog(graphId: string): Promise<CatalogDoc> {
    return this.request('GET', `/graphs/${graphId}/catalog`);
  }

  async createSession(graphId: string): Promise<string> {
    const created = await this.request<{ session_id: string }>('POST', '/sessions', {
      graph_id: graphId,
    });
    return created.session_id;
  }

  getState(sessionId: string): Promise<StateFeed> {
    return this.request('GET', `/sessions/${sessionId}/state`);
  }

  /** Replace the session's refuted set; returns the recomputed state feed. */
  putRefuted(sessionId: string, items: RefutedItem[]): Promise<StateFeed> {
    return this.request('PUT', `/sessions/${sessionId}/refuted`, items);
  }

  /** Replace the session's confidence overrides; returns the new state feed. */
  putAppraisals(sessionId: string, overrides: Record<string, number>): Promise<StateFeed> {
    return this.request('PUT', `/sessions/${sessionId}/appraisals`, overrides);
  }

  explain(
    sessionId: string,
    kind: string,
    focus: string[],
    threshold = 0,
  ): Promise<Explanation> {
    const params = new URLSearchParams({ kind, threshold: String(threshold) });
    for (const f of focus) params.append('focus', f);
    return this.request('GET', `/sessions/${sessionId}/explain?${params.toString()}`);
  }
}
