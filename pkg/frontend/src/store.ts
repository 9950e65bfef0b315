// Session state and actions. The store owns the what-if state the user has
// toggled (refutation selections, confidence overrides, hover target) and
// round-trips every change through the service; rendering always works from
// the last server response, never from locally computed support/confidence.

import type { ApiClient } from './api.js';
import { emptyView, type ViewState } from './scene.js';
import {
  selectorKey,
  type CatalogDoc,
  type GraphDoc,
  type HoverTarget,
  type RefutedItem,
  type StateFeed,
} from './types.js';

export class ExplorerStore {
  graph!: GraphDoc;
  catalog!: CatalogDoc;
  feed: StateFeed = { nodes: {} };
  view: ViewState = emptyView();
  sessionId = '';

  /** Last issued action; tests and callers await this before asserting. */
  inflight: Promise<void> = Promise.resolve();

  private refuted = new Map<string, RefutedItem>();
  private overrides: Record<string, number> = {};
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly graphId: string,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async init(): Promise<void> {
    this.graph = await this.api.getGraph(this.graphId);
    this.catalog = await this.api.getCatalog(this.graphId);
    this.sessionId = await this.api.createSession(this.graphId);
    this.feed = await this.api.getState(this.sessionId);
    this.emit();
  }

  isRefuted(item: RefutedItem): boolean {
    return this.refuted.has(selectorKey(item));
  }

  refutedItems(): RefutedItem[] {
    return [...this.refuted.values()];
  }

  confidenceOverride(nodeId: string): number | null {
    return this.overrides[nodeId] ?? null;
  }

  /** Toggle a node or {dimension, key} class in the refuted set (PUT). */
  toggleRefute(item: RefutedItem): Promise<void> {
    const key = selectorKey(item);
    if (this.refuted.has(key)) {
      this.refuted.delete(key);
    } else {
      this.refuted.set(key, item);
    }
    this.inflight = this.pushRefuted();
    return this.inflight;
  }

  private async pushRefuted(): Promise<void> {
    this.feed = await this.api.putRefuted(this.sessionId, this.refutedItems());
    this.emit();
  }

  /** Set (or clear, with null) a source confidence override (PUT). */
  setConfidence(nodeId: string, value: number | null): Promise<void> {
    if (value === null) {
      delete this.overrides[nodeId];
    } else {
      this.overrides[nodeId] = value;
    }
    this.inflight = (async () => {
      this.feed = await this.api.putAppraisals(this.sessionId, { ...this.overrides });
      this.emit();
    })();
    return this.inflight;
  }

  /** Hover emphasis: ask the server what is pertinent to / impacted by the
   * target, fade everything else, and glow the hovered class members. */
  hover(target: HoverTarget): Promise<void> {
    const focus =
      'node' in target
        ? [target.node]
        : this.classMembers(target.dimension, target.key);
    this.view.glow = new Set(focus);
    this.inflight = (async () => {
      const [pertinence, impact] = await Promise.all([
        this.api.explain(this.sessionId, 'pertinence', focus),
        this.api.explain(this.sessionId, 'impact', focus),
      ]);
      this.view.hoverEmphasis = new Set([
        ...focus,
        ...(pertinence.emphasized ?? []),
        ...(impact.impacted ?? []),
      ]);
      this.emit();
    })();
    return this.inflight;
  }

  clearHover(): void {
    this.view.hoverEmphasis = null;
    this.view.glow = new Set();
    this.emit();
  }

  select(nodeId: string | null): void {
    this.view.selection = nodeId;
    this.emit();
  }

  classMembers(dimension: string, key: string): string[] {
    if (dimension === 'agents') return this.catalog.agents.includes(key) ? [key] : [];
    if (dimension === 'source_entities') {
      return this.catalog.source_entities.includes(key) ? [key] : [];
    }
    if (dimension === 'source_classes') return this.catalog.source_classes[key] ?? [];
    if (dimension === 'operation_classes') {
      return this.catalog.operation_classes[key] ?? [];
    }
    return [];
  }

  /** The checkbox-mirror invariant: every checked item's members must report
   * REFUTED in the last feed, and nothing else may. */
  checkboxesMirrorOverlay(): boolean {
    const expected = new Set<string>();
    for (const item of this.refuted.values()) {
      if (typeof item === 'string') {
        expected.add(item);
      } else {
        for (const member of this.classMembers(item.dimension, item.key)) {
          expected.add(member);
        }
      }
    }
    const reported = new Set(
      Object.entries(this.feed.nodes)
        .filter(([, state]) => state.status === 'REFUTED')
        .map(([id]) => id),
    );
    if (expected.size !== reported.size) return false;
    for (const id of expected) if (!reported.has(id)) return false;
    return true;
  }
}
