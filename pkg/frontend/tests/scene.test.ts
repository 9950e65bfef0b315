import { describe, expect, it } from 'vitest';

import {
  BUCKET_HIGH,
  BUCKET_LOW,
  BUCKET_MID,
  BUCKET_NONE,
  buildScene,
  confidenceBucket,
  emptyView,
  formatConfidence,
} from '../src/scene.js';
import type { GraphDoc, StateFeed } from '../src/types.js';

const graph: GraphDoc = {
  nodes: [
    { id: 'src', kind: 'Entity', subtype: 'InformationSource', label: 'Source', attributes: {} },
    { id: 'b', kind: 'Entity', subtype: 'Belief', label: 'belief', attributes: {} },
    { id: 't', kind: 'Activity', subtype: 'Task', label: 'task', attributes: {} },
    { id: 'goal', kind: 'Entity', subtype: 'Goal', label: 'goal', attributes: {} },
  ],
  edges: [
    { from: 'b', to: 'src', relation: 'WasDerivedFrom' },
    { from: 't', to: 'b', relation: 'Used' },
    { from: 'goal', to: 't', relation: 'WasGeneratedBy' },
  ],
  appraisals: [],
};

function feed(overrides: Partial<Record<string, { status: string; confidence: number | null }>> = {}): StateFeed {
  const nodes: StateFeed['nodes'] = {};
  for (const node of graph.nodes) {
    nodes[node.id] = { status: 'IN', confidence: 1.0 } as never;
  }
  Object.assign(nodes, overrides);
  return { nodes };
}

describe('confidence buckets', () => {
  it('splits at 0.7 and 0.3 with a neutral fallback', () => {
    expect(confidenceBucket(1.0)).toBe(BUCKET_HIGH);
    expect(confidenceBucket(0.7)).toBe(BUCKET_HIGH);
    expect(confidenceBucket(0.69)).toBe(BUCKET_MID);
    expect(confidenceBucket(0.3)).toBe(BUCKET_MID);
    expect(confidenceBucket(0.29)).toBe(BUCKET_LOW);
    expect(confidenceBucket(null)).toBe(BUCKET_NONE);
  });

  it('formats badges with two decimals', () => {
    expect(formatConfidence(0.8)).toBe('0.80');
    expect(formatConfidence(0.2)).toBe('0.20');
    expect(formatConfidence(null)).toBe('—');
  });
});

describe('buildScene', () => {
  it('colors IN nodes by bucket and ghosts OUT nodes', () => {
    const scene = buildScene(
      graph,
      feed({
        b: { status: 'IN', confidence: 0.2 },
        t: { status: 'OUT', confidence: null },
      }),
      emptyView(),
    );
    const byId = new Map(scene.nodes.map((n) => [n.id, n]));
    expect(byId.get('b')!.fill).toBe(BUCKET_LOW);
    expect(byId.get('t')!.ghosted).toBe(true);
    expect(byId.get('t')!.fill).toBe(BUCKET_NONE);
    expect(byId.get('src')!.ghosted).toBe(false);
  });

  it('strikes refuted nodes and fades their edges', () => {
    const scene = buildScene(
      graph,
      feed({ src: { status: 'REFUTED', confidence: null } }),
      emptyView(),
    );
    const byId = new Map(scene.nodes.map((n) => [n.id, n]));
    expect(byId.get('src')!.struck).toBe(true);
    const edge = scene.edges.find((e) => e.to === 'src')!;
    expect(edge.faded).toBe(true);
  });

  it('puts a confidence badge on goals only', () => {
    const scene = buildScene(graph, feed({ goal: { status: 'IN', confidence: 0.8 } }), emptyView());
    const byId = new Map(scene.nodes.map((n) => [n.id, n]));
    expect(byId.get('goal')!.badge).toBe('0.80');
    expect(byId.get('t')!.badge).toBeNull();
  });

  it('fades everything outside the hover emphasis set', () => {
    const view = emptyView();
    view.hoverEmphasis = new Set(['t', 'b']);
    view.glow = new Set(['t']);
    const scene = buildScene(graph, feed(), view);
    const byId = new Map(scene.nodes.map((n) => [n.id, n]));
    expect(byId.get('t')!.faded).toBe(false);
    expect(byId.get('t')!.glow).toBe(true);
    expect(byId.get('b')!.faded).toBe(false);
    expect(byId.get('src')!.faded).toBe(true);
    expect(byId.get('goal')!.faded).toBe(true);
  });
});
