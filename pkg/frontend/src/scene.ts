// Pure scene computation: graph document + server state feed + view state in,
// a flat list of styled nodes and edges out. Confidence and support status
// are taken verbatim from the feed; this module only decides how they look.

import { layout, type Position } from './layout.js';
import type { GraphDoc, NodeState, StateFeed } from './types.js';

export const BUCKET_HIGH = '#7cc47f';
export const BUCKET_MID = '#e5c94e';
export const BUCKET_LOW = '#e2705f';
export const BUCKET_NONE = '#b8c4cc';

export interface ViewState {
  hoverEmphasis: Set<string> | null; // pertinence ∪ impact of the hover target
  glow: Set<string>; // members of the hovered class
  selection: string | null;
}

export interface SceneNode {
  id: string;
  label: string;
  kind: string;
  subtype: string;
  x: number;
  y: number;
  fill: string;
  ghosted: boolean; // OUT: support collapsed under the overlay
  struck: boolean; // REFUTED: explicitly ruled out in this session
  faded: boolean; // not pertinent to the hover target
  glow: boolean; // member of the hovered class
  selected: boolean;
  badge: string | null; // confidence badge, shown on goals
}

export interface SceneEdge {
  from: string;
  to: string;
  relation: string;
  faded: boolean;
  color: string;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  width: number;
  height: number;
}

export function confidenceBucket(value: number | null | undefined): string {
  if (value === null || value === undefined) return BUCKET_NONE;
  if (value >= 0.7) return BUCKET_HIGH;
  if (value >= 0.3) return BUCKET_MID;
  return BUCKET_LOW;
}

export function formatConfidence(value: number | null | undefined): string {
  return value === null || value === undefined ? '—' : value.toFixed(2);
}

export function emptyView(): ViewState {
  return { hoverEmphasis: null, glow: new Set(), selection: null };
}

export function buildScene(graph: GraphDoc, feed: StateFeed, view: ViewState): Scene {
  const positions = layout(graph);
  const nodes: SceneNode[] = graph.nodes.map((node) => {
    const state: NodeState = feed.nodes[node.id] ?? { status: 'IN', confidence: null };
    const position: Position = positions.get(node.id) ?? { x: 0, y: 0, layer: 0 };
    const faded =
      view.hoverEmphasis !== null && !view.hoverEmphasis.has(node.id);
    return {
      id: node.id,
      label: node.label || node.id,
      kind: node.kind,
      subtype: node.subtype,
      x: position.x,
      y: position.y,
      fill: state.status === 'IN' ? confidenceBucket(state.confidence) : BUCKET_NONE,
      ghosted: state.status === 'OUT',
      struck: state.status === 'REFUTED',
      faded,
      glow: view.glow.has(node.id),
      selected: view.selection === node.id,
      badge: node.subtype === 'Goal' ? formatConfidence(state.confidence) : null,
    };
  });
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const edges: SceneEdge[] = graph.edges.map((edge) => {
    const from = byId.get(edge.from);
    const to = byId.get(edge.to);
    const dead =
      !from || !to || from.ghosted || from.struck || to.ghosted || to.struck;
    return {
      from: edge.from,
      to: edge.to,
      relation: edge.relation,
      faded: Boolean(dead || from?.faded || to?.faded),
      color: dead ? BUCKET_NONE : (from?.fill ?? BUCKET_NONE),
    };
  });
  const width = Math.max(360, ...nodes.map((n) => n.x + 220));
  const height = Math.max(240, ...nodes.map((n) => n.y + 80));
  return { nodes, edges, width, height };
}
