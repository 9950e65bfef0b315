// Layered left-to-right layout: information sources and agents on the left,
// goals on the right, everything else by its longest support chain. Within a
// layer, nodes are ordered by the barycenter of their supporters so edges
// stay short (one Sugiyama-style sweep is plenty at this scale).

import type { GraphDoc } from './types.js';

const SUPPORT_RELATIONS = new Set([
  'Used',
  'WasGeneratedBy',
  'WasAssociatedWith',
  'WasDerivedFrom',
]);

export interface Position {
  x: number;
  y: number;
  layer: number;
}

export interface LayoutOptions {
  columnWidth: number;
  rowHeight: number;
  margin: number;
}

const DEFAULTS: LayoutOptions = { columnWidth: 190, rowHeight: 64, margin: 40 };

/** Longest-path layer per node: 0 for support roots, supporters always left. */
export function layerAssignment(graph: GraphDoc): Map<string, number> {
  const supporters = new Map<string, string[]>();
  for (const node of graph.nodes) supporters.set(node.id, []);
  for (const edge of graph.edges) {
    if (SUPPORT_RELATIONS.has(edge.relation)) {
      supporters.get(edge.from)?.push(edge.to);
    }
  }
  const layers = new Map<string, number>();
  const visiting = new Set<string>();
  const layerOf = (id: string): number => {
    const known = layers.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) return 0; // defensive: cycles cannot occur in valid graphs
    visiting.add(id);
    const parents = supporters.get(id) ?? [];
    const layer = parents.length
      ? 1 + Math.max(...parents.map(layerOf))
      : 0;
    visiting.delete(id);
    layers.set(id, layer);
    return layer;
  };
  for (const node of graph.nodes) layerOf(node.id);
  return layers;
}

/** Pixel positions for every node, goals pushed to the rightmost column. */
export function layout(
  graph: GraphDoc,
  options: Partial<LayoutOptions> = {},
): Map<string, Position> {
  const { columnWidth, rowHeight, margin } = { ...DEFAULTS, ...options };
  const layers = layerAssignment(graph);
  const maxLayer = Math.max(0, ...layers.values());
  for (const node of graph.nodes) {
    if (node.subtype === 'Goal') layers.set(node.id, maxLayer);
  }

  const columns = new Map<number, string[]>();
  for (const node of graph.nodes) {
    const layer = layers.get(node.id) ?? 0;
    const column = columns.get(layer) ?? [];
    column.push(node.id);
    columns.set(layer, column);
  }

  const supporters = new Map<string, string[]>();
  for (const node of graph.nodes) supporters.set(node.id, []);
  for (const edge of graph.edges) {
    if (SUPPORT_RELATIONS.has(edge.relation)) supporters.get(edge.from)?.push(edge.to);
  }

  const positions = new Map<string, Position>();
  const sortedLayers = [...columns.keys()].sort((a, b) => a - b);
  for (const layer of sortedLayers) {
    const ids = columns.get(layer)!;
    const barycenter = (id: string): number => {
      const ys = (supporters.get(id) ?? [])
        .map((p) => positions.get(p)?.y)
        .filter((y): y is number => y !== undefined);
      return ys.length ? ys.reduce((a, b) => a + b, 0) / ys.length : Number.MAX_VALUE;
    };
    ids.sort((a, b) => barycenter(a) - barycenter(b) || a.localeCompare(b));
    ids.forEach((id, row) => {
      positions.set(id, {
        x: margin + layer * columnWidth,
        y: margin + row * rowHeight,
        layer,
      });
    });
  }
  return positions;
}
