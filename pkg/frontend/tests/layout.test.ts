import { describe, expect, it } from 'vitest';

import { layerAssignment, layout } from '../src/layout.js';
import type { GraphDoc } from '../src/types.js';

import graphDoc from './fixtures/graph.json';

const graph = graphDoc as unknown as GraphDoc;

const SUPPORT_RELATIONS = new Set([
  'Used',
  'WasGeneratedBy',
  'WasAssociatedWith',
  'WasDerivedFrom',
]);

describe('layered layout on the rover graph', () => {
  it('puts sources and agents in the leftmost layer', () => {
    const layers = layerAssignment(graph);
    for (const node of graph.nodes) {
      if (node.subtype === 'InformationSource' || node.kind === 'Agent') {
        expect(layers.get(node.id), node.id).toBe(0);
      }
    }
  });

  it('places every supporter strictly left of its dependents', () => {
    const positions = layout(graph);
    for (const edge of graph.edges) {
      if (!SUPPORT_RELATIONS.has(edge.relation)) continue;
      const dependent = positions.get(edge.from)!;
      const supporter = positions.get(edge.to)!;
      expect(supporter.x, `${edge.from} -> ${edge.to}`).toBeLessThan(dependent.x);
    }
  });

  it('pushes goals to the rightmost column', () => {
    const positions = layout(graph);
    const maxX = Math.max(...[...positions.values()].map((p) => p.x));
    for (const node of graph.nodes) {
      if (node.subtype === 'Goal') {
        expect(positions.get(node.id)!.x).toBe(maxX);
      }
    }
  });

  it('assigns distinct positions to all nodes', () => {
    const positions = layout(graph);
    const seen = new Set([...positions.values()].map((p) => `${p.x}:${p.y}`));
    expect(seen.size).toBe(graph.nodes.length);
  });
});
