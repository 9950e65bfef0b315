// Wire types mirroring the planprov HTTP API documents.

export type NodeKind = 'Entity' | 'Activity' | 'Agent';

export type NodeStatus = 'IN' | 'OUT' | 'REFUTED';

export interface GraphNode {
  id: string;
  kind: NodeKind;
  subtype: string;
  label: string;
  attributes: Record<string, unknown>;
}

export interface GraphEdge {
  from: string;
  to: string;
  relation: string;
}

export interface GraphDoc {
  nodes: GraphNode[];
  edges: GraphEdge[];
  appraisals: Array<{
    appraiser: string;
    subject: string;
    confidence: number | null;
    assumptions: string[];
    disciplines: string[];
  }>;
}

export interface CatalogDoc {
  agents: string[];
  source_entities: string[];
  source_classes: Record<string, string[]>;
  operation_classes: Record<string, string[]>;
}

export interface NodeState {
  status: NodeStatus;
  confidence: number | null;
}

export interface StateFeed {
  nodes: Record<string, NodeState>;
}

export interface ClassSelector {
  dimension: string;
  key: string;
}

/** An entry in the session's refuted set: a node id or a class selector. */
export type RefutedItem = string | ClassSelector;

export interface Explanation {
  kind: string;
  focus: string[];
  emphasized?: string[];
  impacted?: string[];
  [extra: string]: unknown;
}

/** What the user is hovering: one node, or a whole catalog class. */
export type HoverTarget =
  | { node: string }
  | { dimension: string; key: string };

export function selectorKey(item: RefutedItem): string {
  return typeof item === 'string' ? `node:${item}` : `${item.dimension}:${item.key}`;
}
