/** One loaded, indexed snapshot of everything the three views read. */

import { ApiClient } from './api.js';
import type { SelectionCheck, SelectionKind } from './state.js';
import type {
  AnalysisDocument,
  FlowRow,
  GraphDocument,
  GraphEdge,
  GraphNode,
  PaperRecord,
  ClusterInfo,
} from './types.js';
import { SUPPORTED_GRAPH_SCHEMA } from './types.js';

export class SchemaMismatchError extends Error {
  constructor(
    public readonly expected: string,
    public readonly got: string,
  ) {
    super(`snapshot schema ${got} is not supported (expected ${expected})`);
  }
}

export interface Snapshot extends SelectionCheck {
  graph: GraphDocument;
  nodes: Map<string, GraphNode>;
  edges: Map<string, GraphEdge>;
  clusters: Map<string, ClusterInfo>;
  degree: Map<string, number>;
  flowsByCluster: FlowRow[];
  flowsTotal: number;
  papers: Map<string, PaperRecord>;
  analysis: AnalysisDocument;
}

export function indexGraph(graph: GraphDocument): {
  nodes: Map<string, GraphNode>;
  edges: Map<string, GraphEdge>;
  clusters: Map<string, ClusterInfo>;
  degree: Map<string, number>;
} {
  if (graph.meta.schema_version !== SUPPORTED_GRAPH_SCHEMA) {
    throw new SchemaMismatchError(SUPPORTED_GRAPH_SCHEMA, graph.meta.schema_version);
  }
  const nodes = new Map(graph.nodes.map((n) => [n.id, n]));
  const edges = new Map(graph.edges.map((e) => [e.id, e]));
  const clusters = new Map(graph.clusters.map((c) => [c.id, c]));
  const degree = new Map<string, number>(graph.nodes.map((n) => [n.id, 0]));
  for (const edge of graph.edges) {
    if (edge.is_self_loop) continue;
    degree.set(edge.source, (degree.get(edge.source) ?? 0) + 1);
    degree.set(edge.target, (degree.get(edge.target) ?? 0) + 1);
  }
  return { nodes, edges, clusters, degree };
}

export async function loadSnapshot(client: ApiClient): Promise<Snapshot> {
  const graph = await client.graph();
  const { nodes, edges, clusters, degree } = indexGraph(graph);
  const [flows, papersPage, analysis] = await Promise.all([
    client.flows({ group_by: 'thematic_cluster' }),
    client.papers(),
    client.analysis(),
  ]);
  const papers = new Map(papersPage.items.map((p) => [p.id, p]));
  return {
    graph,
    nodes,
    edges,
    clusters,
    degree,
    flowsByCluster: flows.items,
    flowsTotal: flows.total_count ?? flows.items.reduce((sum, row) => sum + row.count, 0),
    papers,
    analysis,
    has(kind: SelectionKind, id: string): boolean {
      switch (kind) {
        case 'node':
          return nodes.has(id);
        case 'edge':
          return edges.has(id);
        case 'paper':
          return papers.has(id);
        case 'cluster':
          return clusters.has(id);
      }
    },
  };
}
