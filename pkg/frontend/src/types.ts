/** Payload types for the atlas HTTP API (schema atlas-graph/1). */

export const SUPPORTED_GRAPH_SCHEMA = 'atlas-graph/1';

export type EntityType = 'human' | 'ai' | 'co';
export type Relationship = 'INCREASES' | 'DECREASES' | 'INFLUENCES';
export type Outcome = 'positive' | 'negative' | 'neutral' | 'undetermined';

export interface GraphNode {
  id: string;
  entity_type: EntityType;
  label: string;
  thematic_cluster: string | null;
  is_split_feature: boolean;
}

export interface EdgeFinding {
  paper_id: string;
  finding_ref: string;
  text: string;
}

export interface GraphEdge {
  id: string;
  source: string;
  target: string;
  relationship: Relationship;
  net_outcome: Outcome;
  weight: number;
  findings: EdgeFinding[];
  outcomes: Record<string, number>;
  is_self_loop: boolean;
}

export interface ClusterInfo {
  id: string;
  entity_type: EntityType;
  members: string[];
  representatives: string[];
  name: string | null;
  description: string | null;
}

export interface GraphDocument {
  meta: {
    schema_version: string;
    build_config: Record<string, unknown>;
    provenance: Record<string, string>;
    counts: { nodes: number; edges: number; findings: number; clusters: number };
  };
  nodes: GraphNode[];
  edges: GraphEdge[];
  clusters: ClusterInfo[];
  applied_filter?: string;
}

export interface FlowRow {
  source_group: string;
  relationship: Relationship;
  target_group: string;
  count: number;
  sample_findings: EdgeFinding[];
}

export interface Page<T> {
  items: T[];
  total: number;
  next_cursor: string | null;
  total_count?: number;
}

export interface PaperRecord {
  id: string;
  title: string;
  abstract: string;
  venue: string;
  source_db: string;
  pub_type: string;
  year: number | null;
  authors: string[];
  doi: string | null;
  url: string | null;
}

export interface PaperFinding {
  paper_id: string;
  index: number;
  text: string;
  keywords: string[];
}

export interface PaperDetail {
  paper: PaperRecord;
  findings: PaperFinding[];
  note: { paper_id: string; note_type: string; description: string } | null;
  edge_ids: string[];
}

export interface AnalysisDocument {
  meta: { schema_version: string; seed: number };
  partition: {
    assignment: Record<string, number>;
    num_communities: number;
    modularity: number;
  };
  metrics: Array<{
    node_id: string;
    community: number;
    degree: number;
    betweenness: number;
    constraint: number | null;
    effective_size: number | null;
    structural_hole_score: number | null;
  }>;
  bridges: Array<{
    node_id: string;
    home_community: number;
    num_external_communities: number;
    degree: number;
    betweenness: number;
  }>;
  summary: {
    num_communities: number;
    modularity: number;
    constraint_mean: number | null;
    constraint_std: number | null;
  };
}

export interface SearchResult {
  nodes: Array<{ id: string; score: number }>;
  papers: Array<{ id: string; score: number }>;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
