import { describe, expect, it } from 'vitest';

import { SchemaMismatchError, indexGraph, loadSnapshot } from '../src/snapshot.js';
import { SUPPORTED_GRAPH_SCHEMA, type GraphDocument } from '../src/types.js';
import { fixtureClient, fixtureGraph, fixtureSnapshot } from './helpers.js';

describe('snapshot loading', () => {
  it('materializes every node, edge, and cluster from the export', async () => {
    const snapshot = await fixtureSnapshot();
    const doc = fixtureGraph();
    expect(snapshot.nodes.size).toBe(doc.meta.counts.nodes);
    expect(snapshot.edges.size).toBe(doc.meta.counts.edges);
    expect(snapshot.clusters.size).toBe(doc.meta.counts.clusters);
    expect(snapshot.papers.size).toBe(25);
  });

  it('rejects a schema-version mismatch with both versions named', async () => {
    const doc = fixtureGraph();
    (doc as GraphDocument).meta.schema_version = 'atlas-graph/999';
    const client = fixtureClient({ '/api/graph': doc });
    await expect(loadSnapshot(client)).rejects.toThrowError(SchemaMismatchError);
    try {
      await loadSnapshot(client);
    } catch (error) {
      const mismatch = error as SchemaMismatchError;
      expect(mismatch.expected).toBe(SUPPORTED_GRAPH_SCHEMA);
      expect(mismatch.got).toBe('atlas-graph/999');
      expect(mismatch.message).toContain('atlas-graph/999');
      expect(mismatch.message).toContain(SUPPORTED_GRAPH_SCHEMA);
    }
  });

  it('computes degree over the projection (self-loops excluded)', () => {
    const { degree } = indexGraph(fixtureGraph());
    expect(degree.get('ai:llm')).toBe(1); // its self-loop does not count
    expect(degree.get('human>trust')).toBe(8);
  });

  it('resolves selections of all four kinds', async () => {
    const snapshot = await fixtureSnapshot();
    expect(snapshot.has('node', 'human>trust')).toBe(true);
    const anyEdge = [...snapshot.edges.keys()][0];
    expect(snapshot.has('edge', anyEdge)).toBe(true);
    expect(snapshot.has('paper', '10.9999/atlas.p20')).toBe(true);
    const anyCluster = [...snapshot.clusters.keys()][0];
    expect(snapshot.has('cluster', anyCluster)).toBe(true);
    expect(snapshot.has('node', 'ai:ghost')).toBe(false);
  });
});
