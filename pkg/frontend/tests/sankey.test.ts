import { describe, expect, it } from 'vitest';

import { computeSankey, totalCount } from '../src/sankey.js';
import type { FlowRow, Page } from '../src/types.js';
import { fixture } from './helpers.js';

const flowsPage = fixture<Page<FlowRow>>('flows_by_cluster.json');

describe('sankey layout from flow rows', () => {
  it('total equals the flows endpoint count exactly', () => {
    const layout = computeSankey(flowsPage.items);
    expect(layout.total).toBe(flowsPage.total_count);
    expect(totalCount(flowsPage.items)).toBe(flowsPage.total_count);
  });

  it('bands partition each column node exactly', () => {
    const layout = computeSankey(flowsPage.items);
    for (const node of [...layout.sources, ...layout.targets]) {
      const key = node.side === 'source' ? 'source_group' : 'target_group';
      const incident = layout.bands.filter((b) => b.row[key] === node.group);
      const bandCount = incident.reduce((sum, b) => sum + b.row.count, 0);
      expect(bandCount).toBe(node.total);
      const span = incident.reduce(
        (sum, b) =>
          sum +
          (node.side === 'source' ? b.sourceY1 - b.sourceY0 : b.targetY1 - b.targetY0),
        0,
      );
      expect(span).toBeCloseTo(node.y1 - node.y0, 6);
    }
  });

  it('band extents stay inside their column nodes', () => {
    const layout = computeSankey(flowsPage.items);
    const sources = new Map(layout.sources.map((n) => [n.group, n]));
    const targets = new Map(layout.targets.map((n) => [n.group, n]));
    for (const band of layout.bands) {
      const source = sources.get(band.row.source_group)!;
      const target = targets.get(band.row.target_group)!;
      expect(band.sourceY0).toBeGreaterThanOrEqual(source.y0 - 1e-6);
      expect(band.sourceY1).toBeLessThanOrEqual(source.y1 + 1e-6);
      expect(band.targetY0).toBeGreaterThanOrEqual(target.y0 - 1e-6);
      expect(band.targetY1).toBeLessThanOrEqual(target.y1 + 1e-6);
    }
  });

  it('column nodes never overlap', () => {
    const layout = computeSankey(flowsPage.items);
    for (const column of [layout.sources, layout.targets]) {
      for (let i = 1; i < column.length; i++) {
        expect(column[i].y0).toBeGreaterThanOrEqual(column[i - 1].y1);
      }
    }
  });

  it('empty input yields an empty layout', () => {
    const layout = computeSankey([]);
    expect(layout.total).toBe(0);
    expect(layout.bands).toEqual([]);
  });
});
