/** Two-column cause/effect Sankey layout computed from flow rows.
 *
 * Source groups stack on the left, target groups on the right, band
 * thickness is proportional to finding count, and the displayed totals are
 * exactly the API's counts; no client-side re-aggregation happens here.
 */

import type { FlowRow, Relationship } from './types.js';

export interface SankeyColumnNode {
  group: string;
  side: 'source' | 'target';
  total: number;
  y0: number;
  y1: number;
}

export interface SankeyBand {
  row: FlowRow;
  sourceY0: number;
  sourceY1: number;
  targetY0: number;
  targetY1: number;
}

export interface SankeyLayout {
  sources: SankeyColumnNode[];
  targets: SankeyColumnNode[];
  bands: SankeyBand[];
  total: number;
  height: number;
}

const NODE_GAP = 8;
const MIN_NODE_HEIGHT = 4;

export function totalCount(rows: FlowRow[]): number {
  return rows.reduce((sum, row) => sum + row.count, 0);
}

export function computeSankey(rows: FlowRow[], height = 480): SankeyLayout {
  const sourceTotals = new Map<string, number>();
  const targetTotals = new Map<string, number>();
  for (const row of rows) {
    sourceTotals.set(row.source_group, (sourceTotals.get(row.source_group) ?? 0) + row.count);
    targetTotals.set(row.target_group, (targetTotals.get(row.target_group) ?? 0) + row.count);
  }
  const grand = totalCount(rows);

  const stack = (totals: Map<string, number>, side: 'source' | 'target'): SankeyColumnNode[] => {
    const groups = [...totals.entries()].sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1));
    const usable = Math.max(1, height - NODE_GAP * Math.max(0, groups.length - 1));
    const perCount = grand > 0 ? usable / grand : 0;
    const nodes: SankeyColumnNode[] = [];
    let y = 0;
    for (const [group, total] of groups) {
      const h = Math.max(MIN_NODE_HEIGHT, total * perCount);
      nodes.push({ group, side, total, y0: y, y1: y + h });
      y += h + NODE_GAP;
    }
    return nodes;
  };

  const sources = stack(sourceTotals, 'source');
  const targets = stack(targetTotals, 'target');
  const sourceIndex = new Map(sources.map((n) => [n.group, n]));
  const targetIndex = new Map(targets.map((n) => [n.group, n]));

  // Bands partition each column node's extent in deterministic row order.
  const sourceOffset = new Map<string, number>();
  const targetOffset = new Map<string, number>();
  const ordered = [...rows].sort(
    (a, b) =>
      b.count - a.count ||
      a.source_group.localeCompare(b.source_group) ||
      a.relationship.localeCompare(b.relationship) ||
      a.target_group.localeCompare(b.target_group),
  );
  const bands: SankeyBand[] = [];
  for (const row of ordered) {
    const source = sourceIndex.get(row.source_group)!;
    const target = targetIndex.get(row.target_group)!;
    const sourceShare = (source.y1 - source.y0) * (row.count / source.total);
    const targetShare = (target.y1 - target.y0) * (row.count / target.total);
    const sy = sourceOffset.get(row.source_group) ?? source.y0;
    const ty = targetOffset.get(row.target_group) ?? target.y0;
    bands.push({
      row,
      sourceY0: sy,
      sourceY1: sy + sourceShare,
      targetY0: ty,
      targetY1: ty + targetShare,
    });
    sourceOffset.set(row.source_group, sy + sourceShare);
    targetOffset.set(row.target_group, ty + targetShare);
  }

  const bottom = Math.max(
    sources.length ? sources[sources.length - 1].y1 : 0,
    targets.length ? targets[targets.length - 1].y1 : 0,
  );
  return { sources, targets, bands, total: grand, height: Math.max(height, bottom) };
}

export const RELATIONSHIP_COLORS: Record<Relationship, string> = {
  INCREASES: '#2e9e62',
  DECREASES: '#d5573b',
  INFLUENCES: '#5a7bd0',
};
