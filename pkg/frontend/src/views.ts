/** The three view renderers and the shared detail panel, as VNode trees.
 *
 * Every interactive element carries `data-action` / `data-*` attributes; the
 * browser shell translates clicks on them into state transitions.  Keeping
 * the trees pure lets tests count rendered entities and read panel text
 * without a DOM.
 */

import { computeLayout, project } from './layout3d.js';
import { RELATIONSHIP_COLORS, computeSankey } from './sankey.js';
import type { Snapshot } from './snapshot.js';
import type { Selection, ViewState } from './state.js';
import { VIEWS } from './state.js';
import type { GraphEdge, GraphNode } from './types.js';
import { h, type VNode } from './vdom.js';

const VIEW_LABELS: Record<string, string> = {
  graph3d: '3D Graph',
  flows: 'Cause-Effect',
  papers: 'Papers',
};

export const DEFAULT_CAMERA = { rx: -0.35, ry: 0.6, zoom: 1.0 };

export function visibleNodes(snapshot: Snapshot, state: ViewState): GraphNode[] {
  const { query, types, clusters } = state.filters;
  const terms = query.toLowerCase().split(/\s+/).filter(Boolean);
  return [...snapshot.nodes.values()]
    .filter((node) => !types.length || types.includes(node.entity_type))
    .filter(
      (node) => !clusters.length || (node.thematic_cluster !== null && clusters.includes(node.thematic_cluster)),
    )
    .filter((node) => !terms.length || terms.some((t) => node.id.toLowerCase().includes(t)))
    .sort((a, b) => a.id.localeCompare(b.id));
}

export function visibleEdges(snapshot: Snapshot, nodes: GraphNode[]): GraphEdge[] {
  const keep = new Set(nodes.map((n) => n.id));
  return snapshot.graph.edges.filter((e) => keep.has(e.source) && keep.has(e.target));
}

export function graph3dView(snapshot: Snapshot, state: ViewState): VNode {
  const nodes = visibleNodes(snapshot, state);
  const edges = visibleEdges(snapshot, nodes);
  const camera = state.camera ?? DEFAULT_CAMERA;
  const viewport = { width: 960, height: 640 };
  const layout = computeLayout(
    nodes.map((n) => n.id),
    edges,
  );
  const projected = new Map(
    nodes.map((n) => [n.id, project(layout.get(n.id)!, camera, viewport)]),
  );
  const maxDegree = Math.max(1, ...nodes.map((n) => snapshot.degree.get(n.id) ?? 0));

  const edgeLines = edges
    .filter((e) => !e.is_self_loop)
    .map((edge) => {
      const a = projected.get(edge.source)!;
      const b = projected.get(edge.target)!;
      const selected = state.selection?.kind === 'edge' && state.selection.id === edge.id;
      return h('line', {
        class: `edge${selected ? ' selected' : ''}`,
        x1: a.x.toFixed(1),
        y1: a.y.toFixed(1),
        x2: b.x.toFixed(1),
        y2: b.y.toFixed(1),
        stroke: RELATIONSHIP_COLORS[edge.relationship],
        'stroke-width': selected ? '3' : String(1 + Math.log2(edge.weight)),
        'data-action': 'select-edge',
        'data-id': edge.id,
      });
    });

  const nodeDots = [...nodes]
    .sort((a, b) => projected.get(b.id)!.depth - projected.get(a.id)!.depth)
    .map((node) => {
      const p = projected.get(node.id)!;
      const degree = snapshot.degree.get(node.id) ?? 0;
      const radius = (3 + 9 * Math.sqrt(degree / maxDegree)) * p.scale;
      const selected = state.selection?.kind === 'node' && state.selection.id === node.id;
      return h(
        'circle',
        {
          class: `node type-${node.entity_type}${selected ? ' selected' : ''}`,
          cx: p.x.toFixed(1),
          cy: p.y.toFixed(1),
          r: radius.toFixed(1),
          'data-action': 'select-node',
          'data-id': node.id,
        },
        h('title', {}, `${node.id} (degree ${degree})`),
      );
    });

  return h(
    'div',
    { class: 'view view-graph3d' },
    h(
      'svg',
      { viewBox: `0 0 ${viewport.width} ${viewport.height}`, class: 'graph3d-canvas' },
      h('g', { class: 'edges' }, edgeLines),
      h('g', { class: 'nodes' }, nodeDots),
    ),
    h(
      'div',
      { class: 'view-meta' },
      `${nodes.length} nodes, ${edges.length} edges shown`,
    ),
  );
}

export function flowsView(snapshot: Snapshot, state: ViewState): VNode {
  const layout = computeSankey(snapshot.flowsByCluster);
  const groupLabel = (group: string): string =>
    snapshot.clusters.get(group)?.name ?? group;
  const width = 960;
  const columnWidth = 180;

  const columns = [...layout.sources, ...layout.targets].map((node) => {
    const x = node.side === 'source' ? 0 : width - columnWidth;
    const selected = state.selection?.kind === 'cluster' && state.selection.id === node.group;
    return h(
      'g',
      { class: `sankey-node side-${node.side}${selected ? ' selected' : ''}` },
      h('rect', {
        x,
        y: node.y0.toFixed(1),
        width: columnWidth,
        height: (node.y1 - node.y0).toFixed(1),
        'data-action': 'select-cluster',
        'data-id': node.group,
      }),
      h(
        'text',
        { x: x + 6, y: ((node.y0 + node.y1) / 2).toFixed(1), class: 'sankey-label' },
        `${groupLabel(node.group)} (${node.total})`,
      ),
    );
  });

  const bands = layout.bands.map((band) => {
    const x0 = columnWidth;
    const x1 = width - columnWidth;
    const mid = (x0 + x1) / 2;
    const path =
      `M ${x0} ${band.sourceY0.toFixed(1)} ` +
      `C ${mid} ${band.sourceY0.toFixed(1)}, ${mid} ${band.targetY0.toFixed(1)}, ${x1} ${band.targetY0.toFixed(1)} ` +
      `L ${x1} ${band.targetY1.toFixed(1)} ` +
      `C ${mid} ${band.targetY1.toFixed(1)}, ${mid} ${band.sourceY1.toFixed(1)}, ${x0} ${band.sourceY1.toFixed(1)} Z`;
    return h(
      'path',
      {
        class: 'sankey-band',
        d: path,
        fill: RELATIONSHIP_COLORS[band.row.relationship],
        'fill-opacity': '0.55',
        'data-count': band.row.count,
        'data-relationship': band.row.relationship,
      },
      h(
        'title',
        {},
        `${groupLabel(band.row.source_group)} -[${band.row.relationship}]-> ` +
          `${groupLabel(band.row.target_group)}: ${band.row.count} findings`,
      ),
    );
  });

  return h(
    'div',
    { class: 'view view-flows' },
    h(
      'svg',
      { viewBox: `0 0 ${width} ${Math.ceil(layout.height)}`, class: 'sankey-canvas' },
      h('g', { class: 'bands' }, bands),
      h('g', { class: 'columns' }, columns),
    ),
    h('div', { class: 'view-meta sankey-total' }, `${layout.total} findings in view`),
  );
}

export function papersView(snapshot: Snapshot, state: ViewState): VNode {
  const terms = state.filters.query.toLowerCase().split(/\s+/).filter(Boolean);
  const papers = [...snapshot.papers.values()]
    .filter(
      (p) =>
        !terms.length ||
        terms.some(
          (t) => p.title.toLowerCase().includes(t) || p.abstract.toLowerCase().includes(t),
        ),
    )
    .sort((a, b) => a.id.localeCompare(b.id));
  return h(
    'div',
    { class: 'view view-papers' },
    h('div', { class: 'view-meta' }, `${papers.length} of ${snapshot.papers.size} papers`),
    h(
      'ul',
      { class: 'paper-list' },
      papers.map((paper) => {
        const selected = state.selection?.kind === 'paper' && state.selection.id === paper.id;
        return h(
          'li',
          {
            class: `paper-item${selected ? ' selected' : ''}`,
            'data-action': 'select-paper',
            'data-id': paper.id,
          },
          h('span', { class: 'paper-title' }, paper.title),
          h(
            'span',
            { class: 'paper-venue' },
            ` — ${paper.venue}${paper.year ? `, ${paper.year}` : ''}`,
          ),
        );
      }),
    ),
  );
}

export function detailPanel(snapshot: Snapshot, selection: Selection | null): VNode {
  if (!selection) {
    return h('aside', { class: 'detail empty' }, 'Select a node, edge, or paper.');
  }
  if (selection.kind === 'node') {
    const node = snapshot.nodes.get(selection.id);
    if (!node) return h('aside', { class: 'detail missing' }, 'Node not in snapshot.');
    const incident = snapshot.graph.edges.filter(
      (e) => e.source === node.id || e.target === node.id,
    );
    const cluster = node.thematic_cluster ? snapshot.clusters.get(node.thematic_cluster) : null;
    return h(
      'aside',
      { class: 'detail detail-node' },
      h('h2', {}, node.label),
      h('p', { class: 'node-id' }, node.id),
      cluster
        ? h('p', { class: 'node-cluster' }, `Cluster: ${cluster.name ?? cluster.id}`)
        : h('p', { class: 'node-cluster' }, 'Cluster: none'),
      h('h3', {}, `Connections (${incident.length})`),
      h(
        'ul',
        { class: 'neighbor-list' },
        incident.map((edge) => {
          const otherId = edge.source === node.id ? edge.target : edge.source;
          const direction = edge.source === node.id ? '->' : '<-';
          return h(
            'li',
            { 'data-action': 'select-edge', 'data-id': edge.id, class: 'neighbor-item' },
            `${direction} ${otherId} [${edge.relationship}] x${edge.weight}`,
          );
        }),
      ),
    );
  }
  if (selection.kind === 'edge') {
    const edge = snapshot.edges.get(selection.id);
    if (!edge) return h('aside', { class: 'detail missing' }, 'Edge not in snapshot.');
    return h(
      'aside',
      { class: 'detail detail-edge' },
      h('h2', {}, `${edge.source} -[${edge.relationship}]-> ${edge.target}`),
      h('p', { class: 'edge-outcome' }, `Net outcome: ${edge.net_outcome}`),
      h('h3', {}, `Findings (${edge.weight})`),
      h(
        'ul',
        { class: 'finding-list' },
        edge.findings.map((finding) => {
          const paper = snapshot.papers.get(finding.paper_id);
          return h(
            'li',
            { class: 'finding-item' },
            h('span', { class: 'finding-text' }, finding.text),
            ' ',
            h(
              'a',
              {
                class: 'paper-link',
                'data-action': 'select-paper',
                'data-id': finding.paper_id,
                href: `#/papers?sel=paper:${encodeURIComponent(finding.paper_id)}`,
              },
              paper ? paper.title : finding.paper_id,
            ),
          );
        }),
      ),
    );
  }
  if (selection.kind === 'paper') {
    const paper = snapshot.papers.get(selection.id);
    if (!paper) return h('aside', { class: 'detail missing' }, 'Paper not in snapshot.');
    const onEdges = snapshot.graph.edges.filter((e) =>
      e.findings.some((f) => f.paper_id === paper.id),
    );
    return h(
      'aside',
      { class: 'detail detail-paper' },
      h('h2', {}, paper.title),
      h('p', { class: 'paper-meta' }, `${paper.venue}${paper.year ? `, ${paper.year}` : ''}`),
      h('p', { class: 'paper-abstract' }, paper.abstract),
      h('h3', {}, `Findings in the graph (${onEdges.length})`),
      h(
        'ul',
        { class: 'finding-list' },
        onEdges.flatMap((edge) =>
          edge.findings
            .filter((f) => f.paper_id === paper.id)
            .map((f) =>
              h(
                'li',
                { class: 'finding-item', 'data-action': 'select-edge', 'data-id': edge.id },
                `${f.text} (${edge.source} -[${edge.relationship}]-> ${edge.target})`,
              ),
            ),
        ),
      ),
    );
  }
  const cluster = snapshot.clusters.get(selection.id);
  if (!cluster) return h('aside', { class: 'detail missing' }, 'Cluster not in snapshot.');
  return h(
    'aside',
    { class: 'detail detail-cluster' },
    h('h2', {}, cluster.name ?? cluster.id),
    h('p', {}, cluster.description ?? ''),
    h('h3', {}, `Members (${cluster.members.length})`),
    h(
      'ul',
      { class: 'member-list' },
      cluster.members.map((m) =>
        h('li', { 'data-action': 'select-node', 'data-id': m, class: 'member-item' }, m),
      ),
    ),
  );
}

export function appShell(
  snapshot: Snapshot,
  state: ViewState,
  notice: string | null = null,
): VNode {
  const view =
    state.activeView === 'graph3d'
      ? graph3dView(snapshot, state)
      : state.activeView === 'flows'
        ? flowsView(snapshot, state)
        : papersView(snapshot, state);
  return h(
    'div',
    { class: 'app' },
    h(
      'header',
      { class: 'topbar' },
      h('span', { class: 'brand' }, 'Findings Atlas'),
      h(
        'nav',
        { class: 'view-tabs' },
        VIEWS.map((v) =>
          h(
            'button',
            {
              class: `tab${state.activeView === v ? ' active' : ''}`,
              'data-action': 'switch-view',
              'data-id': v,
            },
            VIEW_LABELS[v],
          ),
        ),
      ),
      h('input', {
        class: 'search-box',
        type: 'search',
        placeholder: 'filter nodes and papers…',
        value: state.filters.query,
        'data-action': 'set-query',
      }),
    ),
    notice ? h('div', { class: 'notice' }, notice) : false,
    h('main', { class: 'content' }, view, detailPanel(snapshot, state.selection)),
  ) as VNode;
}

export function errorBanner(expected: string, got: string): VNode {
  return h(
    'div',
    { class: 'error-banner' },
    h('h1', {}, 'Snapshot schema mismatch'),
    h(
      'p',
      {},
      `This client understands ${expected}, but the service returned ${got}. `,
      'Update whichever side is behind, then reload.',
    ),
  );
}
