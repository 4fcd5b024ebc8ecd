/** View state shared by the three views, serializable to the URL fragment.
 *
 * The fragment is the single source of truth for deep links:
 * `#/graph3d?sel=node:ai%3Allm&q=music&types=ai,human&clusters=a0&cam=0.4,-0.2,1.5`
 * and `parseState(serializeState(s))` returns exactly `s` for every
 * reachable state, so any screen can be restored from its URL.
 */

import type { EntityType } from './types.js';

export type ActiveView = 'graph3d' | 'flows' | 'papers';

export type SelectionKind = 'node' | 'edge' | 'paper' | 'cluster';

export interface Selection {
  kind: SelectionKind;
  id: string;
}

export interface CameraPose {
  rx: number;
  ry: number;
  zoom: number;
}

export interface Filters {
  query: string;
  types: EntityType[];
  clusters: string[];
}

export interface ViewState {
  activeView: ActiveView;
  selection: Selection | null;
  filters: Filters;
  camera: CameraPose | null;
}

export const VIEWS: ActiveView[] = ['graph3d', 'flows', 'papers'];

export function initialState(): ViewState {
  return {
    activeView: 'graph3d',
    selection: null,
    filters: { query: '', types: [], clusters: [] },
    camera: null,
  };
}

export function serializeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.selection) {
    params.set('sel', `${state.selection.kind}:${encodeURIComponent(state.selection.id)}`);
  }
  if (state.filters.query) params.set('q', state.filters.query);
  if (state.filters.types.length) params.set('types', state.filters.types.join(','));
  if (state.filters.clusters.length) params.set('clusters', state.filters.clusters.join(','));
  if (state.camera) {
    params.set('cam', [state.camera.rx, state.camera.ry, state.camera.zoom].join(','));
  }
  const query = params.toString();
  return `#/${state.activeView}${query ? '?' + query : ''}`;
}

const SELECTION_KINDS: SelectionKind[] = ['node', 'edge', 'paper', 'cluster'];
const ENTITY_TYPES: EntityType[] = ['human', 'ai', 'co'];

export function parseState(fragment: string): ViewState {
  const state = initialState();
  const body = fragment.replace(/^#\/?/, '');
  if (!body) return state;
  const [viewPart, queryPart] = body.split('?', 2);
  if ((VIEWS as string[]).includes(viewPart)) state.activeView = viewPart as ActiveView;
  if (!queryPart) return state;
  const params = new URLSearchParams(queryPart);
  const sel = params.get('sel');
  if (sel) {
    const colon = sel.indexOf(':');
    const kind = colon === -1 ? sel : sel.slice(0, colon);
    if ((SELECTION_KINDS as string[]).includes(kind) && colon !== -1) {
      state.selection = {
        kind: kind as SelectionKind,
        id: decodeURIComponent(sel.slice(colon + 1)),
      };
    }
  }
  state.filters.query = params.get('q') ?? '';
  const types = params.get('types');
  if (types) {
    state.filters.types = types
      .split(',')
      .filter((t): t is EntityType => (ENTITY_TYPES as string[]).includes(t));
  }
  const clusters = params.get('clusters');
  if (clusters) state.filters.clusters = clusters.split(',').filter(Boolean);
  const cam = params.get('cam');
  if (cam) {
    const parts = cam.split(',').map(Number);
    if (parts.length === 3 && parts.every((v) => Number.isFinite(v))) {
      state.camera = { rx: parts[0], ry: parts[1], zoom: parts[2] };
    }
  }
  return state;
}

// ---------------------------------------------------------------------------
// pure transitions

export function switchView(state: ViewState, view: ActiveView): ViewState {
  // Filters, selection, and camera survive view changes by contract.
  return { ...state, activeView: view };
}

export function applySelection(state: ViewState, selection: Selection | null): ViewState {
  return { ...state, selection };
}

export function setQuery(state: ViewState, query: string): ViewState {
  return { ...state, filters: { ...state.filters, query } };
}

export function toggleType(state: ViewState, entityType: EntityType): ViewState {
  const types = state.filters.types.includes(entityType)
    ? state.filters.types.filter((t) => t !== entityType)
    : [...state.filters.types, entityType];
  return { ...state, filters: { ...state.filters, types } };
}

export function toggleCluster(state: ViewState, clusterId: string): ViewState {
  const clusters = state.filters.clusters.includes(clusterId)
    ? state.filters.clusters.filter((c) => c !== clusterId)
    : [...state.filters.clusters, clusterId];
  return { ...state, filters: { ...state.filters, clusters } };
}

export function setCamera(state: ViewState, camera: CameraPose | null): ViewState {
  return { ...state, camera };
}

export interface SelectionCheck {
  has(kind: SelectionKind, id: string): boolean;
}

/** Drop a selection that no longer resolves in the loaded snapshot. */
export function reconcileSelection(
  state: ViewState,
  snapshot: SelectionCheck,
): { state: ViewState; notice: string | null } {
  if (!state.selection || snapshot.has(state.selection.kind, state.selection.id)) {
    return { state, notice: null };
  }
  const stale = state.selection;
  return {
    state: { ...state, selection: null },
    notice: `Selection ${stale.kind} "${stale.id}" is not in the loaded snapshot; cleared.`,
  };
}
