/** Browser entry point: URL-fragment routing plus event delegation.
 *
 * State lives in the URL fragment; every transition writes the fragment and
 * re-renders from it, so the back button and deep links come for free.
 */

import { ApiClient } from './api.js';
import { SchemaMismatchError, loadSnapshot, type Snapshot } from './snapshot.js';
import {
  applySelection,
  parseState,
  reconcileSelection,
  serializeState,
  setCamera,
  setQuery,
  switchView,
  type ActiveView,
  type SelectionKind,
  type ViewState,
} from './state.js';
import { SUPPORTED_GRAPH_SCHEMA } from './types.js';
import { appShell, errorBanner, DEFAULT_CAMERA } from './views.js';
import { mount } from './vdom.js';

const API_BASE =
  (document.querySelector('meta[name="atlas-api-base"]') as HTMLMetaElement | null)?.content ??
  '';

let snapshot: Snapshot | null = null;
let notice: string | null = null;

function currentState(): ViewState {
  return parseState(window.location.hash);
}

function pushState(state: ViewState): void {
  const fragment = serializeState(state);
  if (fragment !== window.location.hash) {
    window.location.hash = fragment; // triggers hashchange -> render
  } else {
    render();
  }
}

function render(): void {
  const root = document.getElementById('app');
  if (!root || !snapshot) return;
  const { state, notice: staleNotice } = reconcileSelection(currentState(), snapshot);
  mount(appShell(snapshot, state, staleNotice ?? notice), root);
  notice = null;
}

function onClick(event: MouseEvent): void {
  const target = (event.target as HTMLElement).closest('[data-action]');
  if (!target || !snapshot) return;
  const action = target.getAttribute('data-action');
  const id = target.getAttribute('data-id') ?? '';
  const state = currentState();
  if (action === 'switch-view') {
    pushState(switchView(state, id as ActiveView));
  } else if (action?.startsWith('select-')) {
    const kind = action.slice('select-'.length) as SelectionKind;
    if (!snapshot.has(kind, id)) {
      notice = `${kind} "${id}" is not in the loaded snapshot.`;
      render();
      return;
    }
    let next = applySelection(state, { kind, id });
    if (kind === 'paper') next = switchView(next, 'papers');
    event.preventDefault();
    pushState(next);
  }
}

function onSearchInput(event: Event): void {
  const input = event.target as HTMLInputElement;
  if (input.getAttribute('data-action') !== 'set-query') return;
  pushState(setQuery(currentState(), input.value));
}

function onDragRotate(): void {
  let dragging = false;
  let last: { x: number; y: number } | null = null;
  document.addEventListener('mousedown', (e) => {
    if ((e.target as HTMLElement).closest('.graph3d-canvas')) {
      dragging = true;
      last = { x: e.clientX, y: e.clientY };
    }
  });
  document.addEventListener('mouseup', () => {
    dragging = false;
    last = null;
  });
  document.addEventListener('mousemove', (e) => {
    if (!dragging || !last) return;
    const state = currentState();
    const camera = state.camera ?? DEFAULT_CAMERA;
    const next = {
      rx: camera.rx + (e.clientY - last.y) * 0.005,
      ry: camera.ry + (e.clientX - last.x) * 0.005,
      zoom: camera.zoom,
    };
    last = { x: e.clientX, y: e.clientY };
    pushState(setCamera(state, next));
  });
}

async function boot(): Promise<void> {
  const root = document.getElementById('app');
  if (!root) return;
  root.textContent = 'Loading snapshot…';
  const client = new ApiClient(API_BASE);
  try {
    snapshot = await loadSnapshot(client);
  } catch (error) {
    if (error instanceof SchemaMismatchError) {
      mount(errorBanner(SUPPORTED_GRAPH_SCHEMA, error.got), root);
      return;
    }
    root.textContent = `Failed to load snapshot: ${String(error)}`;
    return;
  }
  document.addEventListener('click', onClick);
  document.addEventListener('change', onSearchInput);
  window.addEventListener('hashchange', render);
  onDragRotate();
  render();
}

void boot();
