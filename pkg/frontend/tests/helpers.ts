import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { ApiClient, type FetchLike } from '../src/api.js';
import { loadSnapshot, type Snapshot } from '../src/snapshot.js';
import type { GraphDocument } from '../src/types.js';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), 'utf-8')) as T;
}

/** fetch stub serving recorded API payloads by path prefix. */
export function fixtureFetch(overrides: Record<string, unknown> = {}): FetchLike {
  const routes: Record<string, unknown> = {
    '/api/graph': fixture('graph.json'),
    '/api/flows': fixture('flows_by_cluster.json'),
    '/api/papers': fixture('papers_all.json'),
    '/api/analysis': fixture('analysis.json'),
    '/api/clusters': fixture('clusters.json'),
    '/api/stats': fixture('stats.json'),
    ...overrides,
  };
  return async (url: string) => {
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    const match = Object.keys(routes)
      .sort((a, b) => b.length - a.length)
      .find((prefix) => path.startsWith(prefix));
    if (!match) {
      return {
        ok: false,
        status: 404,
        json: async () => ({ code: 'not-found', message: `no fixture for ${path}` }),
      };
    }
    return { ok: true, status: 200, json: async () => routes[match] };
  };
}

export function fixtureClient(overrides: Record<string, unknown> = {}): ApiClient {
  return new ApiClient('', fixtureFetch(overrides));
}

export async function fixtureSnapshot(): Promise<Snapshot> {
  return loadSnapshot(fixtureClient());
}

export function fixtureGraph(): GraphDocument {
  return fixture<GraphDocument>('graph.json');
}
