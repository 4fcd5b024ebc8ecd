import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError, type FetchLike } from '../src/api.js';
import type { FlowRow, Page } from '../src/types.js';
import { fixture } from './helpers.js';

function pagedFetch(allItems: number[], pageSize: number): { impl: FetchLike; calls: string[] } {
  const calls: string[] = [];
  const impl: FetchLike = async (url) => {
    calls.push(url);
    const cursorMatch = /cursor=([^&]+)/.exec(url);
    const offset = cursorMatch ? Number(decodeURIComponent(cursorMatch[1])) : 0;
    const items = allItems.slice(offset, offset + pageSize);
    const next = offset + pageSize < allItems.length ? String(offset + pageSize) : null;
    const body: Page<number> = {
      items,
      total: allItems.length,
      next_cursor: next,
      total_count: allItems.reduce((a, b) => a + b, 0),
    };
    return { ok: true, status: 200, json: async () => body };
  };
  return { impl, calls };
}

describe('pagination walker', () => {
  it('aggregates every page and keeps total_count', async () => {
    const all = Array.from({ length: 23 }, (_, i) => i);
    const { impl, calls } = pagedFetch(all, 5);
    const client = new ApiClient('http://svc', impl);
    const page = await client.flows();
    expect(page.items).toEqual(all as unknown as FlowRow[]);
    expect(page.next_cursor).toBeNull();
    expect(page.total_count).toBe(all.reduce((a, b) => a + b, 0));
    expect(calls.length).toBe(5); // ceil(23 / 5)
  });
});

describe('error envelope', () => {
  it('raises ApiError carrying code, message, and status', async () => {
    const impl: FetchLike = async () => ({
      ok: false,
      status: 400,
      json: async () => ({ code: 'invalid-request', message: 'search query must be non-empty' }),
    });
    const client = new ApiClient('', impl);
    await expect(client.search('')).rejects.toMatchObject({
      code: 'invalid-request',
      status: 400,
    });
    await expect(client.search('')).rejects.toBeInstanceOf(ApiError);
  });
});

describe('query building', () => {
  it('flows filters land in the URL', async () => {
    const seen: string[] = [];
    const impl: FetchLike = async (url) => {
      seen.push(url);
      return {
        ok: true,
        status: 200,
        json: async () => fixture<Page<FlowRow>>('flows_by_cluster.json'),
      };
    };
    await new ApiClient('', impl).flows({ group_by: 'node', cause_type: 'ai' });
    expect(seen[0]).toContain('group_by=node');
    expect(seen[0]).toContain('cause_type=ai');
  });

  it('paper ids are URI-encoded', async () => {
    const seen: string[] = [];
    const impl: FetchLike = async (url) => {
      seen.push(url);
      return { ok: true, status: 200, json: async () => fixture('paper_p20.json') };
    };
    await new ApiClient('', impl).paper('10.9999/atlas.p20');
    expect(seen[0]).toBe('/api/papers/10.9999%2Fatlas.p20');
  });
});
