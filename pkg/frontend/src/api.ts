/** Thin fetch wrapper over the atlas HTTP API.
 *
 * `fetch` is injectable so tests can serve recorded payloads; list endpoints
 * are walked cursor by cursor so callers always see complete result sets.
 */

import type {
  AnalysisDocument,
  ApiErrorBody,
  FlowRow,
  GraphDocument,
  Page,
  PaperDetail,
  PaperRecord,
  SearchResult,
} from './types.js';

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export interface FlowsQuery {
  group_by?: 'node' | 'thematic_cluster';
  cause_type?: string;
  effect_type?: string;
  cluster?: string;
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    const body = (await response.json()) as T | ApiErrorBody;
    if (!response.ok) {
      const error = body as ApiErrorBody;
      throw new ApiError(error.code ?? 'unknown', error.message ?? 'request failed', response.status);
    }
    return body as T;
  }

  private async getAllPages<T>(path: string): Promise<Page<T>> {
    const joiner = path.includes('?') ? '&' : '?';
    let page = await this.get<Page<T>>(path);
    const items = [...page.items];
    const totalCount = page.total_count;
    while (page.next_cursor) {
      page = await this.get<Page<T>>(
        `${path}${joiner}cursor=${encodeURIComponent(page.next_cursor)}`,
      );
      items.push(...page.items);
    }
    return { items, total: items.length, next_cursor: null, total_count: totalCount };
  }

  graph(): Promise<GraphDocument> {
    return this.get('/api/graph');
  }

  analysis(): Promise<AnalysisDocument> {
    return this.get('/api/analysis');
  }

  flows(query: FlowsQuery = {}): Promise<Page<FlowRow>> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query)) {
      if (value) params.set(key, value);
    }
    const suffix = params.toString() ? `?${params.toString()}` : '';
    return this.getAllPages<FlowRow>(`/api/flows${suffix}`);
  }

  papers(): Promise<Page<PaperRecord>> {
    return this.getAllPages<PaperRecord>('/api/papers');
  }

  paper(paperId: string): Promise<PaperDetail> {
    return this.get(`/api/papers/${encodeURIComponent(paperId)}`);
  }

  search(query: string): Promise<SearchResult> {
    return this.get(`/api/search?q=${encodeURIComponent(query)}`);
  }
}
