// Typed wrappers over the HTTP API with latest-wins cancelation: issuing
// a new request through the same ApiClient slot aborts the in-flight one.

export interface SearchResult {
  id: string;
  title: string;
  year: number;
  venue: string;
  score: number;
}

export interface SearchResponse {
  query: string;
  mode: string;
  results: SearchResult[];
}

export interface PaperDetail {
  paper: {
    id: string;
    venue: string;
    year: number;
    title: string;
    abstract: string;
    references: string[];
    tokens: string[];
  };
  topic_id: number;
  similar: SearchResult[];
  cites: string[];
  cited_by: string[];
  suggested: { id: string; score: number }[];
}

export interface TopicSummary {
  topic_id: number;
  size: number;
  keywords: string[];
}

export interface MapPoint {
  id: string;
  x: number;
  y: number;
  topic_id: number;
}

export interface TrendTable {
  years: number[];
  topics: number[];
  shares: number[][];
}

export interface VolumeResponse {
  bins: number;
  years: Record<string, number[]>;
}

export interface CentralityRow {
  node: string;
  score: number;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(private base: string = "") {}

  private async get<T>(slot: string, path: string): Promise<T> {
    this.controllers.get(slot)?.abort();
    const controller = new AbortController();
    this.controllers.set(slot, controller);
    const resp = await fetch(this.base + path, { signal: controller.signal });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        detail = (await resp.json()).detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  search(q: string, mode: string, k: number): Promise<SearchResponse> {
    const params = new URLSearchParams({ q, mode, k: String(k), limit: String(k) });
    return this.get("search", `/api/search?${params}`);
  }

  paper(id: string): Promise<PaperDetail> {
    return this.get("paper", `/api/papers/${encodeURIComponent(id)}`);
  }

  topics(): Promise<TopicSummary[]> {
    return this.get("topics", "/api/topics?limit=1000");
  }

  map(): Promise<MapPoint[]> {
    return this.get("map", "/api/map?limit=100000");
  }

  trends(omitYears: number[], hideTopics: number[]): Promise<TrendTable> {
    const params = new URLSearchParams();
    for (const y of omitYears) params.append("omit_year", String(y));
    for (const t of hideTopics) params.append("hide_topic", String(t));
    return this.get("trends", `/api/trends?${params}`);
  }

  volume(bins: number): Promise<VolumeResponse> {
    return this.get("volume", `/api/volume?bins=${bins}`);
  }

  centrality(graph: string, metric: string, top: number): Promise<CentralityRow[]> {
    const params = new URLSearchParams({ graph, metric, top: String(top) });
    return this.get("centrality", `/api/graph/centrality?${params}`);
  }
}
