// Typed client for the work-registry HTTP API. The UI computes nothing
// itself: scores, bands, decisions, and clusters all come from here.

export interface TitleView {
  lang: string | null;
  text: string;
}

export interface AuthorView {
  uri: string | null;
  name: string | null;
}

export interface IncipitView {
  lang: string | null;
  text: string;
}

export interface SourceMsView {
  uri: string;
  locus_from: string | null;
  locus_to: string | null;
}

export interface SideContext {
  kind: 'stub' | 'work' | 'unknown';
  titles: TitleView[];
  authors: AuthorView[];
  incipit: IncipitView | null;
  source_ms?: SourceMsView | null;
  provenance?: string;
}

export interface DecisionView {
  verdict: 'accept' | 'reject';
  editor: string;
  timestamp: string;
}

export interface QueueCandidate {
  candidate_id: string;
  left: string;
  right: string;
  score: number | null;
  features: Record<string, number>;
  band: 'auto' | 'review' | 'reject' | null;
  decision: DecisionView | null;
  left_context: SideContext;
  right_context: SideContext;
}

export interface Page<T> {
  total: number;
  limit: number;
  offset: number;
  items: T[];
}

export interface Cluster {
  cluster_id: string;
  members: string[];
}

export interface DecisionAck {
  status: 'recorded' | 'unchanged';
  candidate_id: string;
  verdict: string;
  editor: string;
}

export interface QueueFilters {
  band?: string;
  editor?: string;
  minScore?: number;
  limit?: number;
  offset?: number;
}

/** Error carrying the server's {code, message} body and the HTTP status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function asJson<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'HTTP_ERROR';
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, code, message);
}

export class RegistryClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const query = Object.entries(params ?? {})
      .filter(([, v]) => v !== undefined && v !== '')
      .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
      .join('&');
    return `${this.baseUrl}${path}${query ? `?${query}` : ''}`;
  }

  /** Paged review queue, highest score first (server-side ordering). */
  loadQueue(filters: QueueFilters = {}): Promise<Page<QueueCandidate>> {
    return this.fetchImpl(
      this.url('/api/review/queue', {
        band: filters.band,
        editor: filters.editor,
        min_score: filters.minScore,
        limit: filters.limit,
        offset: filters.offset,
      }),
    ).then((r) => asJson<Page<QueueCandidate>>(r));
  }

  submitDecision(candidateId: string, verdict: 'accept' | 'reject', editor: string): Promise<DecisionAck> {
    return this.fetchImpl(this.url('/api/review/decision'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ candidate_id: candidateId, verdict, editor }),
    }).then((r) => asJson<DecisionAck>(r));
  }

  loadClusters(): Promise<Page<Cluster>> {
    return this.fetchImpl(this.url('/api/review/clusters')).then((r) => asJson<Page<Cluster>>(r));
  }
}
