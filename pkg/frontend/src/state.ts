// Queue session state: filters, paging, keyboard cursor, and the optimistic
// decision lifecycle. All transitions go through the API client; the session
// only mirrors what the server confirms.

import { ApiError, type Cluster, type QueueCandidate, type QueueFilters, type RegistryClient } from './api.js';

export type SessionStatus = 'idle' | 'loading' | 'ready' | 'error';

export interface SessionView {
  status: SessionStatus;
  error: string | null; // network/HTTP failure of the last load; retryable
  candidates: QueueCandidate[];
  total: number;
  selected: number;
  pending: ReadonlySet<string>;
  rowErrors: ReadonlyMap<string, string>;
  clusters: Cluster[];
  filters: QueueFilters;
}

const PAGE_SIZE = 20;

export class ReviewSession {
  private status: SessionStatus = 'idle';
  private error: string | null = null;
  private candidates: QueueCandidate[] = [];
  private total = 0;
  private selected = 0;
  private pending = new Set<string>();
  private rowErrors = new Map<string, string>();
  private clusters: Cluster[] = [];
  filters: QueueFilters = { band: 'review', limit: PAGE_SIZE, offset: 0 };

  constructor(private readonly client: RegistryClient) {}

  view(): SessionView {
    return {
      status: this.status,
      error: this.error,
      candidates: this.candidates,
      total: this.total,
      selected: this.selected,
      pending: this.pending,
      rowErrors: this.rowErrors,
      clusters: this.clusters,
      filters: this.filters,
    };
  }

  selectedCandidate(): QueueCandidate | null {
    return this.candidates[this.selected] ?? null;
  }

  /** (Re)load the queue and the cluster panel; errors leave a retry state. */
  async refresh(): Promise<void> {
    this.status = 'loading';
    this.error = null;
    try {
      const [queue, clusters] = await Promise.all([
        this.client.loadQueue(this.filters),
        this.client.loadClusters(),
      ]);
      this.candidates = queue.items;
      this.total = queue.total;
      this.clusters = clusters.items;
      this.selected = Math.min(this.selected, Math.max(0, this.candidates.length - 1));
      this.status = 'ready';
    } catch (err) {
      this.status = 'error';
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  setFilters(filters: Partial<QueueFilters>): void {
    this.filters = { ...this.filters, ...filters, offset: 0 };
    this.selected = 0;
  }

  nextPage(): boolean {
    const offset = (this.filters.offset ?? 0) + (this.filters.limit ?? PAGE_SIZE);
    if (offset >= this.total) return false;
    this.filters = { ...this.filters, offset };
    this.selected = 0;
    return true;
  }

  prevPage(): boolean {
    const current = this.filters.offset ?? 0;
    if (current === 0) return false;
    this.filters = { ...this.filters, offset: Math.max(0, current - (this.filters.limit ?? PAGE_SIZE)) };
    this.selected = 0;
    return true;
  }

  /** Keyboard cursor; clamps at both ends. */
  move(delta: number): void {
    if (this.candidates.length === 0) return;
    this.selected = Math.min(this.candidates.length - 1, Math.max(0, this.selected + delta));
  }

  skip(): void {
    this.move(1);
  }

  /**
   * Optimistic decision: the row shows the verdict immediately, then is
   * reconciled against the server response. A 409 (conflicting verdict by
   * the same editor) restores the previous state and surfaces inline; a
   * network failure restores and surfaces as a retryable banner.
   */
  async decide(verdict: 'accept' | 'reject', editor: string): Promise<boolean> {
    const candidate = this.selectedCandidate();
    if (!candidate || this.pending.has(candidate.candidate_id)) return false;
    if (!editor) {
      this.rowErrors.set(candidate.candidate_id, 'Set an editor name before deciding.');
      return false;
    }
    const previous = candidate.decision;
    candidate.decision = { verdict, editor, timestamp: '' };
    this.pending.add(candidate.candidate_id);
    this.rowErrors.delete(candidate.candidate_id);
    try {
      await this.client.submitDecision(candidate.candidate_id, verdict, editor);
      this.pending.delete(candidate.candidate_id);
      // clusters reflect the new decision for the editor's next call
      try {
        this.clusters = (await this.client.loadClusters()).items;
      } catch {
        // cluster refresh failure is not fatal to the decision itself
      }
      return true;
    } catch (err) {
      candidate.decision = previous;
      this.pending.delete(candidate.candidate_id);
      if (err instanceof ApiError) {
        this.rowErrors.set(candidate.candidate_id, `${err.code}: ${err.message}`);
      } else {
        this.error = err instanceof Error ? err.message : String(err);
        this.status = 'error';
      }
      return false;
    }
  }
}
