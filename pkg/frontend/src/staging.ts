/**
 * Local staging area for the pending batch.
 *
 * The service commits labels all-or-nothing, so entered labels live here
 * until every row is decided. Entries survive failed submits and, when a
 * storage backend is supplied, a page reload or server restart.
 */

import type { AnomalyLabel } from "./types.js";

/** The subset of window.localStorage the staging area needs. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class LabelStaging {
  private entries = new Map<number, AnomalyLabel>();
  private indices: number[] = [];

  constructor(
    private readonly store: KeyValueStore | null = null,
    private readonly storageKey: string = "labelbudget.staging"
  ) {}

  /**
   * Bind the staging area to a new batch. Stale entries (indices not in
   * the batch) are dropped; matching persisted entries are restored.
   */
  beginBatch(sessionId: string, round: number, indices: number[]): void {
    this.indices = [...indices];
    const restored = this.load();
    this.entries = new Map();
    if (
      restored &&
      restored.sessionId === sessionId &&
      restored.round === round
    ) {
      for (const [k, v] of Object.entries(restored.labels)) {
        const idx = Number(k);
        if (this.indices.includes(idx) && (v === 0 || v === 1)) {
          this.entries.set(idx, v);
        }
      }
    }
    this.sessionId = sessionId;
    this.round = round;
    this.persist();
  }

  private sessionId = "";
  private round = 0;

  setLabel(index: number, label: AnomalyLabel): void {
    if (!this.indices.includes(index)) {
      throw new Error(`index ${index} is not part of the pending batch`);
    }
    this.entries.set(index, label);
    this.persist();
  }

  clearLabel(index: number): void {
    this.entries.delete(index);
    this.persist();
  }

  getLabel(index: number): AnomalyLabel | undefined {
    return this.entries.get(index);
  }

  get labeledCount(): number {
    return this.entries.size;
  }

  get batchSize(): number {
    return this.indices.length;
  }

  /** Submit stays disabled until this turns true. */
  get isComplete(): boolean {
    return this.indices.length > 0 && this.entries.size === this.indices.length;
  }

  /**
   * The exact body for POST /labels. Throws while incomplete; a partial
   * batch must never reach the wire.
   */
  toPayload(): Record<string, AnomalyLabel> {
    if (!this.isComplete) {
      throw new Error(
        `batch incomplete: ${this.entries.size} of ${this.indices.length} rows labeled`
      );
    }
    const out: Record<string, AnomalyLabel> = {};
    for (const idx of this.indices) {
      out[String(idx)] = this.entries.get(idx)!;
    }
    return out;
  }

  /** Called after the server accepts the batch. */
  finishBatch(): void {
    this.entries.clear();
    this.indices = [];
    this.store?.removeItem(this.storageKey);
  }

  private persist(): void {
    if (!this.store) return;
    this.store.setItem(
      this.storageKey,
      JSON.stringify({
        sessionId: this.sessionId,
        round: this.round,
        labels: Object.fromEntries(this.entries),
      })
    );
  }

  private load(): { sessionId: string; round: number; labels: Record<string, AnomalyLabel> } | null {
    if (!this.store) return null;
    const raw = this.store.getItem(this.storageKey);
    if (!raw) return null;
    try {
      return JSON.parse(raw);
    } catch {
      return null;
    }
  }
}
