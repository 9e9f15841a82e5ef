/**
 * Thin typed client over the session service JSON API.
 *
 * Every method maps to exactly one endpoint. Failures become ApiError
 * with the parsed detail attached, so callers can distinguish "batch
 * already advanced" (409) from validation trouble (422) without string
 * matching on messages.
 */

import type {
  AnomalyLabel,
  CreateSessionRequest,
  CreateSessionResponse,
  QueryBatch,
  SessionSummary,
  SubmitLabelsResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
    message: string
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Index set the server expected, when it rejected a label batch. */
  get expectedIndices(): number[] | null {
    if (
      this.detail !== null &&
      typeof this.detail === "object" &&
      Array.isArray((this.detail as { expected?: unknown }).expected)
    ) {
      return (this.detail as { expected: number[] }).expected;
    }
    return null;
  }
}

function detailMessage(detail: unknown, status: number): string {
  if (typeof detail === "string") return detail;
  if (detail !== null && typeof detail === "object") {
    const msg = (detail as { message?: unknown }).message;
    if (typeof msg === "string") return msg;
  }
  return `request failed with status ${status}`;
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail: unknown = null;
      try {
        detail = (await resp.json()).detail ?? null;
      } catch {
        // non-JSON error body; keep detail null
      }
      throw new ApiError(resp.status, detail, detailMessage(detail, resp.status));
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.post("/sessions", req);
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.request(`/sessions/${id}`);
  }

  getQueries(id: string): Promise<QueryBatch> {
    return this.request(`/sessions/${id}/queries`);
  }

  /** One atomic batch; the server rejects partial or mismatched sets. */
  submitLabels(
    id: string,
    labels: Record<string, AnomalyLabel>
  ): Promise<SubmitLabelsResponse> {
    return this.post(`/sessions/${id}/labels`, { labels });
  }

  autostep(id: string, rounds: number): Promise<{ rounds_advanced: number; summary: SessionSummary }> {
    return this.post(`/sessions/${id}/autostep`, { rounds });
  }

  reportUrl(id: string): string {
    return `${this.baseUrl}/sessions/${id}/report`;
  }

  async fetchReport(id: string): Promise<string> {
    const resp = await this.fetchFn(this.reportUrl(id));
    if (!resp.ok) {
      throw new ApiError(resp.status, null, `report fetch failed with status ${resp.status}`);
    }
    return resp.text();
  }
}
