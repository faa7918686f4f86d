/** Typed fetch client for the annotation service. */

import type {
  AnnotationDraft,
  DetectResponse,
  PairDetail,
  PairPage,
} from "./types.js";

export interface ListOptions {
  status?: string;
  page?: number;
  pageSize?: number;
}

export type SubmitOutcome =
  | { kind: "ok"; version: number }
  | { kind: "conflict"; currentVersion: number }
  | { kind: "invalid"; violations: unknown[] }
  | { kind: "error"; status: number; detail: unknown };

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`request failed with ${status}`);
  }
}

type Fetch = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string | null = null,
    private fetchImpl: Fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const headers = new Headers(init?.headers);
    if (this.token) headers.set("Authorization", `Bearer ${this.token}`);
    return this.fetchImpl(`${this.baseUrl}${path}`, { ...init, headers });
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await response.json().catch(() => null));
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.json("/health");
  }

  listPairs(datasetId: string, options: ListOptions = {}): Promise<PairPage> {
    const params = new URLSearchParams();
    if (options.status) params.set("status", options.status);
    params.set("page", String(options.page ?? 1));
    params.set("page_size", String(options.pageSize ?? 50));
    return this.json(`/datasets/${encodeURIComponent(datasetId)}/pairs?${params}`);
  }

  getPair(pairId: string): Promise<PairDetail> {
    return this.json(`/pairs/${encodeURIComponent(pairId)}`);
  }

  detect(pairId: string, engine: string, force = false): Promise<DetectResponse> {
    const params = new URLSearchParams({ engine });
    if (force) params.set("force", "true");
    return this.json(`/pairs/${encodeURIComponent(pairId)}/detect?${params}`, {
      method: "POST",
    });
  }

  async submitAnnotation(
    pairId: string,
    draft: AnnotationDraft,
    expectedVersion: number,
  ): Promise<SubmitOutcome> {
    const response = await this.request(
      `/pairs/${encodeURIComponent(pairId)}/annotation`,
      {
        method: "PUT",
        headers: {
          "Content-Type": "application/json",
          "If-Match": String(expectedVersion),
        },
        body: JSON.stringify(draft),
      },
    );
    if (response.ok) {
      const body = (await response.json()) as { version: number };
      return { kind: "ok", version: body.version };
    }
    const detail = await response.json().catch(() => ({}));
    if (response.status === 409) {
      return {
        kind: "conflict",
        currentVersion: Number(detail?.detail?.current_version ?? -1),
      };
    }
    if (response.status === 422 && detail?.detail?.violations) {
      return { kind: "invalid", violations: detail.detail.violations };
    }
    return { kind: "error", status: response.status, detail };
  }

  exportUrl(datasetId: string, format: "json" | "csv"): string {
    return `${this.baseUrl}/datasets/${encodeURIComponent(datasetId)}/export?format=${format}`;
  }
}
