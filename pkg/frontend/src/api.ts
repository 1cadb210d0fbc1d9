/**
 * Thin typed client for the review service HTTP+JSON API.
 *
 * Every call goes through the documented endpoints; the client holds no
 * state the server cannot reconstruct. Configuration (base URL, optional
 * shared token) comes from config.json next to the built assets.
 */

export interface Task {
  task_id: string;
  sample_id: string;
  image_path: string;
  pseudo_label: string;
  provenance: string;
  status: string;
  correction: string | null;
  reviewer: string | null;
  reject_reason: string | null;
  updated_at: number;
}

export interface Progress {
  pending: number;
  in_review: number;
  corrected: number;
  approved: number;
  rejected: number;
  total: number;
}

export interface NextResponse {
  task: Task | null;
  progress: Progress;
}

export interface ApiConfig {
  apiBase: string;
  token?: string;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ReviewApi {
  constructor(
    private cfg: ApiConfig,
    private fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private headers(json: boolean): Record<string, string> {
    const h: Record<string, string> = {};
    if (json) h["Content-Type"] = "application/json";
    if (this.cfg.token) h["X-Review-Token"] = this.cfg.token;
    return h;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.cfg.apiBase + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        detail = body.detail ?? body.error ?? detail;
      } catch {
        /* non-JSON error body; keep statusText */
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  nextTask(reviewer: string): Promise<NextResponse> {
    const q = new URLSearchParams({ reviewer });
    return this.request(`/api/tasks/next?${q}`, {
      headers: this.headers(false),
    });
  }

  submit(
    taskId: string,
    body: { action: string; reviewer: string; text?: string; reason?: string },
  ): Promise<{ task: Task }> {
    return this.request(`/api/tasks/${taskId}/submit`, {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify(body),
    });
  }

  release(taskId: string): Promise<{ task: Task }> {
    return this.request(`/api/tasks/${taskId}/release`, {
      method: "POST",
      headers: this.headers(false),
    });
  }

  progress(): Promise<Progress> {
    return this.request("/api/progress", { headers: this.headers(false) });
  }

  imageUrl(sampleId: string): string {
    return `${this.cfg.apiBase}/api/images/${sampleId}`;
  }
}

export async function loadConfig(
  fetchImpl: FetchLike = (u, i) => fetch(u, i),
): Promise<ApiConfig> {
  try {
    const resp = await fetchImpl("config.json");
    if (resp.ok) {
      const cfg = await resp.json();
      return { apiBase: cfg.apiBase ?? "", token: cfg.token };
    }
  } catch {
    /* fall through to same-origin default */
  }
  return { apiBase: "" };
}
