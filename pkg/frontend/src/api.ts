// Thin typed client over fetch. The fetch function is injectable so tests
// run without a browser or server; DOM code uses the default export.

import type {
  ErrorCodeAnswer,
  ForumPost,
  ForumReply,
  LogReport,
  MaintenancePlan,
  RagAnswer,
  SelfTestSnapshot,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class DeviceDeskApi {
  constructor(
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
    public base = "",
    private token: string | null = null,
  ) {}

  setToken(token: string | null) {
    this.token = token;
  }

  private headers(json = true): Record<string, string> {
    const h: Record<string, string> = {};
    if (json) h["Content-Type"] = "application/json";
    if (this.token) h["Authorization"] = `Bearer ${this.token}`;
    return h;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const err = body?.error ?? {};
      throw new ApiFailure(err.code ?? "HttpError", err.message ?? resp.statusText, resp.status);
    }
    return body as T;
  }

  health() {
    return this.request<{ status: string; segments: Record<string, number>; device_models: string[] }>(
      "/v1/health",
    );
  }

  query(text: string, opts: { language?: string; device_model?: string; session_id?: string } = {}) {
    return this.request<RagAnswer>("/v1/query", {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ text, ...opts }),
    });
  }

  errorCode(code: string) {
    return this.request<ErrorCodeAnswer>(`/v1/error-codes/${encodeURIComponent(code)}`);
  }

  analyzeLog(file: Blob, name = "device.log") {
    const form = new FormData();
    form.append("file", file, name);
    return this.request<LogReport>("/v1/logs/analyze", {
      method: "POST",
      headers: this.headers(false),
      body: form,
    });
  }

  selftestStart(model: string) {
    return this.request<SelfTestSnapshot>(`/v1/selftest/${encodeURIComponent(model)}/start`, {
      method: "POST",
      headers: this.headers(),
    });
  }

  selftestGet(sessionId: string) {
    return this.request<SelfTestSnapshot>(`/v1/selftest/${encodeURIComponent(sessionId)}`);
  }

  selftestAdvance(sessionId: string, result: "pass" | "fail" | "skipped") {
    return this.request<SelfTestSnapshot>(`/v1/selftest/${encodeURIComponent(sessionId)}/advance`, {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ result }),
    });
  }

  maintenancePlan(model: string, horizonDays = 90) {
    return this.request<MaintenancePlan>(
      `/v1/maintenance/${encodeURIComponent(model)}/plan?horizon_days=${horizonDays}`,
    );
  }

  maintenanceIcsUrl(model: string, horizonDays = 90): string {
    return `${this.base}/v1/maintenance/${encodeURIComponent(model)}/plan.ics?horizon_days=${horizonDays}`;
  }

  forumList(deviceModel?: string) {
    const q = deviceModel ? `?device_model=${encodeURIComponent(deviceModel)}` : "";
    return this.request<{ posts: ForumPost[] }>(`/v1/forum/posts${q}`);
  }

  forumGet(postId: string) {
    return this.request<ForumPost & { replies: ForumReply[] }>(
      `/v1/forum/posts/${encodeURIComponent(postId)}`,
    );
  }

  forumCreatePost(title: string, body: string, deviceModel: string) {
    return this.request<ForumPost>("/v1/forum/posts", {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ title, body, device_model: deviceModel }),
    });
  }

  forumReply(postId: string, body: string) {
    return this.request<ForumReply>(`/v1/forum/posts/${encodeURIComponent(postId)}/replies`, {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ body }),
    });
  }

  forumUpvote(replyId: string) {
    return this.request<ForumReply>(`/v1/forum/replies/${encodeURIComponent(replyId)}/upvote`, {
      method: "POST",
      headers: this.headers(),
    });
  }

  forumAccept(postId: string, replyId: string) {
    return this.request<ForumReply>(
      `/v1/forum/posts/${encodeURIComponent(postId)}/accept/${encodeURIComponent(replyId)}`,
      { method: "POST", headers: this.headers() },
    );
  }

  feedback(target: string, verdict: "correct" | "incorrect") {
    return this.request<{ aggregate: { correct: number; incorrect: number } }>("/v1/feedback", {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ target, verdict }),
    });
  }
}
