import type {
  PublishedArticle,
  Report,
  SubmissionFormData,
  SubmissionStatus,
} from "./types.js";

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiClientOptions {
  baseUrl?: string;
  botHandle?: string;
  fetchImpl?: FetchLike;
  eventId?: () => string;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed client over the journal's REST endpoints. The acting person is
 * identified by a stub header; the server decides what they may do. */
export class ApiClient {
  readonly baseUrl: string;
  readonly botHandle: string;
  private fetchImpl: FetchLike;
  private eventId: () => string;
  actorHandle: string | null = null;

  constructor(options: ApiClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.botHandle = options.botHandle ?? "whedon";
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.eventId =
      options.eventId ?? (() => `ui-${Date.now()}-${Math.random().toString(36).slice(2)}`);
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.actorHandle) headers["X-Actor-Handle"] = this.actorHandle;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const payload = await response.json();
        detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  submit(form: SubmissionFormData): Promise<SubmissionStatus> {
    return this.request("POST", "/api/submissions", {
      title: form.title,
      repository_url: form.repository_url,
      software_version: form.software_version,
      author: { handle: form.author_handle, name: form.author_name || null },
      inquiry: form.inquiry ?? "",
    });
  }

  listSubmissions(state?: string): Promise<{ submissions: SubmissionStatus[] }> {
    const query = state ? `?state=${encodeURIComponent(state)}` : "";
    return this.request("GET", `/api/submissions${query}`);
  }

  status(id: string): Promise<SubmissionStatus> {
    return this.request("GET", `/api/submissions/${encodeURIComponent(id)}`);
  }

  published(): Promise<{ articles: PublishedArticle[] }> {
    return this.request("GET", "/api/published");
  }

  report(): Promise<Report> {
    return this.request("GET", "/api/report");
  }

  badgeUrl(id: string): string {
    return `${this.baseUrl}/api/submissions/${encodeURIComponent(id)}/badge.svg`;
  }

  toggleChecklistItem(
    id: string,
    reviewer: string,
    itemId: string,
    checked: boolean,
  ): Promise<SubmissionStatus> {
    if (!this.actorHandle) return Promise.reject(new ApiError(0, "sign in first"));
    return this.request("POST", `/api/submissions/${encodeURIComponent(id)}/checklist`, {
      reviewer,
      item_id: itemId,
      checked,
      actor: this.actorHandle,
    });
  }

  /** Assignment and review-start actions are comment-equivalent: the UI posts
   * the same command a human would type on the tracking issue. */
  sendCommand(status: SubmissionStatus, command: string): Promise<{ status: string }> {
    const issue = status.review_issue ?? status.pre_review_issue;
    if (!issue) return Promise.reject(new ApiError(0, "submission has no tracking issue yet"));
    if (!this.actorHandle) return Promise.reject(new ApiError(0, "sign in first"));
    return this.request("POST", "/api/events", {
      kind: "comment_created",
      repository: issue.repository,
      issue_number: issue.number,
      actor: this.actorHandle,
      body: `@${this.botHandle} ${command}`,
      event_id: this.eventId(),
      occurred_at: new Date().toISOString(),
    });
  }

  assignEditor(status: SubmissionStatus, handle: string): Promise<{ status: string }> {
    return this.sendCommand(status, `assign @${handle} as editor`);
  }

  assignReviewer(status: SubmissionStatus, handle: string): Promise<{ status: string }> {
    return this.sendCommand(status, `assign @${handle} as reviewer`);
  }

  startReview(status: SubmissionStatus, magicWord: string): Promise<{ status: string }> {
    return this.sendCommand(status, `start review magic-word=${magicWord}`);
  }
}
