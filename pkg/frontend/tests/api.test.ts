import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { status } from "./fixtures.js";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function mockFetch(body: unknown, statusCode = 200) {
  const calls: Recorded[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status: statusCode,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, impl };
}

function client(body: unknown, statusCode = 200) {
  const { calls, impl } = mockFetch(body, statusCode);
  const api = new ApiClient({
    baseUrl: "http://api.test",
    fetchImpl: impl,
    eventId: () => "ui-fixed",
  });
  return { api, calls };
}

describe("requests", () => {
  it("posts the submission form to /api/submissions", async () => {
    const { api, calls } = client(status());
    await api.submit({
      title: "t",
      repository_url: "https://x.org/r",
      software_version: "1.0",
      author_handle: "leland",
    });
    expect(calls[0].url).toBe("http://api.test/api/submissions");
    expect(calls[0].init?.method).toBe("POST");
    const sent = JSON.parse(String(calls[0].init?.body));
    expect(sent.author).toEqual({ handle: "leland", name: null });
  });

  it("sends the stub identity header when signed in", async () => {
    const { api, calls } = client(status());
    api.actorHandle = "danielskatz";
    await api.status("S1");
    const headers = calls[0].init?.headers as Record<string, string>;
    expect(headers["X-Actor-Handle"]).toBe("danielskatz");
  });

  it("filters the submission list by state", async () => {
    const { api, calls } = client({ submissions: [] });
    await api.listSubmissions("pre-review");
    expect(calls[0].url).toBe("http://api.test/api/submissions?state=pre-review");
  });

  it("builds the badge URL for embedding", () => {
    const { api } = client({});
    expect(api.badgeUrl("S1")).toBe("http://api.test/api/submissions/S1/badge.svg");
  });

  it("wraps API failures with the server detail", async () => {
    const { api } = client({ detail: "no submission with id 'x'" }, 404);
    await expect(api.status("x")).rejects.toMatchObject({
      status: 404,
      message: "no submission with id 'x'",
    });
    await expect(api.status("x")).rejects.toBeInstanceOf(ApiError);
  });
});

describe("checklist toggles", () => {
  it("posts the toggle with the acting handle", async () => {
    const { api, calls } = client(status());
    api.actorHandle = "zhaozhang";
    await api.toggleChecklistItem("S1", "zhaozhang", "installation", true);
    expect(calls[0].url).toBe("http://api.test/api/submissions/S1/checklist");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      reviewer: "zhaozhang",
      item_id: "installation",
      checked: true,
      actor: "zhaozhang",
    });
  });

  it("refuses to toggle while signed out", async () => {
    const { api } = client(status());
    await expect(
      api.toggleChecklistItem("S1", "zhaozhang", "installation", true),
    ).rejects.toMatchObject({ message: "sign in first" });
  });
});

describe("comment-equivalent assignment actions", () => {
  it("posts an editor assignment as a bot command event", async () => {
    const { api, calls } = client({ status: "accepted" });
    api.actorHandle = "arfon";
    await api.assignEditor(status(), "danielskatz");
    expect(calls[0].url).toBe("http://api.test/api/events");
    const event = JSON.parse(String(calls[0].init?.body));
    expect(event.kind).toBe("comment_created");
    expect(event.body).toBe("@whedon assign @danielskatz as editor");
    expect(event.actor).toBe("arfon");
    expect(event.event_id).toBe("ui-fixed");
    // commands land on the review issue when one exists
    expect(event.issue_number).toBe(2);
  });

  it("falls back to the pre-review issue before the review starts", async () => {
    const { api, calls } = client({ status: "accepted" });
    api.actorHandle = "arfon";
    await api.assignReviewer(status({ review_issue: null }), "zhaozhang");
    const event = JSON.parse(String(calls[0].init?.body));
    expect(event.issue_number).toBe(1);
    expect(event.body).toBe("@whedon assign @zhaozhang as reviewer");
  });

  it("renders the start-review safeguard word verbatim", async () => {
    const { api, calls } = client({ status: "accepted" });
    api.actorHandle = "danielskatz";
    await api.startReview(status({ review_issue: null }), "bananas");
    const event = JSON.parse(String(calls[0].init?.body));
    expect(event.body).toBe("@whedon start review magic-word=bananas");
  });

  it("rejects command posting without a tracking issue", async () => {
    const { api } = client({});
    api.actorHandle = "arfon";
    await expect(
      api.assignEditor(status({ review_issue: null, pre_review_issue: null }), "x"),
    ).rejects.toMatchObject({ message: "submission has no tracking issue yet" });
  });
});
