// Hash-routed single-page shell. All state lives on the server; every page
// is a fetch followed by a render, and every action is an API call followed
// by a refetch.

import { ApiClient, ApiError } from "./api.js";
import {
  renderAnalytics,
  renderDashboard,
  renderError,
  renderPublishedList,
  renderRetryBanner,
  renderReviewPanel,
  renderSubmitForm,
  renderTracking,
} from "./views.js";
import type { SubmissionFormData } from "./types.js";

declare global {
  interface Window {
    OJ_CONFIG?: { apiBase?: string; botHandle?: string };
  }
}

const config = window.OJ_CONFIG ?? {};
const api = new ApiClient({ baseUrl: config.apiBase ?? "", botHandle: config.botHandle });
api.actorHandle = localStorage.getItem("oj-handle");

const main = document.getElementById("main") as HTMLElement;
const whoami = document.getElementById("whoami") as HTMLInputElement;
whoami.value = api.actorHandle ?? "";
whoami.addEventListener("change", () => {
  api.actorHandle = whoami.value.trim() || null;
  if (api.actorHandle) localStorage.setItem("oj-handle", api.actorHandle);
  else localStorage.removeItem("oj-handle");
  void route();
});

async function route(): Promise<void> {
  const hash = location.hash || "#/";
  try {
    if (hash === "#/" || hash === "") {
      main.innerHTML = renderSubmitForm({ authorHandle: api.actorHandle ?? undefined });
      bindSubmitForm();
    } else if (hash === "#/dashboard") {
      const [preReview, underReview] = await Promise.all([
        api.listSubmissions("pre-review"),
        api.listSubmissions("under-review"),
      ]);
      main.innerHTML = renderDashboard([
        ...preReview.submissions,
        ...underReview.submissions,
      ]);
    } else if (hash === "#/published") {
      const { articles } = await api.published();
      main.innerHTML = renderPublishedList(articles);
    } else if (hash === "#/analytics") {
      try {
        main.innerHTML = renderAnalytics(await api.report());
      } catch {
        main.innerHTML = renderAnalytics(null);
      }
    } else {
      const review = hash.match(/^#\/submissions\/([^/]+)\/review$/);
      const tracking = hash.match(/^#\/submissions\/([^/]+)$/);
      if (review) {
        const status = await api.status(decodeURIComponent(review[1]));
        main.innerHTML = renderReviewPanel(status);
      } else if (tracking) {
        const id = decodeURIComponent(tracking[1]);
        const status = await api.status(id);
        main.innerHTML = renderTracking(status, api.badgeUrl(id));
      } else {
        main.innerHTML = renderError(`No such page: ${hash}`);
      }
    }
  } catch (error) {
    if (error instanceof ApiError && error.status === 503) {
      main.innerHTML = renderRetryBanner("The review tracker is unavailable right now.");
    } else {
      main.innerHTML = renderError(error instanceof Error ? error.message : String(error));
    }
  }
}

function bindSubmitForm(): void {
  const form = document.getElementById("submit-form") as HTMLFormElement | null;
  if (!form) return;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const payload: SubmissionFormData = {
      title: String(data.get("title") ?? ""),
      repository_url: String(data.get("repository_url") ?? ""),
      software_version: String(data.get("software_version") ?? ""),
      author_handle: String(data.get("author_handle") ?? ""),
      author_name: String(data.get("author_name") ?? "") || undefined,
      inquiry: String(data.get("inquiry") ?? "") || undefined,
    };
    const errorLine = document.getElementById("submit-error") as HTMLElement;
    api
      .submit(payload)
      .then((status) => {
        location.hash = `#/submissions/${encodeURIComponent(status.id)}`;
      })
      .catch((error: unknown) => {
        errorLine.hidden = false;
        errorLine.textContent = error instanceof Error ? error.message : String(error);
      });
  });
}

// Dashboard / review-panel actions are delegated from the main container.
main.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  if (!action || action === "toggle-item") return;
  const id = target.dataset.id;
  void (async () => {
    try {
      if (action === "retry") {
        await route();
        return;
      }
      if (!id) return;
      const status = await api.status(id);
      if (action === "claim" && api.actorHandle) {
        await api.assignEditor(status, api.actorHandle);
      } else if (action === "assign-editor") {
        const handle = prompt("Editor handle to assign:");
        if (!handle) return;
        await api.assignEditor(status, handle.replace(/^@/, ""));
      } else if (action === "assign-reviewer") {
        const handle = prompt("Reviewer handle to assign:");
        if (!handle) return;
        await api.assignReviewer(status, handle.replace(/^@/, ""));
      } else if (action === "start-review") {
        const word = prompt("Magic word (safeguard against premature reviews):");
        if (!word) return;
        await api.startReview(status, word);
      }
      // commands apply asynchronously on the server; give it a beat
      await new Promise((resolve) => setTimeout(resolve, 300));
      await route();
    } catch (error) {
      alert(error instanceof Error ? error.message : String(error));
    }
  })();
});

main.addEventListener("change", (event) => {
  const target = event.target as HTMLInputElement;
  if (target.dataset.action !== "toggle-item") return;
  const { id, reviewer, item } = target.dataset;
  if (!id || !reviewer || !item) return;
  target.disabled = true;
  api
    .toggleChecklistItem(id, reviewer, item, target.checked)
    .then(() => route())
    .catch((error: unknown) => {
      target.checked = !target.checked;
      target.disabled = false;
      alert(error instanceof Error ? error.message : String(error));
    });
});

window.addEventListener("hashchange", () => void route());
void route();
