// Pure view builders: payloads in, HTML strings out. No fetching, no
// workflow rules; controls are enabled purely from server capability flags.

import type {
  Capabilities,
  ChecklistItem,
  ChecklistSummary,
  PublishedArticle,
  Report,
  SubmissionStatus,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function progressText(status: SubmissionStatus): string {
  if (status.progress === null) return "";
  const percent = Math.round(status.progress * 100);
  return `<div class="progress"><div class="progress-bar" style="width:${percent}%"></div></div>
  <p class="progress-label">${percent}% of checklist items confirmed</p>`;
}

export function renderSubmitForm(defaults: { authorHandle?: string } = {}): string {
  return `
<h2>Submit your software</h2>
<p class="hint">A minimal amount of information is required for new submissions.</p>
<form id="submit-form">
  <label>Title <input name="title" required placeholder="mypackage: what it does"></label>
  <label>Repository URL <input name="repository_url" type="url" required placeholder="https://github.com/you/mypackage"></label>
  <label>Software version <input name="software_version" required placeholder="v1.0.0"></label>
  <label>Your handle <input name="author_handle" required value="${escapeHtml(defaults.authorHandle ?? "")}"></label>
  <label>Your name <input name="author_name" placeholder="optional"></label>
  <label>Pre-submission notes <textarea name="inquiry" rows="3" placeholder="optional"></textarea></label>
  <button type="submit">Submit for review</button>
  <p id="submit-error" class="error" hidden></p>
</form>`;
}

export function renderTracking(status: SubmissionStatus, badgeUrl: string): string {
  const rows = [
    ["State", escapeHtml(status.state)],
    ["Submitting author", `@${escapeHtml(status.submitting_author)}`],
    ["Editor", status.editor ? `@${escapeHtml(status.editor)}` : "unassigned"],
    [
      "Reviewers",
      status.reviewers.length
        ? status.reviewers.map((r) => `@${escapeHtml(r)}`).join(", ")
        : "none yet",
    ],
    ["Version", escapeHtml(status.software_version)],
    ["Archive DOI", status.archive_doi ? escapeHtml(status.archive_doi) : "not archived yet"],
  ];
  if (status.article_doi) {
    rows.push([
      "Article DOI",
      `<a href="https://doi.org/${escapeHtml(status.article_doi)}">${escapeHtml(status.article_doi)}</a>`,
    ]);
  }
  const tableRows = rows
    .map(([label, value]) => `<tr><th>${label}</th><td>${value}</td></tr>`)
    .join("\n");
  const reviewLink =
    status.checklists.length > 0
      ? `<p><a href="#/submissions/${encodeURIComponent(status.id)}/review">Open the review panel</a></p>`
      : "";
  return `
<h2>${escapeHtml(status.title)}</h2>
<p class="badge-line">
  <img class="status-badge" src="${badgeUrl}" alt="status: ${escapeHtml(status.badge.state_label)}">
</p>
<p class="hint">Embed this badge: <code>${escapeHtml(badgeUrl)}</code></p>
<table class="detail">${tableRows}</table>
${progressText(status)}
${reviewLink}
<p><a href="${escapeHtml(status.repository_url)}">Software repository</a></p>`;
}

function dashboardActions(status: SubmissionStatus, capabilities: Capabilities): string {
  const actions: string[] = [];
  if (capabilities.assign_editor) {
    actions.push(
      `<button data-action="claim" data-id="${status.id}">Claim as editor</button>`,
      `<button data-action="assign-editor" data-id="${status.id}">Assign editor…</button>`,
    );
  }
  if (capabilities.assign_reviewer) {
    actions.push(`<button data-action="assign-reviewer" data-id="${status.id}">Assign reviewer…</button>`);
  }
  if (capabilities.start_review) {
    actions.push(`<button data-action="start-review" data-id="${status.id}">Start review…</button>`);
  }
  return actions.join(" ");
}

export function renderDashboard(submissions: SubmissionStatus[]): string {
  if (submissions.length === 0) {
    return `<h2>Editorial queue</h2><p class="empty">Nothing waiting for triage. Enjoy the quiet.</p>`;
  }
  const rows = submissions
    .map((status) => {
      const editor = status.editor ? `@${escapeHtml(status.editor)}` : "—";
      return `<tr>
  <td>#${status.sequence_number}</td>
  <td><a href="#/submissions/${encodeURIComponent(status.id)}">${escapeHtml(status.title)}</a></td>
  <td>${escapeHtml(status.state)}</td>
  <td>${editor}</td>
  <td>${status.reviewers.length}</td>
  <td class="actions">${dashboardActions(status, status.capabilities)}</td>
</tr>`;
    })
    .join("\n");
  return `
<h2>Editorial queue</h2>
<table class="queue">
<thead><tr><th>#</th><th>Title</th><th>State</th><th>Editor</th><th>Reviewers</th><th></th></tr></thead>
<tbody>${rows}</tbody>
</table>`;
}

function groupByCategory(items: ChecklistItem[]): Map<string, ChecklistItem[]> {
  const grouped = new Map<string, ChecklistItem[]>();
  for (const item of items) {
    const bucket = grouped.get(item.category) ?? [];
    bucket.push(item);
    grouped.set(item.category, bucket);
  }
  return grouped;
}

function renderChecklist(
  status: SubmissionStatus,
  checklist: ChecklistSummary,
  editable: boolean,
): string {
  const sections: string[] = [];
  for (const [category, items] of groupByCategory(checklist.items ?? [])) {
    const lines = items
      .map(
        (item) => `<li>
  <label class="item">
    <input type="checkbox" data-action="toggle-item" data-id="${status.id}"
      data-reviewer="${escapeHtml(checklist.reviewer)}" data-item="${item.id}"
      ${item.checked ? "checked" : ""} ${editable ? "" : "disabled"}>
    <strong>${escapeHtml(item.label)}</strong>: ${escapeHtml(item.prompt)}
  </label>
</li>`,
      )
      .join("\n");
    sections.push(`<section class="category"><h4>${escapeHtml(category)}</h4><ul>${lines}</ul></section>`);
  }
  const completeBanner = checklist.complete
    ? `<p class="banner complete">Review complete: all ${checklist.total} items confirmed.</p>`
    : "";
  return `<section class="reviewer-checklist">
<h3>Checklist of @${escapeHtml(checklist.reviewer)} (${checklist.checked}/${checklist.total})</h3>
${completeBanner}
${sections.join("\n")}
</section>`;
}

export function renderReviewPanel(status: SubmissionStatus): string {
  if (status.checklists.length === 0) {
    return `<h2>Review: ${escapeHtml(status.title)}</h2>
<p class="empty">No reviewer checklists yet${status.fast_track ? " (fast-tracked submission)" : ""}.</p>`;
  }
  const note = status.checklists.every((checklist) => !checklist.editable)
    ? `<p class="hint">Read-only: you cannot edit these checklists (state: ${escapeHtml(status.state)}).</p>`
    : "";
  const panels = status.checklists
    .map((checklist) => renderChecklist(status, checklist, checklist.editable))
    .join("\n");
  return `<h2>Review: ${escapeHtml(status.title)}</h2>${note}${panels}`;
}

export function renderPublishedList(articles: PublishedArticle[]): string {
  if (articles.length === 0) {
    return `<h2>Published articles</h2><p class="empty">Nothing published yet.</p>`;
  }
  const cards = articles
    .map(
      (article) => `<article class="card">
  <h3>${escapeHtml(article.title)}</h3>
  <p class="authors">${article.authors.map(escapeHtml).join(", ")}</p>
  <p class="doi"><a href="https://doi.org/${escapeHtml(article.article_doi)}">${escapeHtml(article.article_doi)}</a></p>
  ${article.archive_doi ? `<p class="archive">archive: ${escapeHtml(article.archive_doi)}</p>` : ""}
  <p><a href="${escapeHtml(article.repository_url)}">repository</a> · published ${escapeHtml(article.published_at.slice(0, 10))}</p>
</article>`,
    )
    .join("\n");
  return `<h2>Published articles</h2><div class="cards">${cards}</div>`;
}

function barChart(title: string, pairs: [string, number][]): string {
  if (pairs.length === 0) return "";
  const top = Math.max(...pairs.map(([, count]) => count));
  const bars = pairs
    .map(
      ([key, count]) => `<div class="bar-row">
  <span class="bar-label">${escapeHtml(key)}</span>
  <span class="bar" style="width:${top ? Math.round((count / top) * 100) : 0}%"></span>
  <span class="bar-count">${count}</span>
</div>`,
    )
    .join("\n");
  return `<section class="chart"><h3>${escapeHtml(title)}</h3>${bars}</section>`;
}

export function renderAnalytics(report: Report | null): string {
  if (report === null || report.record_count === 0) {
    return `<h2>Analytics</h2><p class="empty">No published articles yet; the report will appear here.</p>`;
  }
  const timing = report.time_to_publication_days;
  return `
<h2>Analytics</h2>
<section class="headline">
  <p>${report.record_count} published articles. Time between submission and publication:
  mean ${timing.mean.toFixed(1)} days, median ${timing.median.toFixed(0)} days,
  spanning ${timing.minimum.toFixed(0)}–${timing.maximum.toFixed(0)} days.</p>
  <p>Reviewers per article: ${report.reviewers.mean_reviewers.toFixed(2)} ±
  ${report.reviewers.sd_reviewers.toFixed(2)}.</p>
</section>
${barChart("Programming languages", report.languages)}
${barChart("Articles per editor", report.editors)}
${barChart("Authors per country", report.author_countries)}`;
}

export function renderError(message: string): string {
  return `<p class="error">${escapeHtml(message)}</p>`;
}

export function renderRetryBanner(message: string): string {
  return `<div class="banner retry">${escapeHtml(message)} <button data-action="retry">Retry</button></div>`;
}
