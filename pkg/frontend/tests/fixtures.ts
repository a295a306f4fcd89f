import type {
  Capabilities,
  ChecklistItem,
  ChecklistSummary,
  PublishedArticle,
  Report,
  SubmissionStatus,
} from "../src/types.js";

const CATEGORY_SHAPE: [string, number][] = [
  ["Conflict of interest", 1],
  ["Code of Conduct", 1],
  ["General checks", 4],
  ["Functionality", 3],
  ["Documentation", 6],
  ["Software paper", 3],
];

export function checklistItems(checkedCount = 0): ChecklistItem[] {
  const items: ChecklistItem[] = [];
  let n = 0;
  for (const [category, count] of CATEGORY_SHAPE) {
    for (let i = 0; i < count; i++) {
      items.push({
        id: `item-${n}`,
        label: `Label ${n}`,
        prompt: `Prompt number ${n}?`,
        category,
        checked: n < checkedCount,
      });
      n += 1;
    }
  }
  return items;
}

export function checklist(overrides: Partial<ChecklistSummary> = {}): ChecklistSummary {
  const items = checklistItems(0);
  return {
    reviewer: "zhaozhang",
    checked: 0,
    total: items.length,
    complete: false,
    editable: true,
    items,
    ...overrides,
  };
}

export function capabilities(overrides: Partial<Capabilities> = {}): Capabilities {
  return {
    assign_editor: false,
    assign_reviewer: false,
    start_review: false,
    set_archive: false,
    toggle_checklist: false,
    accept: false,
    withdraw: false,
    ...overrides,
  };
}

export function status(overrides: Partial<SubmissionStatus> = {}): SubmissionStatus {
  return {
    id: "S1",
    sequence_number: 205,
    state: "under-review",
    title: "hdbscan: Hierarchical density based clustering",
    repository_url: "https://github.com/scikit-learn-contrib/hdbscan",
    software_version: "0.8.12",
    submitting_author: "leland",
    editor: "danielskatz",
    reviewers: ["zhaozhang"],
    archive_doi: null,
    article_doi: null,
    fast_track: false,
    submitted_at: "2017-02-26T00:00:00+00:00",
    published_at: null,
    pre_review_issue: { repository: "openjournals/joss-reviews", number: 1 },
    review_issue: { repository: "openjournals/joss-reviews", number: 2 },
    badge: {
      state_label: "under review",
      color: "#fe7d37",
      target_url: "http://127.0.0.1:8000/submissions/S1",
      svg_url: "/api/submissions/S1/badge.svg",
    },
    progress: 0,
    checklists: [checklist()],
    capabilities: capabilities({ toggle_checklist: true }),
    ...overrides,
  };
}

export function publishedArticle(overrides: Partial<PublishedArticle> = {}): PublishedArticle {
  return {
    id: "S1",
    title: "hdbscan: Hierarchical density based clustering",
    authors: ["Leland McInnes"],
    article_doi: "10.21105/joss.00205",
    archive_doi: "10.5281/zenodo.401403",
    published_at: "2017-03-15T00:00:00+00:00",
    repository_url: "https://github.com/scikit-learn-contrib/hdbscan",
    ...overrides,
  };
}

export function report(overrides: Partial<Report> = {}): Report {
  return {
    schema_version: 1,
    record_count: 3,
    time_to_publication_days: {
      count: 3,
      mean: 74.33,
      median: 32,
      interquartile_range: 94.5,
      std_dev: 82.8,
      minimum: 1,
      maximum: 190,
    },
    reviewers: {
      mean_reviewers: 1.33,
      sd_reviewers: 0.47,
      mean_contacted: 2,
      sd_contacted: 0.82,
      contacts_per_review: 1.5,
    },
    languages: [
      ["Python", 2],
      ["C", 1],
      ["R", 1],
    ],
    author_countries: [["United States", 2], ["Germany", 1]],
    editors: [["arfon", 2], ["katyhuff", 1]],
    ...overrides,
  };
}
