// API response schemas, mirrored from the server's API reference.
// The UI never derives workflow state itself: everything here comes
// straight off the wire.

export interface BadgeInfo {
  state_label: string;
  color: string;
  target_url: string;
  svg_url: string;
}

export interface ChecklistItem {
  id: string;
  label: string;
  prompt: string;
  category: string;
  checked: boolean;
}

export interface ChecklistSummary {
  reviewer: string;
  checked: number;
  total: number;
  complete: boolean;
  editable: boolean;
  items?: ChecklistItem[];
}

export interface Capabilities {
  assign_editor: boolean;
  assign_reviewer: boolean;
  start_review: boolean;
  set_archive: boolean;
  toggle_checklist: boolean;
  accept: boolean;
  withdraw: boolean;
}

export interface IssueRef {
  repository: string;
  number: number;
}

export interface SubmissionStatus {
  id: string;
  sequence_number: number;
  state: string;
  title: string;
  repository_url: string;
  software_version: string;
  submitting_author: string;
  editor: string | null;
  reviewers: string[];
  archive_doi: string | null;
  article_doi: string | null;
  fast_track: boolean;
  submitted_at: string;
  published_at: string | null;
  pre_review_issue: IssueRef | null;
  review_issue: IssueRef | null;
  badge: BadgeInfo;
  progress: number | null;
  checklists: ChecklistSummary[];
  capabilities: Capabilities;
}

export interface PublishedArticle {
  id: string;
  title: string;
  authors: string[];
  article_doi: string;
  archive_doi: string | null;
  published_at: string;
  repository_url: string;
}

export interface StatsSection {
  count: number;
  mean: number;
  median: number;
  interquartile_range: number;
  std_dev: number;
  minimum: number;
  maximum: number;
}

export interface Report {
  schema_version: number;
  record_count: number;
  time_to_publication_days: StatsSection;
  reviewers: {
    mean_reviewers: number;
    sd_reviewers: number;
    mean_contacted: number;
    sd_contacted: number;
    contacts_per_review: number;
  };
  languages: [string, number][];
  author_countries: [string, number][];
  editors: [string, number][];
}

export interface SubmissionFormData {
  title: string;
  repository_url: string;
  software_version: string;
  author_handle: string;
  author_name?: string;
  inquiry?: string;
}
