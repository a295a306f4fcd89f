"""Submission lifecycle state machine, role gates, and status badges.

All transition functions are pure: they validate, then return a new
``Submission``. Illegal operations raise without mutating, so a caught error
leaves the caller's record exactly as it was. Persistence, forge side effects,
and checklist bookkeeping live in :mod:`overlayjournal.journal`.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from typing import Iterable
from urllib.parse import urlparse

from .checklist import ReviewerChecklist, is_complete
from .clocks import Clock, SYSTEM_CLOCK
from .doi import ArchiveDoi, Doi
from .errors import (
    ChecklistIncomplete,
    DuplicateReviewer,
    EditorReviewerConflict,
    IllegalTransition,
    InvalidField,
    MissingArchive,
    MissingEditor,
    MissingReviewer,
    Unauthorized,
    WrongMagicWord,
)
from .forge import Forge, IssueRef
from .people import ACCEPTANCE_ROLES, EDITORIAL_ROLES, PersonRef


class SubmissionState(str, Enum):
    SUBMITTED = "submitted"
    PRE_REVIEW = "pre-review"
    UNDER_REVIEW = "under-review"
    ACCEPTED = "accepted"
    PUBLISHED = "published"
    WITHDRAWN = "withdrawn"
    REJECTED = "rejected"


TERMINAL_STATES = frozenset(
    {SubmissionState.PUBLISHED, SubmissionState.WITHDRAWN, SubmissionState.REJECTED}
)


class ScreenVerdict(str, Enum):
    IN_SCOPE = "in-scope"
    OUT_OF_SCOPE = "out-of-scope"


@dataclass(frozen=True)
class Submission:
    id: str
    sequence_number: int
    state: SubmissionState
    title: str
    repository_url: str
    software_version: str
    submitting_author: PersonRef
    submitted_at: datetime
    editor: PersonRef | None = None
    reviewers: tuple[PersonRef, ...] = ()
    archive_doi: ArchiveDoi | None = None
    pre_review_issue: IssueRef | None = None
    review_issue: IssueRef | None = None
    article_doi: Doi | None = None
    fast_track: bool = False
    accepted_at: datetime | None = None
    published_at: datetime | None = None

    def reviewer_handles(self) -> list[str]:
        return [r.handle for r in self.reviewers]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "sequence_number": self.sequence_number,
            "state": self.state.value,
            "title": self.title,
            "repository_url": self.repository_url,
            "software_version": self.software_version,
            "submitting_author": self.submitting_author.to_dict(),
            "editor": self.editor.to_dict() if self.editor else None,
            "reviewers": [r.to_dict() for r in self.reviewers],
            "archive_doi": str(self.archive_doi) if self.archive_doi else None,
            "pre_review_issue": self.pre_review_issue.to_dict() if self.pre_review_issue else None,
            "review_issue": self.review_issue.to_dict() if self.review_issue else None,
            "article_doi": str(self.article_doi) if self.article_doi else None,
            "fast_track": self.fast_track,
            "submitted_at": self.submitted_at.isoformat(),
            "accepted_at": self.accepted_at.isoformat() if self.accepted_at else None,
            "published_at": self.published_at.isoformat() if self.published_at else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Submission":
        article = d.get("article_doi")
        if article:
            prefix, _, suffix = article.partition("/")
            article_doi = Doi(prefix, suffix)
        else:
            article_doi = None
        return cls(
            id=d["id"],
            sequence_number=int(d["sequence_number"]),
            state=SubmissionState(d["state"]),
            title=d["title"],
            repository_url=d["repository_url"],
            software_version=d["software_version"],
            submitting_author=PersonRef.from_dict(d["submitting_author"]),
            editor=PersonRef.from_dict(d["editor"]) if d.get("editor") else None,
            reviewers=tuple(PersonRef.from_dict(r) for r in d.get("reviewers", [])),
            archive_doi=ArchiveDoi(d["archive_doi"]) if d.get("archive_doi") else None,
            pre_review_issue=IssueRef.from_dict(d["pre_review_issue"]) if d.get("pre_review_issue") else None,
            review_issue=IssueRef.from_dict(d["review_issue"]) if d.get("review_issue") else None,
            article_doi=article_doi,
            fast_track=bool(d.get("fast_track", False)),
            submitted_at=datetime.fromisoformat(d["submitted_at"]),
            accepted_at=datetime.fromisoformat(d["accepted_at"]) if d.get("accepted_at") else None,
            published_at=datetime.fromisoformat(d["published_at"]) if d.get("published_at") else None,
        )


class SequenceCounter:
    """Atomic journal-wide sequence counter; values never repeat."""

    def __init__(self, next_value: int = 1):
        if next_value < 1:
            raise InvalidField("sequence counter must start at 1 or above")
        self._next = next_value
        self._lock = threading.Lock()

    def allocate(self) -> int:
        with self._lock:
            value = self._next
            self._next = value + 1
            return value

    def peek(self) -> int:
        with self._lock:
            return self._next


def validate_submission(
    s: Submission, checklists: Iterable[ReviewerChecklist] | None = None
) -> None:
    """Raise InvalidField if the record violates a lifecycle invariant.

    When ``checklists`` is supplied, the acceptance gate (archive set, every
    checklist complete unless fast-tracked) is checked too.
    """
    if s.state is SubmissionState.UNDER_REVIEW:
        if s.editor is None or not s.reviewers or s.review_issue is None:
            raise InvalidField(f"{s.id}: under-review requires editor, reviewers, review issue")
    if s.state in (SubmissionState.ACCEPTED, SubmissionState.PUBLISHED):
        if s.archive_doi is None:
            raise InvalidField(f"{s.id}: accepted/published requires an archive DOI")
        if checklists is not None and not s.fast_track:
            if any(not is_complete(c) for c in checklists):
                raise InvalidField(f"{s.id}: accepted/published with incomplete checklist")
    if s.state is SubmissionState.PUBLISHED:
        if s.article_doi is None:
            raise InvalidField(f"{s.id}: published requires an article DOI")
        if s.published_at is None or s.published_at < s.submitted_at:
            raise InvalidField(f"{s.id}: published_at must be set and >= submitted_at")
    keys = [r.key for r in s.reviewers]
    if len(keys) != len(set(keys)):
        raise InvalidField(f"{s.id}: duplicate reviewers")
    if s.editor is not None and s.editor.key in keys:
        raise InvalidField(f"{s.id}: editor cannot also review")


def _require_state(s: Submission, *allowed: SubmissionState) -> None:
    if s.state in TERMINAL_STATES:
        raise IllegalTransition(f"{s.state.value} is terminal")
    if s.state not in allowed:
        expected = ", ".join(state.value for state in allowed)
        raise IllegalTransition(f"operation requires state {expected}, not {s.state.value}")


def _require_role(actor: PersonRef, roles: frozenset) -> None:
    if actor.role not in roles:
        raise Unauthorized(f"@{actor.handle} ({actor.role.value}) lacks the required role")


# -- operations ------------------------------------------------------------------


def create_submission(
    title: str,
    repository_url: str,
    software_version: str,
    author: PersonRef,
    counter: SequenceCounter,
    clock: Clock = SYSTEM_CLOCK,
    submission_id: str | None = None,
) -> Submission:
    """Intake a new submission; nothing is allocated if a field is invalid."""
    if not title.strip():
        raise InvalidField("title must be non-empty")
    parsed = urlparse(repository_url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise InvalidField(f"repository_url is not a valid URL: {repository_url!r}")
    return Submission(
        id=submission_id or uuid.uuid4().hex,
        sequence_number=counter.allocate(),
        state=SubmissionState.SUBMITTED,
        title=title,
        repository_url=repository_url,
        software_version=software_version,
        submitting_author=author,
        submitted_at=clock.now(),
    )


def screen(s: Submission, verdict: ScreenVerdict, actor: PersonRef) -> Submission:
    """Admin scope screening at intake; out-of-scope work is desk-rejected."""
    _require_state(s, SubmissionState.SUBMITTED)
    _require_role(actor, ACCEPTANCE_ROLES)
    if verdict is ScreenVerdict.OUT_OF_SCOPE:
        return replace(s, state=SubmissionState.REJECTED)
    return s


def open_pre_review(
    s: Submission,
    forge: Forge,
    repository: str,
    clock: Clock = SYSTEM_CLOCK,
) -> Submission:
    """Open the triage issue; the submission stays put if the forge fails."""
    _require_state(s, SubmissionState.SUBMITTED)
    body = pre_review_issue_body(s)
    issue = forge.open_issue(repository, f"[PRE REVIEW]: {s.title}", body)
    return replace(s, state=SubmissionState.PRE_REVIEW, pre_review_issue=issue)


def assign_editor(s: Submission, editor: PersonRef, actor: PersonRef) -> Submission:
    """Set (or replace) the handling editor."""
    _require_state(s, SubmissionState.PRE_REVIEW, SubmissionState.UNDER_REVIEW)
    _require_role(actor, EDITORIAL_ROLES)
    if editor.key in (r.key for r in s.reviewers):
        raise EditorReviewerConflict(f"@{editor.handle} is already a reviewer here")
    return replace(s, editor=editor)


def assign_reviewer(s: Submission, reviewer: PersonRef, actor: PersonRef) -> Submission:
    """Append a reviewer; duplicates and editor/reviewer overlap are rejected."""
    _require_state(s, SubmissionState.PRE_REVIEW, SubmissionState.UNDER_REVIEW)
    _require_role(actor, EDITORIAL_ROLES)
    if s.editor is not None and reviewer.key == s.editor.key:
        raise EditorReviewerConflict(f"@{reviewer.handle} is the assigned editor")
    if reviewer.key in (r.key for r in s.reviewers):
        raise DuplicateReviewer(f"@{reviewer.handle} is already assigned")
    return replace(s, reviewers=s.reviewers + (reviewer,))


def unassign_reviewer(s: Submission, reviewer: PersonRef, actor: PersonRef) -> Submission:
    """Remove a reviewer (stalled reviews need this symmetric operation)."""
    _require_state(s, SubmissionState.PRE_REVIEW, SubmissionState.UNDER_REVIEW)
    _require_role(actor, EDITORIAL_ROLES)
    if reviewer.key not in (r.key for r in s.reviewers):
        raise MissingReviewer(f"@{reviewer.handle} is not assigned")
    remaining = tuple(r for r in s.reviewers if r.key != reviewer.key)
    if s.state is SubmissionState.UNDER_REVIEW and not remaining:
        raise IllegalTransition("an active review needs at least one reviewer; assign a replacement first")
    return replace(s, reviewers=remaining)


def start_review(
    s: Submission,
    magic_word: str,
    actor: PersonRef,
    forge: Forge,
    expected_magic_word: str,
    repository: str,
    issue_body: str,
    clock: Clock = SYSTEM_CLOCK,
) -> Submission:
    """Open the main review issue and move to under-review.

    The magic word is a safeguard against creating the review issue
    prematurely; every guard failure leaves the submission unchanged.
    """
    _require_state(s, SubmissionState.PRE_REVIEW)
    _require_role(actor, EDITORIAL_ROLES)
    if s.editor is None:
        raise MissingEditor("assign an editor before starting the review")
    if not s.reviewers:
        raise MissingReviewer("assign at least one reviewer before starting the review")
    if magic_word != expected_magic_word:
        raise WrongMagicWord(f"magic word {magic_word!r} does not match the safeguard")
    issue = forge.open_issue(repository, f"[REVIEW]: {s.title}", issue_body)
    return replace(s, state=SubmissionState.UNDER_REVIEW, review_issue=issue)


def set_archive(s: Submission, archive: ArchiveDoi, actor: PersonRef) -> Submission:
    """Record the DOI of the archived software snapshot."""
    _require_state(s, SubmissionState.UNDER_REVIEW)
    _require_role(actor, EDITORIAL_ROLES)
    return replace(s, archive_doi=archive)


def set_fast_track(s: Submission, fast_track: bool, actor: PersonRef) -> Submission:
    """Mark a submission as already reviewed elsewhere (checklist gate bypass)."""
    _require_state(
        s, SubmissionState.SUBMITTED, SubmissionState.PRE_REVIEW, SubmissionState.UNDER_REVIEW
    )
    _require_role(actor, EDITORIAL_ROLES)
    return replace(s, fast_track=fast_track)


def withdraw(s: Submission, actor: PersonRef) -> Submission:
    """The submitting author may withdraw from any non-terminal state."""
    _require_state(
        s,
        SubmissionState.SUBMITTED,
        SubmissionState.PRE_REVIEW,
        SubmissionState.UNDER_REVIEW,
        SubmissionState.ACCEPTED,
    )
    if actor.key != s.submitting_author.key:
        raise Unauthorized("only the submitting author may withdraw")
    return replace(s, state=SubmissionState.WITHDRAWN)


def accept(
    s: Submission,
    actor: PersonRef,
    checklists: Iterable[ReviewerChecklist],
    clock: Clock = SYSTEM_CLOCK,
) -> Submission:
    """Gateway to acceptance: archive set and every checklist complete
    (unless fast-tracked). Acceptance is reserved to the editor-in-chief
    and admins."""
    _require_state(s, SubmissionState.UNDER_REVIEW)
    _require_role(actor, ACCEPTANCE_ROLES)
    if s.archive_doi is None:
        raise MissingArchive("set the software archive DOI before accepting")
    if not s.fast_track:
        incomplete = [c.reviewer.handle for c in checklists if not is_complete(c)]
        if incomplete:
            raise ChecklistIncomplete(
                "incomplete reviewer checklists: " + ", ".join(sorted(incomplete))
            )
    return replace(s, state=SubmissionState.ACCEPTED, accepted_at=clock.now())


def publish(s: Submission, article_doi: Doi, clock: Clock = SYSTEM_CLOCK) -> Submission:
    """Final step after acceptance: record the minted article DOI."""
    if s.state is not SubmissionState.ACCEPTED:
        raise IllegalTransition(f"publish requires state accepted, not {s.state.value}")
    return replace(
        s,
        state=SubmissionState.PUBLISHED,
        article_doi=article_doi,
        published_at=clock.now(),
    )


def pre_review_issue_body(s: Submission) -> str:
    return (
        f"**Submitting author:** @{s.submitting_author.handle}\n"
        f"**Repository:** {s.repository_url}\n"
        f"**Version:** {s.software_version}\n\n"
        f"Editor and reviewers will be assigned here before the review starts.\n"
    )


# -- badges ------------------------------------------------------------------


@dataclass(frozen=True)
class Badge:
    state_label: str
    color: str
    target_url: str


#: Fixed label table: one label per lifecycle state.
BADGE_LABELS: dict[SubmissionState, str] = {
    SubmissionState.SUBMITTED: "submitted",
    SubmissionState.PRE_REVIEW: "pre-review",
    SubmissionState.UNDER_REVIEW: "under review",
    SubmissionState.ACCEPTED: "accepted",
    SubmissionState.PUBLISHED: "published",
    SubmissionState.WITHDRAWN: "withdrawn",
    SubmissionState.REJECTED: "rejected",
}

BADGE_COLORS: dict[SubmissionState, str] = {
    SubmissionState.SUBMITTED: "#007ec6",
    SubmissionState.PRE_REVIEW: "#dfb317",
    SubmissionState.UNDER_REVIEW: "#fe7d37",
    SubmissionState.ACCEPTED: "#97ca00",
    SubmissionState.PUBLISHED: "#4c1",
    SubmissionState.WITHDRAWN: "#9f9f9f",
    SubmissionState.REJECTED: "#e05d44",
}


def render_badge(state: SubmissionState, submission_url: str) -> Badge:
    """Deterministic state -> badge mapping, total over all states."""
    return Badge(
        state_label=BADGE_LABELS[state],
        color=BADGE_COLORS[state],
        target_url=submission_url,
    )


def badge_svg(badge: Badge, left_text: str = "status") -> str:
    """Render an embeddable flat SVG badge for the submission state."""
    char_width = 7
    pad = 10
    left_width = len(left_text) * char_width + pad
    right_width = len(badge.state_label) * char_width + pad
    total = left_width + right_width
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="20" '
        f'role="img" aria-label="{left_text}: {badge.state_label}">'
        f'<rect width="{left_width}" height="20" fill="#555"/>'
        f'<rect x="{left_width}" width="{right_width}" height="20" fill="{badge.color}"/>'
        f'<g fill="#fff" font-family="Verdana,sans-serif" font-size="11" '
        f'text-anchor="middle">'
        f'<text x="{left_width / 2:g}" y="14">{left_text}</text>'
        f'<text x="{left_width + right_width / 2:g}" y="14">{badge.state_label}</text>'
        f"</g></svg>"
    )
