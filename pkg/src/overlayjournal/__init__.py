"""Overlay-journal management system.

Submissions move through a pre-review/review state machine driven by a
chat-ops command protocol on a forge issue tracker, gated by reviewer
checklists, and published by minting a DOI and generating archival deposit
metadata. An analytics module computes the journal's cost model and editorial
statistics.
"""

from .checklist import (
    DEFAULT_TEMPLATE,
    ChecklistTemplate,
    ReviewerChecklist,
    detect_fast_track,
    is_complete,
)
from .config import JournalConfig, load_config
from .doi import ArchiveDoi, Doi, mint_article_doi, validate_archive_doi
from .journal import Journal
from .people import PersonRef, PersonRegistry, Role
from .workflow import Badge, Submission, SubmissionState, render_badge

__version__ = "0.1.0"

__all__ = [
    "ArchiveDoi",
    "Badge",
    "ChecklistTemplate",
    "DEFAULT_TEMPLATE",
    "Doi",
    "Journal",
    "JournalConfig",
    "PersonRef",
    "PersonRegistry",
    "ReviewerChecklist",
    "Role",
    "Submission",
    "SubmissionState",
    "detect_fast_track",
    "is_complete",
    "load_config",
    "mint_article_doi",
    "render_badge",
    "validate_archive_doi",
]
