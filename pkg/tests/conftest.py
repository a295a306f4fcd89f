from __future__ import annotations

import itertools
from datetime import datetime, timezone
from pathlib import Path

import pytest

from overlayjournal.clocks import TickClock
from overlayjournal.config import JournalConfig
from overlayjournal.journal import Journal
from overlayjournal.people import PersonRef, PersonRegistry, Role
from overlayjournal.store import JournalStore

FIXTURES = Path(__file__).parent / "fixtures"

AUTHOR = PersonRef("leland", Role.AUTHOR, display_name="Leland McInnes")
EIC = PersonRef("arfon", Role.EDITOR_IN_CHIEF)
EDITOR = PersonRef("danielskatz", Role.EDITOR)
REVIEWER = PersonRef("zhaozhang", Role.REVIEWER)
REVIEWER2 = PersonRef("sjvdwalt", Role.REVIEWER)
ADMIN = PersonRef("ops", Role.ADMIN)

PEOPLE = (AUTHOR, EIC, EDITOR, REVIEWER, REVIEWER2, ADMIN)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def fresh_registry() -> PersonRegistry:
    return PersonRegistry(list(PEOPLE))


def make_journal(
    sequence_start: int | None = None,
    directory: Path | None = None,
    config: JournalConfig | None = None,
) -> Journal:
    """A deterministic journal: ticking clock, S1/S2/... ids, simulated forge."""
    ids = (f"S{n}" for n in itertools.count(1))
    return Journal(
        config=config or JournalConfig(storage_path=str(directory) if directory else None),
        store=JournalStore(directory, sequence_start=sequence_start),
        registry=fresh_registry(),
        clock=TickClock(datetime(2017, 2, 26, tzinfo=timezone.utc)),
        id_factory=lambda: next(ids),
        sequence_start=sequence_start,
    )


@pytest.fixture
def journal() -> Journal:
    return make_journal()


def submit_hdbscan(journal: Journal, paper_markdown: str | None = None):
    return journal.submit(
        "hdbscan: Hierarchical density based clustering",
        "https://github.com/scikit-learn-contrib/hdbscan",
        "0.8.12",
        AUTHOR,
        paper_markdown=paper_markdown,
    )


def to_pre_review(journal: Journal, paper_markdown: str | None = None):
    submission = submit_hdbscan(journal, paper_markdown)
    return journal.open_pre_review(submission.id)


def to_under_review(journal: Journal, reviewers=(REVIEWER,), paper_markdown=None):
    submission = to_pre_review(journal, paper_markdown)
    journal.assign_editor(submission.id, EDITOR.handle, EIC)
    for reviewer in reviewers:
        journal.assign_reviewer(submission.id, reviewer.handle, EDITOR)
    return journal.start_review(submission.id, "bananas", EDITOR)


def check_everything(journal: Journal, submission_id: str) -> None:
    for checklist in journal.checklists_for(submission_id):
        for item_id in list(checklist.states):
            journal.set_checklist_item(
                submission_id, checklist.reviewer.handle, item_id, True, checklist.reviewer
            )


def to_published(journal: Journal, paper_markdown: str | None = None):
    submission = to_under_review(journal, paper_markdown=paper_markdown)
    check_everything(journal, submission.id)
    journal.set_archive(submission.id, "10.5281/zenodo.401403", EDITOR)
    published, _ = journal.accept_and_publish(submission.id, EIC)
    return published
