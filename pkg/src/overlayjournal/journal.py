"""The journal facade: ties the state machine, checklists, forge, command
protocol, article pipeline, and store together.

All mutations to a single submission are serialized behind a per-submission
lock; operations on distinct submissions proceed concurrently. The store is
the source of truth; forge issue bodies are projections kept in sync
best-effort.
"""

from __future__ import annotations

import logging
import re
import threading
import uuid
from dataclasses import replace
from typing import Callable

from . import checklist as checklists_mod
from . import commands as commands_mod
from . import workflow
from .analytics import ReviewRecord
from .checklist import DEFAULT_TEMPLATE, ChecklistTemplate, ReviewerChecklist
from .clocks import Clock, SYSTEM_CLOCK
from .config import JournalConfig
from .doi import mint_article_doi, validate_archive_doi
from .errors import (
    ForgeUnavailable,
    IllegalTransition,
    InvalidField,
    IssueClosedError,
    JournalError,
    MalformedCommand,
    UnknownSubmission,
)
from .forge import EventKind, EventQueue, ForgeEvent, IssueRef, SimulatedForge
from .people import EDITORIAL_ROLES, PersonRef, PersonRegistry
from .pipeline import ArticlePipeline, PublishedArtifacts
from .rendering import render_article
from .store import JournalStore
from .workflow import ScreenVerdict, Submission, SubmissionState

logger = logging.getLogger(__name__)

_REVIEWER_SECTION_RE = re.compile(r"^## Review checklist for @([A-Za-z0-9-]+)\s*$")


class Journal:
    def __init__(
        self,
        config: JournalConfig | None = None,
        store: JournalStore | None = None,
        forge: SimulatedForge | None = None,
        registry: PersonRegistry | None = None,
        template: ChecklistTemplate = DEFAULT_TEMPLATE,
        clock: Clock = SYSTEM_CLOCK,
        id_factory: Callable[[], str] | None = None,
        sequence_start: int | None = None,
    ):
        self.config = config or JournalConfig()
        self.clock = clock
        self.template = template
        self.registry = registry or PersonRegistry()
        self.id_factory = id_factory or (lambda: uuid.uuid4().hex)
        if store is None:
            directory = self.config.storage_path
            store = JournalStore(directory, sequence_start=sequence_start)
        elif sequence_start is not None and not store.state.submissions:
            store.state.sequence_counter = sequence_start
        self.store = store
        if forge is None:
            repos = {self.config.reviews_repository}
            if store.directory is not None:
                forge = SimulatedForge.from_log(
                    repos,
                    store.directory / "forge.log",
                    bot_handle=self.config.bot_handle,
                    clock=clock,
                )
            else:
                forge = SimulatedForge(repos, bot_handle=self.config.bot_handle, clock=clock)
        self.forge = forge
        self.pipeline = ArticlePipeline(self.config)
        self.queue = EventQueue()
        self.papers: dict[str, str] = {}
        self.artifacts: dict[str, PublishedArtifacts] = {}
        self._counter = workflow.SequenceCounter(self.store.state.sequence_counter)
        self._issue_index: dict[IssueRef, str] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._master_lock = threading.Lock()
        for person in self.store.state.people.values():
            self.registry.ensure(person)
        for submission in self.store.state.submissions.values():
            self._index_issues(submission)

    # -- plumbing ---------------------------------------------------------------

    def _lock_for(self, submission_id: str) -> threading.Lock:
        with self._master_lock:
            return self._locks.setdefault(submission_id, threading.Lock())

    def _index_issues(self, s: Submission) -> None:
        for issue in (s.pre_review_issue, s.review_issue):
            if issue is not None:
                self._issue_index[issue] = s.id

    def get(self, submission_id: str) -> Submission:
        submission = self.store.state.submissions.get(submission_id)
        if submission is None:
            raise UnknownSubmission(f"no submission with id {submission_id!r}")
        return submission

    def all_submissions(self) -> list[Submission]:
        return sorted(
            self.store.state.submissions.values(), key=lambda s: s.sequence_number
        )

    def published(self) -> list[Submission]:
        articles = [
            s for s in self.store.state.submissions.values()
            if s.state is SubmissionState.PUBLISHED
        ]
        articles.sort(key=lambda s: (s.published_at, s.sequence_number), reverse=True)
        return articles

    def checklists_for(self, submission_id: str) -> list[ReviewerChecklist]:
        return self.store.state.checklists_for(submission_id)

    def submission_for_issue(self, issue: IssueRef) -> Submission | None:
        submission_id = self._issue_index.get(issue)
        return self.store.state.submissions.get(submission_id) if submission_id else None

    def register_person(self, person: PersonRef) -> PersonRef:
        registered = self.registry.add(person)
        self.store.commit(people=[registered])
        return registered

    def ensure_person(self, person: PersonRef) -> PersonRef:
        """Register the handle if new (durably); keep the existing entry otherwise."""
        existing = self.registry.get(person.handle)
        if existing is not None:
            return existing
        return self.register_person(person)

    def badge_for(self, s: Submission) -> workflow.Badge:
        url = f"http://{self.config.listen_address}/submissions/{s.id}"
        return workflow.render_badge(s.state, url)

    def idempotent_submission(self, key: str) -> Submission | None:
        submission_id = self.store.state.idempotency.get(key)
        return self.store.state.submissions.get(submission_id) if submission_id else None

    # -- lifecycle operations -----------------------------------------------------

    def submit(
        self,
        title: str,
        repository_url: str,
        software_version: str,
        author: PersonRef,
        note: str = "",
        paper_markdown: str | None = None,
        idempotency_key: str | None = None,
    ) -> Submission:
        """Intake a submission (state: submitted). Pre-review is opened separately."""
        author = self.ensure_person(author)
        with self._master_lock:
            submission = workflow.create_submission(
                title,
                repository_url,
                software_version,
                author,
                counter=self._counter,
                clock=self.clock,
                submission_id=self.id_factory(),
            )
            if note and checklists_mod.detect_fast_track(note):
                submission = replace(submission, fast_track=True)
            self.store.commit(
                submissions=[submission],
                counter=self._counter.peek(),
                idempotency=(idempotency_key, submission.id) if idempotency_key else None,
            )
        if paper_markdown is not None:
            self.papers[submission.id] = paper_markdown
        return submission

    def open_pre_review(self, submission_id: str) -> Submission:
        with self._lock_for(submission_id):
            submission = workflow.open_pre_review(
                self.get(submission_id),
                self.forge,
                repository=self.config.reviews_repository,
                clock=self.clock,
            )
            self.store.commit(submissions=[submission])
            self._index_issues(submission)
        return submission

    def screen(self, submission_id: str, verdict: ScreenVerdict, actor: PersonRef) -> Submission:
        with self._lock_for(submission_id):
            submission = workflow.screen(self.get(submission_id), verdict, actor)
            self.store.commit(submissions=[submission])
        return submission

    def assign_editor(self, submission_id: str, editor_handle: str, actor: PersonRef) -> Submission:
        editor = self.registry.resolve(editor_handle)
        with self._lock_for(submission_id):
            submission = workflow.assign_editor(self.get(submission_id), editor, actor)
            self.store.commit(submissions=[submission])
        return submission

    def assign_reviewer(
        self, submission_id: str, reviewer_handle: str, actor: PersonRef
    ) -> Submission:
        reviewer = self.registry.resolve(reviewer_handle)
        with self._lock_for(submission_id):
            submission = workflow.assign_reviewer(self.get(submission_id), reviewer, actor)
            new_checklists = []
            if submission.state is SubmissionState.UNDER_REVIEW and not submission.fast_track:
                new_checklists.append(
                    checklists_mod.instantiate(self.template, reviewer, submission.id)
                )
            self.store.commit(submissions=[submission], checklists=new_checklists)
            if new_checklists and submission.review_issue is not None:
                self._project_review_body(submission)
        return submission

    def unassign_reviewer(
        self, submission_id: str, reviewer_handle: str, actor: PersonRef
    ) -> Submission:
        reviewer = self.registry.resolve(reviewer_handle)
        with self._lock_for(submission_id):
            submission = workflow.unassign_reviewer(self.get(submission_id), reviewer, actor)
            self.store.commit(
                submissions=[submission],
                removed_checklists=[(submission.id, reviewer.key)],
            )
            if submission.review_issue is not None:
                self._project_review_body(submission)
        return submission

    def set_fast_track(self, submission_id: str, fast_track: bool, actor: PersonRef) -> Submission:
        with self._lock_for(submission_id):
            submission = workflow.set_fast_track(self.get(submission_id), fast_track, actor)
            self.store.commit(submissions=[submission])
        return submission

    def start_review(self, submission_id: str, magic_word: str, actor: PersonRef) -> Submission:
        with self._lock_for(submission_id):
            current = self.get(submission_id)
            if current.fast_track:
                fresh: list[ReviewerChecklist] = []
            else:
                fresh = [
                    checklists_mod.instantiate(self.template, reviewer, current.id)
                    for reviewer in current.reviewers
                ]
            body = self._compose_review_body(current, fresh)
            submission = workflow.start_review(
                current,
                magic_word,
                actor,
                self.forge,
                expected_magic_word=self.config.magic_word,
                repository=self.config.reviews_repository,
                issue_body=body,
                clock=self.clock,
            )
            self.store.commit(submissions=[submission], checklists=fresh)
            self._index_issues(submission)
        return submission

    def set_archive(self, submission_id: str, doi_text: str, actor: PersonRef) -> Submission:
        archive = validate_archive_doi(doi_text)
        with self._lock_for(submission_id):
            submission = workflow.set_archive(self.get(submission_id), archive, actor)
            self.store.commit(submissions=[submission])
        return submission

    def withdraw(self, submission_id: str, actor: PersonRef) -> Submission:
        with self._lock_for(submission_id):
            submission = workflow.withdraw(self.get(submission_id), actor)
            self.store.commit(submissions=[submission])
        return submission

    def set_checklist_item(
        self,
        submission_id: str,
        reviewer_handle: str,
        item_id: str,
        checked: bool,
        actor: PersonRef,
    ) -> ReviewerChecklist:
        with self._lock_for(submission_id):
            submission = self.get(submission_id)
            if submission.state is not SubmissionState.UNDER_REVIEW:
                raise IllegalTransition(
                    f"checklists are editable only under review, not {submission.state.value}"
                )
            key = (submission_id, reviewer_handle.casefold())
            current = self.store.state.checklists.get(key)
            if current is None:
                raise InvalidField(f"no checklist for reviewer @{reviewer_handle}")
            updated = checklists_mod.set_item(current, item_id, checked, actor, clock=self.clock)
            self.store.commit(checklists=[updated])
            self._project_review_body(submission)
        return updated

    def accept_and_publish(
        self,
        submission_id: str,
        actor: PersonRef,
        paper_markdown: str | None = None,
    ) -> tuple[Submission, PublishedArtifacts]:
        """Gates, then accept -> mint DOI -> deposit -> close review -> publish.

        The accepted and published states are committed separately so a crash
        in between is recoverable, but callers observe one atomic operation.
        """
        with self._lock_for(submission_id):
            current = self.get(submission_id)
            accepted = workflow.accept(
                current, actor, self.checklists_for(submission_id), clock=self.clock
            )
            markdown = paper_markdown or self.papers.get(submission_id)
            manuscript = self.pipeline.manuscript_for(accepted, markdown)
            artifacts = self.pipeline.build_artifacts(
                manuscript,
                accepted.sequence_number,
                accepted.archive_doi,
                self.clock.now().date(),
            )
            self.store.commit(submissions=[accepted])
            if accepted.review_issue is not None:
                try:
                    self.forge.post_comment(
                        accepted.review_issue,
                        f"Accepted and published: {artifacts.doi.url}",
                    )
                    self.forge.close_issue(accepted.review_issue)
                except (ForgeUnavailable, IssueClosedError) as exc:
                    logger.warning("could not close review issue: %s", exc)
            published = workflow.publish(accepted, artifacts.doi, clock=self.clock)
            self.store.commit(submissions=[published])
            self.artifacts[submission_id] = artifacts
            self._write_artifacts(published, artifacts)
        return published, artifacts

    def compile_article(self, submission_id: str, paper_markdown: str | None = None) -> str:
        """Render a draft article document for the current state of a submission."""
        submission = self.get(submission_id)
        markdown = paper_markdown or self.papers.get(submission_id)
        manuscript = self.pipeline.manuscript_for(submission, markdown)
        doi = submission.article_doi or mint_article_doi(
            submission.sequence_number, prefix=self.config.doi_prefix
        )
        return render_article(manuscript, doi, submission.archive_doi)

    # -- review-body projection -----------------------------------------------------

    def _compose_review_body(
        self, s: Submission, checklists: list[ReviewerChecklist]
    ) -> str:
        lines = [
            f"**Submitting author:** @{s.submitting_author.handle}",
            f"**Repository:** {s.repository_url}",
            f"**Version:** {s.software_version}",
            f"**Editor:** @{s.editor.handle}" if s.editor else "**Editor:** unassigned",
        ]
        if s.archive_doi is not None:
            lines.append(f"**Archive:** {s.archive_doi}")
        lines.append("")
        if s.fast_track:
            lines.append("This submission is fast-tracked; reviewer checklists are bypassed.")
            lines.append("")
        for c in checklists:
            lines.append(f"## Review checklist for @{c.reviewer.handle}")
            lines.append("")
            lines.append(checklists_mod.render_markdown(c, self.template))
        return "\n".join(lines)

    def _project_review_body(self, s: Submission) -> None:
        if s.review_issue is None:
            return
        body = self._compose_review_body(s, self.checklists_for(s.id))
        try:
            if self.forge.issue_body(s.review_issue) != body:
                self.forge.edit_issue(s.review_issue, body)
        except (ForgeUnavailable, IssueClosedError) as exc:
            logger.warning("could not sync review issue body: %s", exc)

    def _sync_checklists_from_body(self, s: Submission, body: str, actor_handle: str) -> int:
        """Apply checkbox toggles made by editing the review issue body."""
        actor = self.registry.get(actor_handle)
        sections = _split_reviewer_sections(body)
        changed = 0
        for reviewer_handle, section in sections.items():
            key = (s.id, reviewer_handle.casefold())
            current = self.store.state.checklists.get(key)
            if current is None:
                continue
            allowed = actor is not None and (
                actor.key == current.reviewer.key or actor.role in EDITORIAL_ROLES
            )
            if not allowed:
                continue
            try:
                states = checklists_mod.parse_markdown(section, self.template)
            except JournalError:
                continue  # mangled section; the store stays authoritative
            if states == current.states:
                continue
            if all(states.values()):
                completed_at = current.completed_at or self.clock.now()
            else:
                completed_at = None
            updated = replace(current, states=states, completed_at=completed_at)
            self.store.commit(checklists=[updated])
            changed += 1
        return changed

    # -- event pipeline ---------------------------------------------------------

    def ingest(self, payload: dict) -> ForgeEvent:
        """Validate, deduplicate, and enqueue one webhook payload."""
        return self.queue.ingest(payload)

    def process_pending(self) -> int:
        return self.queue.drain(self.handle_event)

    def handle_event(self, event: ForgeEvent) -> commands_mod.CommandOutcome:
        """Route one forge event: comments run the command protocol, body edits
        sync checklist state. The bot's own events are not routed back."""
        if event.actor_handle.casefold() == self.config.bot_handle.casefold():
            return commands_mod.IGNORED
        if event.kind is EventKind.COMMENT_CREATED:
            return self._handle_comment(event)
        if event.kind is EventKind.ISSUE_EDITED:
            submission = self.submission_for_issue(event.issue)
            if submission is not None and event.issue == submission.review_issue:
                with self._lock_for(submission.id):
                    self._sync_checklists_from_body(submission, event.body, event.actor_handle)
        return commands_mod.IGNORED

    def _handle_comment(self, event: ForgeEvent) -> commands_mod.CommandOutcome:
        try:
            actor = PersonRef(handle=event.actor_handle)
        except InvalidField:
            return commands_mod.IGNORED
        try:
            command = commands_mod.parse_command(
                event.body, self.config.bot_handle, actor=actor, issue=event.issue
            )
        except MalformedCommand:
            return self.reply(
                event.issue,
                commands_mod.CommandOutcome(
                    commands_mod.OutcomeStatus.REJECTED_INVALID,
                    f"Sorry @{event.actor_handle}, I did not understand that. "
                    + commands_mod.usage_reply(self.config.bot_handle),
                ),
            )
        if command is None:
            return commands_mod.IGNORED
        return commands_mod.execute(command, self)

    def reply(
        self, issue: IssueRef, outcome: commands_mod.CommandOutcome
    ) -> commands_mod.CommandOutcome:
        """Post the outcome's reply to the issue, best-effort."""
        if outcome.reply:
            try:
                self.forge.post_comment(issue, outcome.reply)
            except (ForgeUnavailable, IssueClosedError) as exc:
                logger.warning("could not post reply to %s: %s", issue, exc)
        return outcome

    # -- reporting ---------------------------------------------------------------

    def review_records(self) -> list[ReviewRecord]:
        """Derive analytics records from the published submissions."""
        records = []
        for s in self.published():
            records.append(
                ReviewRecord(
                    submission_id=s.id,
                    submitted_at=s.submitted_at.date(),
                    published_at=s.published_at.date(),
                    reviewer_count=max(1, len(s.reviewers)),
                    reviewers_contacted=max(1, len(s.reviewers)),
                    editor_handle=s.editor.handle if s.editor else "",
                )
            )
        return records

    def _write_artifacts(self, s: Submission, artifacts: PublishedArtifacts) -> None:
        if self.store.directory is None:
            return
        articles = self.store.directory / "articles"
        deposits = self.store.directory / "deposits"
        articles.mkdir(exist_ok=True)
        deposits.mkdir(exist_ok=True)
        (articles / f"{artifacts.doi.suffix}.html").write_text(
            artifacts.article_html, encoding="utf-8"
        )
        (deposits / f"{artifacts.doi.suffix}.xml").write_text(
            artifacts.deposit_xml, encoding="utf-8"
        )


def _split_reviewer_sections(body: str) -> dict[str, str]:
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for line in body.split("\n"):
        match = _REVIEWER_SECTION_RE.match(line)
        if match:
            current = sections.setdefault(match.group(1), [])
            continue
        if current is not None:
            current.append(line)
    return {handle: "\n".join(lines) for handle, lines in sections.items()}
