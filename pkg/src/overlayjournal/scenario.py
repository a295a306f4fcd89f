"""Scripted scenario replay against the simulated forge.

A scenario document declares the people involved and a list of steps.
Comments and body edits are routed through the full webhook pipeline
(post to the forge, ingest the event, drain the queue), so a replay
exercises the same code paths as live operation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .clocks import TickClock
from .config import JournalConfig
from .errors import InvalidField
from .forge import IssueRef
from .journal import Journal
from .people import PersonRef, Role
from .store import JournalStore
from .workflow import ScreenVerdict, Submission


@dataclass
class ScenarioResult:
    journal: Journal
    submissions: list[Submission] = field(default_factory=list)
    outcomes: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        forge = self.journal.forge
        return {
            "submissions": [
                {
                    **s.to_dict(),
                    "badge": self.journal.badge_for(s).state_label,
                    "checklists": [
                        {
                            "reviewer": c.reviewer.handle,
                            "checked": sum(c.states.values()),
                            "total": len(c.states),
                        }
                        for c in self.journal.checklists_for(s.id)
                    ],
                }
                for s in (self.journal.get(s.id) for s in self.submissions)
            ],
            "forge_issues": [
                {
                    "issue": str(ref),
                    "title": forge.issue_title(ref),
                    "open": forge.is_open(ref),
                    "comments": forge.issue_comments(ref),
                }
                for ref in forge.issues()
            ],
            "outcomes": self.outcomes,
        }


def load_scenario(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def run_scenario(
    doc: dict,
    journal: Journal | None = None,
    storage_path: str | Path | None = None,
) -> ScenarioResult:
    """Execute every step; raises InvalidField on unknown actions or references."""
    if journal is None:
        clock = TickClock(datetime(2017, 2, 26, tzinfo=timezone.utc))
        ids = (f"S{n}" for n in itertools.count(1))
        config = JournalConfig(storage_path=str(storage_path) if storage_path else None)
        journal = Journal(
            config=config,
            store=JournalStore(storage_path, sequence_start=doc.get("sequence_start")),
            clock=clock,
            id_factory=lambda: next(ids),
            sequence_start=doc.get("sequence_start"),
        )
    for person in doc.get("people", []):
        journal.ensure_person(
            PersonRef(
                handle=person["handle"],
                role=Role(person.get("role", "author")),
                display_name=person.get("name"),
            )
        )
    result = ScenarioResult(journal=journal)

    def resolve_submission(step: dict) -> Submission:
        index = int(step.get("submission", len(result.submissions) - 1))
        try:
            ref = result.submissions[index]
        except IndexError:
            raise InvalidField(f"step references unknown submission #{index}") from None
        return journal.get(ref.id)

    def issue_of(submission: Submission, which: str) -> IssueRef:
        issue = (
            submission.review_issue if which == "review" else submission.pre_review_issue
        )
        if issue is None:
            raise InvalidField(f"submission has no {which} issue yet")
        return issue

    def pump(event) -> None:
        journal.ingest(event.to_dict())
        journal.process_pending()

    for step in doc.get("steps", []):
        action = step.get("action")
        if action == "submit":
            author = journal.ensure_person(PersonRef(handle=step["author"]))
            paper = step.get("paper")
            if paper is None and step.get("paper_file"):
                paper = Path(step["paper_file"]).read_text(encoding="utf-8")
            submission = journal.submit(
                step["title"],
                step["repository_url"],
                step.get("software_version", ""),
                author,
                note=step.get("note", ""),
                paper_markdown=paper,
            )
            result.submissions.append(submission)
            result.outcomes.append({"action": action, "id": submission.id})
        elif action == "open_pre_review":
            submission = journal.open_pre_review(resolve_submission(step).id)
            result.outcomes.append({"action": action, "issue": str(submission.pre_review_issue)})
        elif action == "comment":
            submission = resolve_submission(step)
            issue = issue_of(submission, step.get("issue", "pre_review"))
            event = journal.forge.post_comment(issue, step["body"], actor=step["actor"])
            pump(event)
            result.outcomes.append({"action": action, "body": step["body"]})
        elif action == "check_all":
            submission = resolve_submission(step)
            issue = issue_of(submission, "review")
            reviewer = step["reviewer"]
            body = journal.forge.issue_body(issue)
            edited = _check_all_in_section(body, reviewer)
            event = journal.forge.edit_issue(issue, edited, actor=reviewer)
            pump(event)
            result.outcomes.append({"action": action, "reviewer": reviewer})
        elif action == "check_item":
            submission = resolve_submission(step)
            actor = journal.registry.resolve(step.get("actor", step["reviewer"]))
            journal.set_checklist_item(
                submission.id,
                step["reviewer"],
                step["item"],
                bool(step.get("checked", True)),
                actor,
            )
            result.outcomes.append({"action": action, "item": step["item"]})
        elif action == "screen":
            submission = resolve_submission(step)
            actor = journal.registry.resolve(step["actor"])
            journal.screen(submission.id, ScreenVerdict(step["verdict"]), actor)
            result.outcomes.append({"action": action, "verdict": step["verdict"]})
        elif action == "set_fast_track":
            submission = resolve_submission(step)
            actor = journal.registry.resolve(step["actor"])
            journal.set_fast_track(submission.id, bool(step.get("value", True)), actor)
            result.outcomes.append({"action": action})
        elif action == "withdraw":
            submission = resolve_submission(step)
            actor = journal.registry.resolve(step["actor"])
            journal.withdraw(submission.id, actor)
            result.outcomes.append({"action": action})
        elif action == "accept":
            submission = resolve_submission(step)
            actor = journal.registry.resolve(step["actor"])
            published, artifacts = journal.accept_and_publish(submission.id, actor)
            result.outcomes.append(
                {"action": action, "doi": str(artifacts.doi), "state": published.state.value}
            )
        else:
            raise InvalidField(f"unknown scenario action: {action!r}")
    return result


def _check_all_in_section(body: str, reviewer: str) -> str:
    """Tick every checkbox inside one reviewer's checklist section."""
    lines = body.split("\n")
    inside = False
    for position, line in enumerate(lines):
        if line.startswith("## Review checklist for @"):
            inside = line == f"## Review checklist for @{reviewer}"
            continue
        if inside and line.startswith("- [ ] "):
            lines[position] = "- [x] " + line[len("- [ ] "):]
    return "\n".join(lines)
