"""Embedded persistence: an append-only JSON-lines commit log with snapshots.

Each committed operation is exactly one log line carrying every record it
changed plus the sequence counter, so a crash between two operations always
leaves a readable prefix. Reload replays from the most recent snapshot line;
a torn trailing line (partial write) is ignored.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .checklist import ReviewerChecklist
from .people import PersonRef
from .workflow import Submission

LOG_FILENAME = "journal.log"


@dataclass
class PersistedState:
    submissions: dict[str, Submission] = field(default_factory=dict)
    checklists: dict[tuple[str, str], ReviewerChecklist] = field(default_factory=dict)
    people: dict[str, PersonRef] = field(default_factory=dict)
    sequence_counter: int = 1  # next value to allocate
    idempotency: dict[str, str] = field(default_factory=dict)

    def checklists_for(self, submission_id: str) -> list[ReviewerChecklist]:
        return [
            c for (sid, _), c in sorted(self.checklists.items()) if sid == submission_id
        ]

    def to_dict(self) -> dict:
        return {
            "submissions": [s.to_dict() for _, s in sorted(self.submissions.items())],
            "checklists": [c.to_dict() for _, c in sorted(self.checklists.items())],
            "people": [p.to_dict() for _, p in sorted(self.people.items())],
            "sequence_counter": self.sequence_counter,
            "idempotency": dict(self.idempotency),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PersistedState":
        state = cls(sequence_counter=int(d.get("sequence_counter", 1)))
        for raw in d.get("submissions", []):
            submission = Submission.from_dict(raw)
            state.submissions[submission.id] = submission
        for raw in d.get("checklists", []):
            checklist = ReviewerChecklist.from_dict(raw)
            state.checklists[(checklist.submission_id, checklist.reviewer.key)] = checklist
        for raw in d.get("people", []):
            person = PersonRef.from_dict(raw)
            state.people[person.key] = person
        state.idempotency = dict(d.get("idempotency", {}))
        return state


class JournalStore:
    """Single-node store. ``path`` of None keeps everything in memory, which
    the tests and the scenario runner use for speed and determinism."""

    def __init__(self, path: str | Path | None = None, sequence_start: int | None = None):
        self.directory = Path(path) if path is not None else None
        self.state = PersistedState()
        self._fh = None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            log = self.log_path
            if log.exists():
                self.state = _replay(log)
            self._fh = log.open("a", encoding="utf-8")
        if sequence_start is not None and not self.state.submissions:
            self.state.sequence_counter = sequence_start
            if self._fh is not None:
                self._append({"kind": "commit", "counter": self.state.sequence_counter})

    @property
    def log_path(self) -> Path:
        if self.directory is None:
            raise ValueError("in-memory store has no log file")
        return self.directory / LOG_FILENAME

    # -- commits -------------------------------------------------------------

    def commit(
        self,
        submissions: Iterable[Submission] = (),
        checklists: Iterable[ReviewerChecklist] = (),
        removed_checklists: Iterable[tuple[str, str]] = (),
        people: Iterable[PersonRef] = (),
        counter: int | None = None,
        idempotency: tuple[str, str] | None = None,
    ) -> None:
        """Apply one operation's changes and append them as one log line."""
        record: dict = {"kind": "commit"}
        submission_docs = []
        for submission in submissions:
            self.state.submissions[submission.id] = submission
            submission_docs.append(submission.to_dict())
        checklist_docs = []
        for checklist in checklists:
            key = (checklist.submission_id, checklist.reviewer.key)
            self.state.checklists[key] = checklist
            checklist_docs.append(checklist.to_dict())
        removed_docs = []
        for submission_id, reviewer_key in removed_checklists:
            self.state.checklists.pop((submission_id, reviewer_key), None)
            removed_docs.append([submission_id, reviewer_key])
        people_docs = []
        for person in people:
            self.state.people[person.key] = person
            people_docs.append(person.to_dict())
        if submission_docs:
            record["submissions"] = submission_docs
        if checklist_docs:
            record["checklists"] = checklist_docs
        if removed_docs:
            record["removed_checklists"] = removed_docs
        if people_docs:
            record["people"] = people_docs
        if counter is not None:
            self.state.sequence_counter = counter
            record["counter"] = counter
        if idempotency is not None:
            key, value = idempotency
            self.state.idempotency[key] = value
            record["idempotency"] = [key, value]
        if self._fh is not None:
            self._append(record)

    def snapshot(self) -> None:
        """Write the full state as one line; replay starts from the last one."""
        if self._fh is not None:
            self._append({"kind": "snapshot", "state": self.state.to_dict()})

    def compact(self) -> None:
        """Rewrite the log as a single snapshot line."""
        if self.directory is None:
            return
        self.close()
        tmp = self.log_path.with_suffix(".tmp")
        with tmp.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps({"kind": "snapshot", "state": self.state.to_dict()}) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        tmp.replace(self.log_path)
        self._fh = self.log_path.open("a", encoding="utf-8")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def _append(self, record: dict) -> None:
        self._fh.write(json.dumps(record, sort_keys=True) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())


def _replay(log: Path) -> PersistedState:
    state = PersistedState()
    with log.open("r", encoding="utf-8") as fh:
        raw = fh.read()
    for line in raw.split("\n"):
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            break  # torn final line from a crash mid-append
        kind = record.get("kind")
        if kind == "snapshot":
            state = PersistedState.from_dict(record["state"])
            continue
        if kind != "commit":
            continue
        for raw_submission in record.get("submissions", []):
            submission = Submission.from_dict(raw_submission)
            state.submissions[submission.id] = submission
        for raw_checklist in record.get("checklists", []):
            checklist = ReviewerChecklist.from_dict(raw_checklist)
            state.checklists[(checklist.submission_id, checklist.reviewer.key)] = checklist
        for submission_id, reviewer_key in record.get("removed_checklists", []):
            state.checklists.pop((submission_id, reviewer_key), None)
        for raw_person in record.get("people", []):
            person = PersonRef.from_dict(raw_person)
            state.people[person.key] = person
        if "counter" in record:
            state.sequence_counter = int(record["counter"])
        if "idempotency" in record:
            key, value = record["idempotency"]
            state.idempotency[key] = value
    return state
