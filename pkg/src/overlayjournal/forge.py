"""Issue-tracker abstraction: a minimal forge interface, a deterministic
in-memory simulation, and idempotent webhook-event ingestion.

The simulated forge is the reference implementation; a client for a real
forge is a drop-in satisfying the same interface. Events are deduplicated by
``event_id`` so at-least-once webhook delivery is tolerated downstream.
"""

from __future__ import annotations

import json
import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Protocol

from .clocks import Clock, SYSTEM_CLOCK
from .errors import ForgeUnavailable, IssueClosedError, MalformedPayload


class EventKind(str, Enum):
    ISSUE_OPENED = "issue_opened"
    COMMENT_CREATED = "comment_created"
    ISSUE_EDITED = "issue_edited"
    ISSUE_CLOSED = "issue_closed"


@dataclass(frozen=True)
class IssueRef:
    repository: str  # "owner/name"
    number: int

    def __str__(self) -> str:
        return f"{self.repository}#{self.number}"

    def to_dict(self) -> dict:
        return {"repository": self.repository, "number": self.number}

    @classmethod
    def from_dict(cls, d: dict) -> "IssueRef":
        return cls(repository=d["repository"], number=int(d["number"]))


@dataclass(frozen=True)
class ForgeEvent:
    kind: EventKind
    issue: IssueRef
    actor_handle: str
    body: str
    event_id: str
    occurred_at: datetime

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "repository": self.issue.repository,
            "issue_number": self.issue.number,
            "actor": self.actor_handle,
            "body": self.body,
            "event_id": self.event_id,
            "occurred_at": self.occurred_at.isoformat(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForgeEvent":
        return parse_event_payload(d)


def parse_event_payload(payload: dict) -> ForgeEvent:
    """Validate a webhook payload document and build the event.

    Raises MalformedPayload on missing fields or invalid values.
    """
    if not isinstance(payload, dict):
        raise MalformedPayload("payload must be an object")
    missing = [
        key
        for key in ("kind", "repository", "issue_number", "actor", "body", "event_id")
        if key not in payload
    ]
    if missing:
        raise MalformedPayload(f"payload missing fields: {', '.join(missing)}")
    try:
        kind = EventKind(payload["kind"])
    except ValueError:
        raise MalformedPayload(f"unknown event kind: {payload['kind']!r}") from None
    try:
        number = int(payload["issue_number"])
    except (TypeError, ValueError):
        raise MalformedPayload(
            f"issue_number must be an integer: {payload['issue_number']!r}"
        ) from None
    if number < 1:
        raise MalformedPayload(f"issue_number must be positive: {number}")
    occurred_raw = payload.get("occurred_at")
    if occurred_raw is None:
        occurred_at = datetime.now(timezone.utc)
    else:
        # fromisoformat only learned the Z suffix in 3.11
        text = str(occurred_raw).replace("Z", "+00:00")
        try:
            occurred_at = datetime.fromisoformat(text)
        except ValueError:
            raise MalformedPayload(
                f"occurred_at is not an ISO-8601 timestamp: {occurred_raw!r}"
            ) from None
    event_id = str(payload["event_id"])
    if not event_id:
        raise MalformedPayload("event_id must be non-empty")
    return ForgeEvent(
        kind=kind,
        issue=IssueRef(str(payload["repository"]), number),
        actor_handle=str(payload["actor"]),
        body=str(payload["body"]),
        event_id=event_id,
        occurred_at=occurred_at,
    )


class Forge(Protocol):
    """Minimal forge surface the journal depends on."""

    def open_issue(self, repository: str, title: str, body: str) -> IssueRef: ...

    def post_comment(self, issue: IssueRef, body: str) -> ForgeEvent: ...

    def edit_issue(self, issue: IssueRef, body: str) -> ForgeEvent: ...

    def close_issue(self, issue: IssueRef) -> ForgeEvent: ...

    def issue_body(self, issue: IssueRef) -> str: ...


@dataclass
class _Issue:
    ref: IssueRef
    title: str
    body: str
    open: bool = True
    comments: list[str] = field(default_factory=list)


class SimulatedForge:
    """Deterministic in-memory forge.

    Identical call sequences produce identical event logs byte-for-byte when a
    deterministic clock is injected. When ``log_path`` is set, every event is
    also appended to a JSON-lines file.
    """

    def __init__(
        self,
        repositories: Iterable[str],
        bot_handle: str = "bot",
        clock: Clock = SYSTEM_CLOCK,
        log_path: str | Path | None = None,
    ):
        self.repositories = set(repositories)
        self.bot_handle = bot_handle
        self.clock = clock
        self.events: list[ForgeEvent] = []
        self.log_path = Path(log_path) if log_path else None
        self._issues: dict[IssueRef, _Issue] = {}
        self._next_number: dict[str, int] = {}
        self._next_event = 1
        self._fail_next: list[str] = []

    # -- fault injection (tests) -------------------------------------------

    def fail_next(self, operation: str = "open_issue") -> None:
        """Make the next call of the named operation raise ForgeUnavailable."""
        self._fail_next.append(operation)

    def _maybe_fail(self, operation: str) -> None:
        if operation in self._fail_next:
            self._fail_next.remove(operation)
            raise ForgeUnavailable(f"simulated outage during {operation}")

    # -- forge interface -----------------------------------------------------

    def open_issue(self, repository: str, title: str, body: str) -> IssueRef:
        self._maybe_fail("open_issue")
        if repository not in self.repositories:
            raise ForgeUnavailable(f"repository not configured: {repository}")
        number = self._next_number.get(repository, 1)
        self._next_number[repository] = number + 1
        ref = IssueRef(repository, number)
        self._issues[ref] = _Issue(ref=ref, title=title, body=body)
        self._record(EventKind.ISSUE_OPENED, ref, self.bot_handle, body, extra={"title": title})
        return ref

    def post_comment(self, issue: IssueRef, body: str, actor: str | None = None) -> ForgeEvent:
        self._maybe_fail("post_comment")
        record = self._open_issue_record(issue)
        record.comments.append(body)
        return self._record(EventKind.COMMENT_CREATED, issue, actor or self.bot_handle, body)

    def edit_issue(self, issue: IssueRef, body: str, actor: str | None = None) -> ForgeEvent:
        self._maybe_fail("edit_issue")
        record = self._open_issue_record(issue)
        record.body = body
        return self._record(EventKind.ISSUE_EDITED, issue, actor or self.bot_handle, body)

    def close_issue(self, issue: IssueRef) -> ForgeEvent:
        self._maybe_fail("close_issue")
        record = self._open_issue_record(issue)
        record.open = False
        return self._record(EventKind.ISSUE_CLOSED, issue, self.bot_handle, "")

    def issue_body(self, issue: IssueRef) -> str:
        return self._issue_record(issue).body

    def issue_title(self, issue: IssueRef) -> str:
        return self._issue_record(issue).title

    def issue_comments(self, issue: IssueRef) -> list[str]:
        return list(self._issue_record(issue).comments)

    def is_open(self, issue: IssueRef) -> bool:
        return self._issue_record(issue).open

    def issues(self) -> list[IssueRef]:
        return list(self._issues)

    def event_log_text(self) -> str:
        """The full event log serialized one JSON document per line."""
        return "".join(
            json.dumps(event.to_dict(), sort_keys=True) + "\n" for event in self.events
        )

    # -- internals -----------------------------------------------------------

    def _issue_record(self, issue: IssueRef) -> _Issue:
        record = self._issues.get(issue)
        if record is None:
            raise ForgeUnavailable(f"no such issue: {issue}")
        return record

    def _open_issue_record(self, issue: IssueRef) -> _Issue:
        record = self._issue_record(issue)
        if not record.open:
            raise IssueClosedError(f"issue is closed: {issue}")
        return record

    def _record(
        self,
        kind: EventKind,
        issue: IssueRef,
        actor: str,
        body: str,
        extra: dict | None = None,
    ) -> ForgeEvent:
        event = ForgeEvent(
            kind=kind,
            issue=issue,
            actor_handle=actor,
            body=body,
            event_id=f"evt-{self._next_event}",
            occurred_at=self.clock.now(),
        )
        self._next_event += 1
        self.events.append(event)
        if self.log_path is not None:
            doc = event.to_dict()
            if extra:
                doc.update(extra)
            with self.log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(doc, sort_keys=True) + "\n")
        return event

    @classmethod
    def from_log(
        cls,
        repositories: Iterable[str],
        log_path: str | Path,
        bot_handle: str = "bot",
        clock: Clock = SYSTEM_CLOCK,
    ) -> "SimulatedForge":
        """Rebuild forge state by replaying its own event-log file."""
        forge = cls(repositories, bot_handle=bot_handle, clock=clock)
        log = Path(log_path)
        if log.exists():
            for line in log.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                try:
                    doc = json.loads(line)
                    event = parse_event_payload(doc)
                except (json.JSONDecodeError, MalformedPayload):
                    break  # torn trailing write
                forge.events.append(event)
                forge._next_event += 1
                ref = event.issue
                if event.kind is EventKind.ISSUE_OPENED:
                    forge._issues[ref] = _Issue(
                        ref=ref, title=str(doc.get("title", "")), body=event.body
                    )
                    nxt = forge._next_number.get(ref.repository, 1)
                    forge._next_number[ref.repository] = max(nxt, ref.number + 1)
                elif ref in forge._issues:
                    record = forge._issues[ref]
                    if event.kind is EventKind.COMMENT_CREATED:
                        record.comments.append(event.body)
                    elif event.kind is EventKind.ISSUE_EDITED:
                        record.body = event.body
                    elif event.kind is EventKind.ISSUE_CLOSED:
                        record.open = False
        forge.log_path = log
        return forge


class EventQueue:
    """FIFO processing queue with idempotent ingestion.

    Duplicate deliveries (same ``event_id``) are acknowledged but not
    re-enqueued, so replaying a webhook log with duplicates leaves downstream
    state identical to the deduplicated run.
    """

    def __init__(self):
        self._pending: deque[ForgeEvent] = deque()
        self._seen: set[str] = set()
        self._lock = threading.Lock()
        self.processed_count = 0

    def ingest(self, payload: dict) -> ForgeEvent:
        event = parse_event_payload(payload)
        with self._lock:
            if event.event_id not in self._seen:
                self._seen.add(event.event_id)
                self._pending.append(event)
        return event

    def pending(self) -> int:
        return len(self._pending)

    def pop(self) -> ForgeEvent | None:
        with self._lock:
            if not self._pending:
                return None
            event = self._pending.popleft()
        self.processed_count += 1
        return event

    def drain(self, handler) -> int:
        """Process every pending event exactly once; returns how many ran."""
        count = 0
        while (event := self.pop()) is not None:
            handler(event)
            count += 1
        return count
