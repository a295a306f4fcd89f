from datetime import datetime, timezone

import pytest

from overlayjournal.clocks import TickClock
from overlayjournal.errors import ForgeUnavailable, IssueClosedError, MalformedPayload
from overlayjournal.forge import (
    EventKind,
    EventQueue,
    IssueRef,
    SimulatedForge,
    parse_event_payload,
)

REPO = "openjournals/joss-reviews"


def forge(**kwargs):
    kwargs.setdefault("clock", TickClock(datetime(2017, 1, 1, tzinfo=timezone.utc)))
    return SimulatedForge([REPO], bot_handle="whedon", **kwargs)


def payload(event_id="e1", kind="comment_created", number=1, body="hi"):
    return {
        "kind": kind,
        "repository": REPO,
        "issue_number": number,
        "actor": "leland",
        "body": body,
        "event_id": event_id,
        "occurred_at": "2017-01-01T00:00:00+00:00",
    }


class TestSimulatedForge:
    def test_open_issue(self):
        f = forge()
        ref = f.open_issue(REPO, "[REVIEW]: hdbscan", "body")
        assert ref == IssueRef(REPO, 1)
        assert f.issue_body(ref) == "body"
        assert f.is_open(ref)

    def test_issue_numbers_increase(self):
        f = forge()
        first = f.open_issue(REPO, "a", "")
        second = f.open_issue(REPO, "b", "")
        assert (first.number, second.number) == (1, 2)

    def test_unconfigured_repository(self):
        with pytest.raises(ForgeUnavailable):
            forge().open_issue("unknown/repo", "t", "b")

    def test_comment_order_matches_call_order(self):
        f = forge()
        ref = f.open_issue(REPO, "t", "b")
        bodies = [f"comment {n}" for n in range(100)]
        for body in bodies:
            f.post_comment(ref, body)
        assert f.issue_comments(ref) == bodies
        logged = [e.body for e in f.events if e.kind is EventKind.COMMENT_CREATED]
        assert logged == bodies

    def test_closed_issue_rejects_comments(self):
        f = forge()
        ref = f.open_issue(REPO, "t", "b")
        f.close_issue(ref)
        assert not f.is_open(ref)
        with pytest.raises(IssueClosedError):
            f.post_comment(ref, "late")
        with pytest.raises(IssueClosedError):
            f.close_issue(ref)

    def test_determinism_byte_for_byte(self):
        def run():
            f = forge()
            ref = f.open_issue(REPO, "t", "body")
            f.post_comment(ref, "one", actor="a")
            f.edit_issue(ref, "body 2", actor="b")
            f.close_issue(ref)
            return f.event_log_text()

        assert run() == run()

    def test_log_replay_reconstructs_state(self, tmp_path):
        log = tmp_path / "forge.log"
        f = forge(log_path=log)
        ref = f.open_issue(REPO, "title here", "body")
        f.post_comment(ref, "one")
        f.edit_issue(ref, "edited body")
        restored = SimulatedForge.from_log([REPO], log, bot_handle="whedon")
        assert restored.issue_title(ref) == "title here"
        assert restored.issue_body(ref) == "edited body"
        assert restored.issue_comments(ref) == ["one"]
        assert restored.is_open(ref)
        follow_up = restored.open_issue(REPO, "next", "")
        assert follow_up.number == ref.number + 1


class TestIngestion:
    def test_well_formed_event_enqueued_once(self):
        q = EventQueue()
        q.ingest(payload())
        assert q.pending() == 1

    def test_duplicate_event_id_is_noop(self):
        q = EventQueue()
        q.ingest(payload("same"))
        q.ingest(payload("same"))
        assert q.pending() == 1

    def test_missing_issue_number(self):
        doc = payload()
        del doc["issue_number"]
        with pytest.raises(MalformedPayload):
            parse_event_payload(doc)

    @pytest.mark.parametrize(
        "patch",
        [
            {"kind": "nonsense"},
            {"issue_number": "NaN"},
            {"issue_number": 0},
            {"occurred_at": "not-a-time"},
            {"event_id": ""},
        ],
    )
    def test_malformed_payloads(self, patch):
        with pytest.raises(MalformedPayload):
            parse_event_payload({**payload(), **patch})

    def test_drain_processes_every_event_exactly_once(self):
        q = EventQueue()
        for n in range(50):
            q.ingest(payload(f"e{n}"))
            q.ingest(payload(f"e{n}"))  # duplicate delivery
        handled = []
        assert q.drain(handled.append) == 50
        assert q.pending() == 0
        assert q.processed_count == 50
        assert sorted(e.event_id for e in handled) == sorted(f"e{n}" for n in range(50))

    def test_event_round_trip(self):
        event = parse_event_payload(payload())
        assert parse_event_payload(event.to_dict()) == event
