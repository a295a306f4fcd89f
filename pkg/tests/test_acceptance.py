"""Acceptance suite: every release criterion at its stated tolerance, one
pass/fail line each. Run with ``pytest tests/test_acceptance.py -v -s``."""

import functools
import random
import time
import xml.etree.ElementTree as ET
from datetime import date
from decimal import Decimal

from overlayjournal.analytics import CostParameters, per_article_cost, summarize_values
from overlayjournal.checklist import DEFAULT_TEMPLATE, instantiate, render_markdown
from overlayjournal.commands import parse_command
from overlayjournal.config import JournalConfig
from overlayjournal.crossref import REQUIRED_ELEMENTS, build_crossref_deposit
from overlayjournal.doi import ArchiveDoi, mint_article_doi
from overlayjournal.errors import MalformedCommand
from overlayjournal.manuscript import (
    Affiliation,
    AuthorEntry,
    Manuscript,
    parse_manuscript,
    serialize_manuscript,
)
from overlayjournal.scenario import load_scenario, run_scenario
from overlayjournal.store import JournalStore
from overlayjournal.workflow import SubmissionState

from . import test_analytics as oracle
from .conftest import REVIEWER, make_journal, to_pre_review
from .test_store import scripted_run
from .test_workflow_properties import run_sequences


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE] {name}: FAIL")
                raise
            print(f"[ACCEPTANCE] {name}: PASS")
            return result

        return wrapper

    return decorate


@criterion("cost model exactness")
def test_cost_model_exactness():
    params = CostParameters(275, 1, 19)
    per_article_cost(params, 100)  # warm-up
    start = time.perf_counter()
    at_100 = per_article_cost(params, 100)
    at_200 = per_article_cost(params, 200)
    elapsed = time.perf_counter() - start
    assert at_100 == Decimal("6.03")
    assert at_200 == Decimal("3.51")
    assert elapsed < 0.001, f"cost model took {elapsed * 1000:.3f} ms"


@criterion("scenario replay ends published with the expected DOI")
def test_scenario_replay(fixtures_dir):
    doc = load_scenario(fixtures_dir / "hdbscan_scenario.json")
    start = time.perf_counter()
    result = run_scenario(doc)
    elapsed = time.perf_counter() - start
    submission = result.journal.get(result.submissions[0].id)
    assert submission.state is SubmissionState.PUBLISHED
    assert str(submission.article_doi) == "10.21105/joss.00205"
    assert elapsed < 1.0, f"scenario replay took {elapsed:.2f} s"


@criterion("checklist template fidelity (18 items, 6 categories, golden diff empty)")
def test_checklist_fidelity(fixtures_dir):
    assert len(DEFAULT_TEMPLATE.categories) == 6
    assert [len(c.items) for c in DEFAULT_TEMPLATE.categories] == [1, 1, 4, 3, 6, 3]
    assert DEFAULT_TEMPLATE.item_count() == 18
    golden = (fixtures_dir / "fresh_checklist.md").read_text(encoding="utf-8")
    rendered = render_markdown(instantiate(DEFAULT_TEMPLATE, REVIEWER, "S1"), DEFAULT_TEMPLATE)
    assert rendered == golden, "golden checklist diff is not empty"


@criterion("command grammar: verbatim commands parse; 10,000-case fuzz is total")
def test_command_grammar():
    verbatim = [
        ("@whedon assign @danielskatz as editor", "assign-editor", "danielskatz"),
        ("@whedon assign @zhaozhang as reviewer", "assign-reviewer", "zhaozhang"),
        ("@whedon set 10.5281/zenodo.401403 as archive", "set-archive",
         "10.5281/zenodo.401403"),
    ]
    for text, kind, argument in verbatim:
        command = parse_command(text, "whedon")
        assert (command.kind.value, command.argument) == (kind, argument)

    rng = random.Random(9066)
    alphabet = (
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        " @#-=./\\\n\té中\U0001f600[]()*`\"'"
    )
    seeds = [
        "@whedon assign @a as editor",
        "@whedon start review magic-word=x",
        "@whedon set 10.1/2 as archive",
        "@whedon generate pdf",
        "@whedon commands",
        "thanks everyone",
    ]
    outcomes = set()
    for case in range(10_000):
        if case % 2:
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        else:
            chars = list(rng.choice(seeds))
            for _ in range(rng.randint(0, 4)):
                chars[rng.randrange(len(chars))] = rng.choice(alphabet)
            text = "".join(chars)
        try:
            result = parse_command(text, "whedon")
        except MalformedCommand:
            outcomes.add("malformed")
        else:
            outcomes.add("command" if result is not None else "ignored")
    assert outcomes == {"command", "malformed", "ignored"}


@criterion("state-machine safety: 10,000 fuzzed sequences respect the gate")
def test_state_machine_safety():
    start = time.perf_counter()
    reached = run_sequences(10_000, 8, seed=45_5)
    elapsed = time.perf_counter() - start
    assert SubmissionState.PUBLISHED in reached  # the fuzz actually got deep
    assert elapsed < 30.0, f"safety fuzz took {elapsed:.1f} s"


@criterion("statistics agree with the independent oracle to 1e-9")
def test_statistics_oracle():
    anchor = summarize_values([1, 32, 190])
    assert anchor.minimum == 1
    assert anchor.maximum == 190
    assert anchor.median == 32

    rng = random.Random(111)
    for _ in range(25):
        n = rng.randint(1, 10_000)
        values = [rng.uniform(0, 365) for _ in range(n)]
        stats = summarize_values(values)
        assert abs(stats.mean - oracle.naive_mean(values)) < 1e-9
        assert abs(stats.median - oracle.naive_median(values)) < 1e-9
        assert abs(stats.interquartile_range - oracle.naive_iqr(values)) < 1e-9
        assert abs(stats.std_dev - oracle.naive_pstdev(values)) < 1e-9


@criterion("deposit integrity over 100 randomized manuscripts; lossless round-trip")
def test_deposit_integrity():
    rng = random.Random(205)
    config = JournalConfig()
    letters = "abcdefghijklmnopqrstuvwxyz ,<>&\"'é"

    def text(limit):
        return ("".join(rng.choice(letters) for _ in range(rng.randint(1, limit)))).strip() or "x"

    for case in range(100):
        n_affiliations = rng.randint(0, 3)
        affiliations = tuple(Affiliation(i + 1, text(30)) for i in range(n_affiliations))
        authors = tuple(
            AuthorEntry(
                name=text(25),
                affiliation_indices=(rng.randint(1, n_affiliations),) if n_affiliations else (),
            )
            for _ in range(rng.randint(1, 5))
        )
        manuscript = Manuscript(
            title=text(60),
            authors=authors,
            affiliations=affiliations,
            date=date(2016, 5, 1),
            tags=tuple(text(12) for _ in range(rng.randint(0, 3))),
            body_markdown=text(200),
        )
        assert parse_manuscript(serialize_manuscript(manuscript)) == manuscript
        xml = build_crossref_deposit(
            manuscript,
            mint_article_doi(case + 1),
            ArchiveDoi(f"10.5281/zenodo.{1000 + case}"),
            date(2017, 3, 15),
            config,
        ).to_xml()
        root = ET.fromstring(xml)
        for element in REQUIRED_ELEMENTS:
            assert len(root.findall(element)) == 1, element


@criterion("durability across kill-and-restart at 100 random cut points")
def test_durability(tmp_path):
    work = tmp_path / "run"
    checkpoints = scripted_run(work)
    log_bytes = (work / "journal.log").read_bytes()
    rng = random.Random(100)
    for case in range(100):
        cut = checkpoints[rng.randrange(len(checkpoints))]
        crash_dir = tmp_path / f"crash{case}"
        crash_dir.mkdir()
        (crash_dir / "journal.log").write_bytes(log_bytes[: cut["offset"]])
        store = JournalStore(crash_dir)
        assert {
            s.id: s.to_dict() for s in store.state.submissions.values()
        } == cut["submissions"]
        used = {s.sequence_number for s in store.state.submissions.values()}
        assert all(n < store.state.sequence_counter for n in used)
        store.close()


@criterion("idempotent webhook ingestion: duplicated log equals deduplicated run")
def test_idempotent_ingestion():
    def script(journal):
        submission = to_pre_review(journal)
        issue = submission.pre_review_issue
        events = []
        comments = [
            ("arfon", "@whedon assign @danielskatz as editor"),
            ("danielskatz", "@whedon assign @zhaozhang as reviewer"),
            ("danielskatz", "@whedon start review magic-word=bananas"),
        ]
        for n, (actor, body) in enumerate(comments):
            events.append(
                {
                    "kind": "comment_created",
                    "repository": issue.repository,
                    "issue_number": issue.number,
                    "actor": actor,
                    "body": body,
                    "event_id": f"a-{n}",
                    "occurred_at": f"2017-02-26T00:0{n}:00+00:00",
                }
            )
        return submission, events

    def archive_event(issue):
        return {
            "kind": "comment_created",
            "repository": issue.repository,
            "issue_number": issue.number,
            "actor": "danielskatz",
            "body": "@whedon set 10.5281/zenodo.401403 as archive",
            "event_id": "b-0",
            "occurred_at": "2017-02-26T01:00:00+00:00",
        }

    def run(duplicated):
        journal = make_journal(sequence_start=205)
        submission, events = script(journal)
        for event in events:
            journal.ingest(event)
            if duplicated:
                journal.ingest(dict(event))
        journal.process_pending()
        late = archive_event(journal.get(submission.id).review_issue)
        journal.ingest(late)
        if duplicated:
            journal.ingest(dict(late))
        journal.process_pending()
        current = journal.get(submission.id)
        return (
            current.to_dict(),
            [c.to_dict() for c in journal.checklists_for(submission.id)],
        )

    assert run(duplicated=False) == run(duplicated=True)
