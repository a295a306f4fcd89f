"""HTTP surface over the journal.

Endpoints (JSON bodies throughout):

    POST /api/submissions                       create + open pre-review
    GET  /api/submissions                       list (optional ?state= filter)
    GET  /api/submissions/{id}                  status, roles, progress, badge
    GET  /api/submissions/{id}/badge.svg        embeddable status badge
    POST /api/submissions/{id}/checklist        toggle one checklist item
    GET  /api/published                         published articles, newest first
    POST /api/events                            webhook ingestion (202, async)
    GET  /api/report                            analytics report document
    GET  /api/health                            liveness probe

Role identification is a stub: ``X-Actor-Handle`` names the acting person,
who must be registered for privileged actions.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import BackgroundTasks, FastAPI, Header, HTTPException, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .analytics import export_report
from .checklist import is_complete
from .errors import (
    ForgeUnavailable,
    InvalidField,
    JournalError,
    MalformedPayload,
    Unauthorized,
    UnknownActor,
    UnknownSubmission,
)
from .journal import Journal
from .people import PersonRef, Role
from .workflow import Submission, SubmissionState, badge_svg


class AuthorIn(BaseModel):
    handle: str
    name: str | None = None


class SubmissionIn(BaseModel):
    title: str
    repository_url: str
    software_version: str
    author: AuthorIn
    inquiry: str = ""
    paper_markdown: str | None = None
    idempotency_key: str | None = Field(default=None)


class ChecklistToggleIn(BaseModel):
    reviewer: str
    item_id: str
    checked: bool
    actor: str


def _badge_dict(journal: Journal, s: Submission) -> dict:
    badge = journal.badge_for(s)
    return {
        "state_label": badge.state_label,
        "color": badge.color,
        "target_url": badge.target_url,
        "svg_url": f"/api/submissions/{s.id}/badge.svg",
    }


def _checklist_summaries(
    journal: Journal, s: Submission, include_items: bool, actor_handle: str | None = None
) -> list[dict]:
    person = journal.registry.get(actor_handle) if actor_handle else None
    editorial = person is not None and person.role in (
        Role.EDITOR, Role.EDITOR_IN_CHIEF, Role.ADMIN
    )
    summaries = []
    for c in journal.checklists_for(s.id):
        editable = s.state is SubmissionState.UNDER_REVIEW and (
            editorial or (person is not None and person.key == c.reviewer.key)
        )
        entry = {
            "reviewer": c.reviewer.handle,
            "checked": sum(c.states.values()),
            "total": len(c.states),
            "complete": is_complete(c),
            "editable": editable,
        }
        if include_items:
            entry["items"] = [
                {
                    "id": item.id,
                    "label": item.label,
                    "prompt": item.prompt,
                    "category": category.name,
                    "checked": c.states.get(item.id, False),
                }
                for category in journal.template.categories
                for item in category.items
            ]
        summaries.append(entry)
    return summaries


def _progress(journal: Journal, s: Submission) -> float | None:
    checklists = journal.checklists_for(s.id)
    total = sum(len(c.states) for c in checklists)
    if total == 0:
        return None
    return sum(sum(c.states.values()) for c in checklists) / total


def _capabilities(journal: Journal, s: Submission, actor_handle: str | None) -> dict:
    person = journal.registry.get(actor_handle) if actor_handle else None
    editorial = person is not None and person.role in (
        Role.EDITOR, Role.EDITOR_IN_CHIEF, Role.ADMIN
    )
    acceptance = person is not None and person.role in (Role.EDITOR_IN_CHIEF, Role.ADMIN)
    assignable = s.state in (SubmissionState.PRE_REVIEW, SubmissionState.UNDER_REVIEW)
    under_review = s.state is SubmissionState.UNDER_REVIEW
    is_reviewer = person is not None and person.key in (r.key for r in s.reviewers)
    checklists = journal.checklists_for(s.id)
    gates_met = s.archive_doi is not None and (
        s.fast_track or (bool(checklists) and all(is_complete(c) for c in checklists))
    )
    return {
        "assign_editor": editorial and assignable,
        "assign_reviewer": editorial and assignable,
        "start_review": editorial and s.state is SubmissionState.PRE_REVIEW,
        "set_archive": editorial and under_review,
        "toggle_checklist": under_review and (editorial or is_reviewer),
        "accept": acceptance and under_review and gates_met,
        "withdraw": (
            person is not None
            and person.key == s.submitting_author.key
            and s.state not in (SubmissionState.PUBLISHED, SubmissionState.WITHDRAWN,
                                SubmissionState.REJECTED)
        ),
    }


def _submission_payload(
    journal: Journal, s: Submission, actor_handle: str | None = None, full: bool = False
) -> dict:
    payload = {
        "id": s.id,
        "sequence_number": s.sequence_number,
        "state": s.state.value,
        "title": s.title,
        "repository_url": s.repository_url,
        "software_version": s.software_version,
        "submitting_author": s.submitting_author.handle,
        "editor": s.editor.handle if s.editor else None,
        "reviewers": s.reviewer_handles(),
        "archive_doi": str(s.archive_doi) if s.archive_doi else None,
        "article_doi": str(s.article_doi) if s.article_doi else None,
        "fast_track": s.fast_track,
        "submitted_at": s.submitted_at.isoformat(),
        "published_at": s.published_at.isoformat() if s.published_at else None,
        "pre_review_issue": s.pre_review_issue.to_dict() if s.pre_review_issue else None,
        "review_issue": s.review_issue.to_dict() if s.review_issue else None,
        "badge": _badge_dict(journal, s),
        "progress": _progress(journal, s),
        "checklists": _checklist_summaries(journal, s, full, actor_handle),
    }
    payload["capabilities"] = _capabilities(journal, s, actor_handle)
    return payload


def create_app(journal: Journal) -> FastAPI:
    app = FastAPI(title="overlayjournal", version="0.1.0")
    app.state.journal = journal

    @app.exception_handler(JournalError)
    async def journal_error_handler(request: Request, exc: JournalError):  # noqa: ARG001
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/submissions", status_code=201)
    def submit(body: SubmissionIn, response: Response) -> dict:
        if body.idempotency_key:
            existing = journal.idempotent_submission(body.idempotency_key)
            if existing is not None:
                submission = existing
            else:
                submission = _create(body)
        else:
            submission = _create(body)
        if submission.state is SubmissionState.SUBMITTED:
            try:
                submission = journal.open_pre_review(submission.id)
            except ForgeUnavailable as exc:
                raise HTTPException(
                    status_code=503,
                    detail={"error": str(exc), "id": submission.id},
                ) from exc
        response.headers["Location"] = f"/api/submissions/{submission.id}"
        return _submission_payload(journal, submission)

    def _create(body: SubmissionIn) -> Submission:
        try:
            return journal.submit(
                body.title,
                body.repository_url,
                body.software_version,
                PersonRef(handle=body.author.handle, display_name=body.author.name),
                note=body.inquiry,
                paper_markdown=body.paper_markdown,
                idempotency_key=body.idempotency_key,
            )
        except InvalidField as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/api/submissions")
    def list_submissions(state: str | None = None) -> dict:
        items = journal.all_submissions()
        if state is not None:
            try:
                wanted = SubmissionState(state)
            except ValueError:
                raise HTTPException(status_code=400, detail=f"unknown state {state!r}") from None
            items = [s for s in items if s.state is wanted]
        return {"submissions": [_submission_payload(journal, s) for s in items]}

    @app.get("/api/submissions/{submission_id}")
    def status(
        submission_id: str,
        x_actor_handle: str | None = Header(default=None),
    ) -> dict:
        try:
            submission = journal.get(submission_id)
        except UnknownSubmission as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return _submission_payload(journal, submission, x_actor_handle, full=True)

    @app.get("/api/submissions/{submission_id}/badge.svg")
    def badge(submission_id: str) -> Response:
        try:
            submission = journal.get(submission_id)
        except UnknownSubmission as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        svg = badge_svg(journal.badge_for(submission))
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/api/submissions/{submission_id}/checklist")
    def toggle_checklist(submission_id: str, body: ChecklistToggleIn) -> dict:
        try:
            actor = journal.registry.resolve(body.actor)
            journal.set_checklist_item(
                submission_id, body.reviewer, body.item_id, body.checked, actor
            )
            submission = journal.get(submission_id)
        except (Unauthorized, UnknownActor) as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc
        except UnknownSubmission as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return _submission_payload(journal, submission, body.actor, full=True)

    @app.get("/api/published")
    def published() -> dict:
        articles = []
        for s in journal.published():
            articles.append(
                {
                    "id": s.id,
                    "title": s.title,
                    "authors": [s.submitting_author.display_name or s.submitting_author.handle],
                    "article_doi": str(s.article_doi),
                    "archive_doi": str(s.archive_doi) if s.archive_doi else None,
                    "published_at": s.published_at.isoformat(),
                    "repository_url": s.repository_url,
                }
            )
        return {"articles": articles}

    @app.post("/api/events", status_code=202)
    async def events(request: Request, background: BackgroundTasks) -> dict:
        try:
            payload = await request.json()
        except Exception as exc:
            raise HTTPException(status_code=400, detail="body is not valid JSON") from exc
        try:
            event = journal.ingest(payload)
        except MalformedPayload as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        background.add_task(journal.process_pending)
        return {"status": "accepted", "event_id": event.event_id}

    @app.get("/api/report")
    def report() -> dict:
        return export_report(journal.review_records())

    ui_path = journal.config.ui_path
    if ui_path and Path(ui_path).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


def serve(journal: Journal) -> None:  # pragma: no cover - thin uvicorn wrapper
    import uvicorn

    uvicorn.run(
        create_app(journal),
        host=journal.config.host,
        port=journal.config.port,
        log_level="info",
    )
