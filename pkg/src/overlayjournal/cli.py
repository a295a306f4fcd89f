"""Command line entry points: serve, compile, stats, simulate.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from .analytics import (
    CostParameters,
    export_report,
    load_records,
    write_report,
    write_summary_csv,
)
from .config import load_config
from .crossref import build_crossref_deposit
from .doi import mint_article_doi, validate_archive_doi
from .errors import EmptyInput, JournalError
from .journal import Journal
from .manuscript import parse_manuscript, validate_manuscript
from .rendering import render_article
from .scenario import load_scenario, run_scenario


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Overlay-journal management: submissions, chat-ops review, publication."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML/JSON config file; environment variables override it.")
def serve(config_path: str | None) -> None:
    """Run the HTTP API."""
    from .api import serve as run_server

    config = load_config(config_path)
    journal = Journal(config=config)
    click.echo(f"listening on http://{config.listen_address}", err=True)
    run_server(journal)


@main.command(name="compile")
@click.argument("paper", type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), default="build",
              help="Output directory for the article document and deposit XML.")
@click.option("--sequence", type=int, default=1, show_default=True,
              help="Journal sequence number used to mint the article DOI.")
@click.option("--archive", "archive_text", default=None,
              help="Archive DOI; without it no deposit XML is produced.")
@click.option("--published", "published_text", default=None,
              help="Publication date (ISO); defaults to the manuscript date or today.")
def compile_cmd(
    paper: str,
    out_dir: str,
    sequence: int,
    archive_text: str | None,
    published_text: str | None,
) -> None:
    """Parse, validate, and render a paper.md manuscript."""
    text = Path(paper).read_text(encoding="utf-8")
    try:
        manuscript = parse_manuscript(text)
    except JournalError as exc:
        _fail(f"cannot parse manuscript: {exc}")
    violations = validate_manuscript(manuscript)
    for violation in violations:
        level = "error" if violation.blocking else "warning"
        click.echo(f"{level}: {violation.code}: {violation.message}", err=True)
    if any(v.blocking for v in violations):
        _fail("manuscript has blocking violations")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = load_config()
    try:
        doi = mint_article_doi(sequence, prefix=config.doi_prefix)
    except JournalError as exc:
        _fail(str(exc))
    published = (
        date.fromisoformat(published_text)
        if published_text
        else (manuscript.date or date.today())
    )

    archive = None
    if archive_text is not None:
        try:
            archive = validate_archive_doi(archive_text)
        except JournalError as exc:
            _fail(str(exc))
    article_path = out / "article.html"
    article_path.write_text(render_article(manuscript, doi, archive), encoding="utf-8")
    click.echo(str(article_path))
    if archive is not None:
        try:
            deposit = build_crossref_deposit(manuscript, doi, archive, published, config)
        except JournalError as exc:
            _fail(str(exc))
        deposit_path = out / "deposit.xml"
        deposit_path.write_text(deposit.to_xml(), encoding="utf-8")
        click.echo(str(deposit_path))
    else:
        click.echo("note: no --archive DOI given, skipping deposit XML", err=True)


@main.command()
@click.argument("records", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default="report.json",
              show_default=True, help="Where to write the report document.")
@click.option("--membership-fee", type=float, default=275.0, show_default=True)
@click.option("--doi-fee", type=float, default=1.0, show_default=True)
@click.option("--hosting-monthly", type=float, default=19.0, show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render charts next to the report.")
def stats(
    records: str,
    out_path: str,
    membership_fee: float,
    doi_fee: float,
    hosting_monthly: float,
    figures: bool,
) -> None:
    """Compute the editorial report from a review-records CSV."""
    try:
        loaded = load_records(records)
        if not loaded:
            raise EmptyInput("records CSV has no rows")
        params = CostParameters(membership_fee, doi_fee, hosting_monthly)
        report = export_report(loaded, params)
    except JournalError as exc:
        _fail(str(exc))
    out = Path(out_path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    write_report(report, out)
    click.echo(str(out))
    summary = out.with_suffix(".csv")
    write_summary_csv(report, summary)
    click.echo(str(summary))
    if figures:
        from .figures import render_figures

        for path in render_figures(loaded, out.parent / "figures"):
            click.echo(str(path))


@main.command()
@click.argument("scenario", type=click.Path(exists=True))
@click.option("--store", "store_dir", type=click.Path(), default=None,
              help="Persist the resulting journal state into this directory.")
def simulate(scenario: str, store_dir: str | None) -> None:
    """Replay a scripted event sequence against the simulated forge."""
    doc = load_scenario(scenario)
    try:
        result = run_scenario(doc, storage_path=store_dir)
    except JournalError as exc:
        _fail(str(exc))
    click.echo(json.dumps(result.to_dict(), indent=2))


if __name__ == "__main__":  # pragma: no cover
    main()
