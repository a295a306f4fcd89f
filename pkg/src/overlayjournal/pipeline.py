"""Article pipeline: turns an accepted submission into its published artifacts
(article DOI, archival deposit XML, rendered article document)."""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date

from .config import JournalConfig
from .crossref import CrossrefDeposit, build_crossref_deposit
from .doi import ArchiveDoi, Doi, mint_article_doi
from .manuscript import AuthorEntry, Manuscript, parse_manuscript
from .rendering import render_article
from .workflow import Submission


@dataclass(frozen=True)
class PublishedArtifacts:
    doi: Doi
    deposit: CrossrefDeposit
    deposit_xml: str
    article_html: str


class ArticlePipeline:
    """Stateless composition of manuscript handling, DOI minting, and deposit
    generation over one journal configuration."""

    def __init__(self, config: JournalConfig):
        self.config = config

    def manuscript_for(self, submission: Submission, paper_markdown: str | None) -> Manuscript:
        """Parse the attached `paper.md`; without one, derive a minimal
        manuscript from the submission record itself."""
        if paper_markdown is not None:
            return parse_manuscript(paper_markdown)
        author = submission.submitting_author
        return Manuscript(
            title=submission.title,
            authors=(AuthorEntry(name=author.display_name or author.handle),),
            date=submission.submitted_at.date(),
            body_markdown=(
                f"{submission.title} (version {submission.software_version})."
                f" Source: {submission.repository_url}"
            ),
        )

    def build_artifacts(
        self,
        manuscript: Manuscript,
        sequence_number: int,
        archive: ArchiveDoi,
        published: date,
    ) -> PublishedArtifacts:
        doi = mint_article_doi(sequence_number, prefix=self.config.doi_prefix)
        if manuscript.date is None:
            manuscript = replace(manuscript, date=published)
        deposit = build_crossref_deposit(manuscript, doi, archive, published, self.config)
        return PublishedArtifacts(
            doi=doi,
            deposit=deposit,
            deposit_xml=deposit.to_xml(),
            article_html=render_article(manuscript, doi, archive),
        )
