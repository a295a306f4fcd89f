"""Archival metadata deposit: a minimal Crossref-style XML record.

The element set is fixed (journal_title, issn, article_title,
contributors/person_name, publication_date, doi, resource, license_ref, and
archive_doi); the serialization is validated for well-formedness and
required-element presence, not against the full registry schema.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date

from .config import JournalConfig
from .doi import ArchiveDoi, Doi
from .errors import BlockingViolation, InvalidField
from .manuscript import AuthorEntry, Manuscript, blocking_violations

_ISSN_RE = re.compile(r"^\d{4}-\d{3}[\dX]$")

REQUIRED_ELEMENTS = (
    "journal_title",
    "issn",
    "article_title",
    "contributors",
    "publication_date",
    "doi",
    "resource",
    "license_ref",
    "archive_doi",
)


@dataclass(frozen=True)
class CrossrefDeposit:
    doi: Doi
    journal_title: str
    issn: str
    article_title: str
    contributors: tuple[AuthorEntry, ...]
    publication_date: date
    resource_url: str
    archive_doi: ArchiveDoi
    license_url: str

    def __post_init__(self):
        if not _ISSN_RE.match(self.issn):
            raise InvalidField(f"issn must look like NNNN-NNNC: {self.issn!r}")
        if not self.contributors:
            raise InvalidField("a deposit needs at least one contributor")

    def to_xml(self) -> str:
        root = ET.Element("crossref_deposit")
        ET.SubElement(root, "journal_title").text = self.journal_title
        ET.SubElement(root, "issn").text = self.issn
        ET.SubElement(root, "article_title").text = self.article_title
        contributors = ET.SubElement(root, "contributors")
        for position, author in enumerate(self.contributors):
            person = ET.SubElement(
                contributors,
                "person_name",
                sequence="first" if position == 0 else "additional",
            )
            given, surname = author.name_parts()
            if given:
                ET.SubElement(person, "given_name").text = given
            ET.SubElement(person, "surname").text = surname
            if author.orcid:
                ET.SubElement(person, "orcid").text = author.orcid
        ET.SubElement(root, "publication_date").text = self.publication_date.isoformat()
        ET.SubElement(root, "doi").text = str(self.doi)
        ET.SubElement(root, "resource").text = self.resource_url
        ET.SubElement(root, "license_ref").text = self.license_url
        ET.SubElement(root, "archive_doi").text = str(self.archive_doi)
        ET.indent(root)
        return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def build_crossref_deposit(
    m: Manuscript,
    doi: Doi,
    archive: ArchiveDoi,
    published: date,
    config: JournalConfig,
) -> CrossrefDeposit:
    """Assemble the deposit for a publication-ready manuscript.

    Raises BlockingViolation when the manuscript still has blocking
    validation problems.
    """
    blocking = blocking_violations(m)
    if blocking:
        raise BlockingViolation(
            "manuscript is not deposit-ready: " + "; ".join(v.code for v in blocking)
        )
    return CrossrefDeposit(
        doi=doi,
        journal_title=config.journal_title,
        issn=config.issn,
        article_title=m.title,
        contributors=m.authors,
        publication_date=published,
        resource_url=config.resource_url(doi),
        archive_doi=archive,
        license_url=config.license_url,
    )
