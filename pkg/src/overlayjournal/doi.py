"""Article and archive DOI types, minting, and validation."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidDoi, SequenceOverflow

ARTICLE_DOI_PREFIX = "10.21105"
ARTICLE_SUFFIX_TEMPLATE = "joss.{:05d}"
MAX_SEQUENCE = 99999

_ARCHIVE_DOI_RE = re.compile(r"^10\.\d+/\S+$")
_RESOLVER_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi:",
)
_ARTICLE_SUFFIX_RE = re.compile(r"^joss\.(\d{5})$")


@dataclass(frozen=True)
class Doi:
    """A journal article DOI, rendered as ``prefix/suffix``."""

    prefix: str
    suffix: str

    def __str__(self) -> str:
        return f"{self.prefix}/{self.suffix}"

    @property
    def url(self) -> str:
        return f"https://doi.org/{self}"


@dataclass(frozen=True)
class ArchiveDoi:
    """The DOI of the archived software snapshot (e.g. a Zenodo deposit)."""

    raw: str

    def __str__(self) -> str:
        return self.raw

    @property
    def url(self) -> str:
        return f"https://doi.org/{self.raw}"


def mint_article_doi(sequence_number: int, prefix: str = ARTICLE_DOI_PREFIX) -> Doi:
    """Mint the article DOI for a journal-wide sequence number.

    The suffix is ``joss.`` plus the zero-padded five-digit sequence number.
    """
    if not 1 <= sequence_number <= MAX_SEQUENCE:
        raise SequenceOverflow(
            f"sequence number {sequence_number} outside 1..{MAX_SEQUENCE}"
        )
    return Doi(prefix=prefix, suffix=ARTICLE_SUFFIX_TEMPLATE.format(sequence_number))


def parse_article_sequence(doi: Doi | str) -> int:
    """Recover the sequence number from an article DOI (inverse of minting)."""
    text = str(doi)
    prefix, _, suffix = text.partition("/")
    match = _ARTICLE_SUFFIX_RE.match(suffix)
    if prefix != ARTICLE_DOI_PREFIX or not match:
        raise InvalidDoi(f"not an article DOI: {text!r}")
    return int(match.group(1))


def validate_archive_doi(text: str) -> ArchiveDoi:
    """Validate an archive DOI, accepting bare and resolver-URL forms.

    Resolver forms (``https://doi.org/<doi>``) are normalized to the bare DOI.
    """
    candidate = text.strip()
    lowered = candidate.lower()
    for head in _RESOLVER_PREFIXES:
        if lowered.startswith(head):
            candidate = candidate[len(head):]
            break
    if not _ARCHIVE_DOI_RE.match(candidate):
        raise InvalidDoi(f"not a valid archive DOI: {text!r}")
    return ArchiveDoi(raw=candidate)
