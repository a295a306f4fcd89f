"""Manuscript (`paper.md`) parsing, validation, and serialization.

A manuscript is a Markdown body preceded by a ``---``-delimited metadata
block. The metadata schema is fixed: ``title``, ``authors`` (name, orcid,
affiliation), ``affiliations`` (index, name), ``date``, ``tags``, and
``bibliography`` entries with optional DOIs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime

import yaml

from .errors import InvariantViolation, MetadataSyntax, NoMetadataBlock

_ORCID_RE = re.compile(r"^\d{4}-\d{4}-\d{4}-\d{3}[\dX]$")


@dataclass(frozen=True)
class Affiliation:
    index: int
    name: str


@dataclass(frozen=True)
class AuthorEntry:
    name: str
    orcid: str | None = None
    affiliation_indices: tuple[int, ...] = ()
    # Explicit overrides for the whitespace-split default.
    given_name: str | None = None
    surname: str | None = None

    def name_parts(self) -> tuple[str, str]:
        """(given, surname); the last whitespace-delimited token is the surname,
        mononyms map to surname-only, explicit overrides win."""
        if self.surname is not None:
            return self.given_name or "", self.surname
        parts = self.name.rsplit(None, 1)
        if len(parts) == 1:
            return "", parts[0]
        return parts[0], parts[1]


@dataclass(frozen=True)
class BibliographyRef:
    id: str
    title: str | None = None
    doi: str | None = None


@dataclass(frozen=True)
class Manuscript:
    title: str
    authors: tuple[AuthorEntry, ...]
    affiliations: tuple[Affiliation, ...] = ()
    date: date | None = None
    tags: tuple[str, ...] = ()
    body_markdown: str = ""
    bibliography: tuple[BibliographyRef, ...] = ()


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    blocking: bool = True


def _split_front_matter(text: str) -> tuple[str, str, int]:
    """Return (metadata_block, body, block_start_line). Raises if absent."""
    lines = text.split("\n")
    if not lines or lines[0].strip() != "---":
        raise NoMetadataBlock("manuscript must start with a ----delimited metadata block")
    for j in range(1, len(lines)):
        if lines[j].strip() == "---":
            return "\n".join(lines[1:j]), "\n".join(lines[j + 1:]), 2
    raise MetadataSyntax("metadata block is not terminated by a closing --- line")


def _coerce_date(value) -> date | None:
    if value is None:
        return None
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    if isinstance(value, str):
        try:
            return date.fromisoformat(value)
        except ValueError:
            raise MetadataSyntax(f"date is not an ISO calendar date: {value!r}") from None
    raise MetadataSyntax(f"date has unsupported type: {type(value).__name__}")


def _coerce_indices(value) -> tuple[int, ...]:
    if value is None:
        return ()
    if isinstance(value, bool):
        raise MetadataSyntax(f"affiliation must be an index or list of indices: {value!r}")
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise MetadataSyntax(f"affiliation indices must be integers: {value!r}") from None
    if isinstance(value, list):
        out = []
        for entry in value:
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise MetadataSyntax(f"affiliation index must be an integer: {entry!r}")
            out.append(entry)
        return tuple(out)
    raise MetadataSyntax(f"affiliation must be an index or list of indices: {value!r}")


def _parse_authors(raw) -> tuple[AuthorEntry, ...]:
    if raw is None:
        raise InvariantViolation("manuscript must list at least one author")
    if not isinstance(raw, list):
        raise MetadataSyntax("authors must be a list")
    authors = []
    for entry in raw:
        if not isinstance(entry, dict) or "name" not in entry:
            raise MetadataSyntax(f"author entry must be a mapping with a name: {entry!r}")
        orcid = entry.get("orcid")
        if orcid is not None:
            orcid = str(orcid)
            if not _ORCID_RE.match(orcid):
                raise InvariantViolation(f"malformed ORCID: {orcid!r}")
        authors.append(
            AuthorEntry(
                name=str(entry["name"]),
                orcid=orcid,
                affiliation_indices=_coerce_indices(entry.get("affiliation")),
                given_name=entry.get("given_name"),
                surname=entry.get("surname"),
            )
        )
    if not authors:
        raise InvariantViolation("manuscript must list at least one author")
    return tuple(authors)


def _parse_affiliations(raw) -> tuple[Affiliation, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise MetadataSyntax("affiliations must be a list")
    entries = []
    for entry in raw:
        if not isinstance(entry, dict) or "index" not in entry or "name" not in entry:
            raise MetadataSyntax(f"affiliation entry must map index and name: {entry!r}")
        if not isinstance(entry["index"], int) or isinstance(entry["index"], bool):
            raise MetadataSyntax(f"affiliation index must be an integer: {entry['index']!r}")
        entries.append(Affiliation(index=entry["index"], name=str(entry["name"])))
    return tuple(entries)


def _parse_bibliography(raw) -> tuple[BibliographyRef, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise MetadataSyntax("bibliography must be a list")
    refs = []
    for entry in raw:
        if not isinstance(entry, dict) or "id" not in entry:
            raise MetadataSyntax(f"bibliography entry must be a mapping with an id: {entry!r}")
        refs.append(
            BibliographyRef(
                id=str(entry["id"]),
                title=str(entry["title"]) if entry.get("title") is not None else None,
                doi=str(entry["doi"]) if entry.get("doi") is not None else None,
            )
        )
    return tuple(refs)


def parse_manuscript(text: str) -> Manuscript:
    """Parse a `paper.md` document into a Manuscript.

    Raises NoMetadataBlock / MetadataSyntax (with line and column where
    available) / InvariantViolation (zero authors, dangling affiliation index,
    malformed ORCID, empty title).
    """
    block, body, block_start = _split_front_matter(text)
    try:
        meta = yaml.safe_load(block)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise MetadataSyntax(
                str(getattr(exc, "problem", exc)),
                line=mark.line + block_start,
                column=mark.column + 1,
            ) from exc
        raise MetadataSyntax(str(exc)) from exc
    if not isinstance(meta, dict):
        raise MetadataSyntax("metadata block must be a key/value mapping")

    title = meta.get("title")
    if title is None or not str(title).strip():
        raise InvariantViolation("manuscript title must be non-empty")
    authors = _parse_authors(meta.get("authors"))
    affiliations = _parse_affiliations(meta.get("affiliations"))
    known_indices = {a.index for a in affiliations}
    for author in authors:
        for idx in author.affiliation_indices:
            if idx not in known_indices:
                raise InvariantViolation(
                    f"author {author.name!r} references unknown affiliation index {idx}"
                )
    tags_raw = meta.get("tags") or []
    if not isinstance(tags_raw, list):
        raise MetadataSyntax("tags must be a list")
    return Manuscript(
        title=str(title),
        authors=authors,
        affiliations=affiliations,
        date=_coerce_date(meta.get("date")),
        tags=tuple(str(t) for t in tags_raw),
        body_markdown=body,
        bibliography=_parse_bibliography(meta.get("bibliography")),
    )


def serialize_manuscript(m: Manuscript) -> str:
    """Inverse of parse_manuscript: emit `paper.md` text with the metadata block."""
    meta: dict = {"title": m.title}
    authors = []
    for author in m.authors:
        entry: dict = {"name": author.name}
        if author.orcid is not None:
            entry["orcid"] = author.orcid
        if author.affiliation_indices:
            indices = list(author.affiliation_indices)
            entry["affiliation"] = indices[0] if len(indices) == 1 else indices
        if author.given_name is not None:
            entry["given_name"] = author.given_name
        if author.surname is not None:
            entry["surname"] = author.surname
        authors.append(entry)
    meta["authors"] = authors
    if m.affiliations:
        meta["affiliations"] = [{"index": a.index, "name": a.name} for a in m.affiliations]
    if m.date is not None:
        meta["date"] = m.date
    if m.tags:
        meta["tags"] = list(m.tags)
    if m.bibliography:
        refs = []
        for ref in m.bibliography:
            entry = {"id": ref.id}
            if ref.title is not None:
                entry["title"] = ref.title
            if ref.doi is not None:
                entry["doi"] = ref.doi
            refs.append(entry)
        meta["bibliography"] = refs
    block = yaml.safe_dump(meta, sort_keys=False, allow_unicode=True, default_flow_style=False)
    return f"---\n{block}---\n{m.body_markdown}"


def validate_manuscript(m: Manuscript) -> list[Violation]:
    """Machine-checkable violations only; judgment calls belong to reviewers."""
    violations: list[Violation] = []
    if not m.title.strip():
        violations.append(Violation("missing-title", "title is missing or empty"))
    if not m.authors:
        violations.append(Violation("missing-authors", "no authors listed"))
    if m.date is None:
        violations.append(Violation("missing-date", "no publication-ready date set"))
    if not m.body_markdown.strip():
        violations.append(Violation("empty-body", "manuscript body is empty"))
    if not m.tags:
        violations.append(Violation("missing-tags", "no tags given", blocking=False))
    for ref in m.bibliography:
        if not ref.doi:
            violations.append(
                Violation(
                    "reference-missing-doi",
                    f"bibliography entry {ref.id!r} has no DOI",
                    blocking=False,
                )
            )
    return violations


def blocking_violations(m: Manuscript) -> list[Violation]:
    return [v for v in validate_manuscript(m) if v.blocking]
