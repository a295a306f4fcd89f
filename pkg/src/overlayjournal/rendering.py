"""Deterministic rendering of manuscripts to a normalized HTML article.

Markdown support is the common core subset: headings, paragraphs, emphasis,
links, inline code, fenced code blocks, and lists. Anything else (tables,
footnotes) passes through as literal text. Identical input renders to
byte-identical output.
"""

from __future__ import annotations

import re

from .doi import ArchiveDoi, Doi
from .manuscript import Manuscript

_CODE_SPAN_RE = re.compile(r"`([^`]+)`")
_LINK_RE = re.compile(r"\[([^\]]*)\]\(([^)\s]+)\)")
_BOLD_RE = re.compile(r"\*\*(.+?)\*\*")
_ITALIC_RE = re.compile(r"\*([^*]+)\*")
_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*)$")
_ORDERED_ITEM_RE = re.compile(r"^\d+\.\s+(.*)$")


def escape_html(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_inline(text: str) -> str:
    """Escape HTML then apply inline markup: code spans, links, bold, italic."""
    # Code spans are pulled out first so their contents stay literal.
    placeholders: list[str] = []

    def stash_code(match: re.Match) -> str:
        placeholders.append(f"<code>{escape_html(match.group(1))}</code>")
        return f"\x00{len(placeholders) - 1}\x00"

    text = _CODE_SPAN_RE.sub(stash_code, text)
    text = escape_html(text)
    text = _LINK_RE.sub(lambda m: f'<a href="{m.group(2)}">{m.group(1)}</a>', text)
    text = _BOLD_RE.sub(lambda m: f"<strong>{m.group(1)}</strong>", text)
    text = _ITALIC_RE.sub(lambda m: f"<em>{m.group(1)}</em>", text)
    return re.sub(r"\x00(\d+)\x00", lambda m: placeholders[int(m.group(1))], text)


def render_markdown(text: str) -> str:
    """Render the supported Markdown subset to HTML, one element per block."""
    html: list[str] = []
    paragraph: list[str] = []
    list_items: list[str] = []
    list_tag: str | None = None
    code_lines: list[str] | None = None

    def flush_paragraph():
        nonlocal paragraph
        if paragraph:
            html.append(f"<p>{render_inline(' '.join(paragraph))}</p>")
            paragraph = []

    def flush_list():
        nonlocal list_items, list_tag
        if list_tag:
            items = "".join(f"<li>{render_inline(item)}</li>" for item in list_items)
            html.append(f"<{list_tag}>{items}</{list_tag}>")
            list_items = []
            list_tag = None

    for line in text.split("\n"):
        if code_lines is not None:
            if line.startswith("```"):
                html.append("<pre><code>" + escape_html("\n".join(code_lines)) + "</code></pre>")
                code_lines = None
            else:
                code_lines.append(line)
            continue
        if line.startswith("```"):
            flush_paragraph()
            flush_list()
            code_lines = []
            continue
        if not line.strip():
            flush_paragraph()
            flush_list()
            continue
        heading = _HEADING_RE.match(line)
        if heading:
            flush_paragraph()
            flush_list()
            level = len(heading.group(1))
            html.append(f"<h{level}>{render_inline(heading.group(2))}</h{level}>")
            continue
        if line.startswith(("- ", "* ")):
            flush_paragraph()
            if list_tag != "ul":
                flush_list()
                list_tag = "ul"
            list_items.append(line[2:])
            continue
        ordered = _ORDERED_ITEM_RE.match(line)
        if ordered:
            flush_paragraph()
            if list_tag != "ol":
                flush_list()
                list_tag = "ol"
            list_items.append(ordered.group(1))
            continue
        paragraph.append(line)

    if code_lines is not None:  # unterminated fence: keep content as code
        html.append("<pre><code>" + escape_html("\n".join(code_lines)) + "</code></pre>")
    flush_paragraph()
    flush_list()
    return "\n".join(html)


def render_article(m: Manuscript, doi: Doi, archive: ArchiveDoi | None) -> str:
    """Render the normalized article document (full HTML page, deterministic).

    Draft renders (before an archive exists) simply omit the archive line.
    """
    author_bits = []
    for author in m.authors:
        sup = ",".join(str(i) for i in author.affiliation_indices)
        name = escape_html(author.name)
        author_bits.append(f"{name}<sup>{sup}</sup>" if sup else name)
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        '<head><meta charset="utf-8"><title>' + escape_html(m.title) + "</title></head>",
        "<body>",
        "<article>",
        f"<h1>{escape_html(m.title)}</h1>",
        '<p class="authors">' + ", ".join(author_bits) + "</p>",
    ]
    if m.affiliations:
        affil_bits = [
            f"<sup>{a.index}</sup> {escape_html(a.name)}" for a in m.affiliations
        ]
        parts.append('<p class="affiliations">' + "; ".join(affil_bits) + "</p>")
    if m.date is not None:
        parts.append(f'<p class="date">Published: {m.date.isoformat()}</p>')
    parts.append(
        f'<p class="doi">DOI: <a href="{doi.url}">{doi}</a></p>'
    )
    if archive is not None:
        parts.append(
            f'<p class="archive">Software archive: <a href="{archive.url}">{archive}</a></p>'
        )
    body = render_markdown(m.body_markdown)
    if body:
        parts.append(body)
    if m.bibliography:
        items = []
        for ref in m.bibliography:
            label = escape_html(ref.title or ref.id)
            if ref.doi:
                label += f' <a href="https://doi.org/{ref.doi}">doi:{escape_html(ref.doi)}</a>'
            items.append(f"<li>{label}</li>")
        parts.append(
            '<section class="references"><h2>References</h2><ol>'
            + "".join(items)
            + "</ol></section>"
        )
    parts.extend(["</article>", "</body>", "</html>"])
    return "\n".join(parts) + "\n"
