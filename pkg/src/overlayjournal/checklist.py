"""Reviewer checklist template, per-reviewer instances, and issue-body round-trip.

The checklist state's source of truth is the persistent store; the rendered
task-list text is a projection that round-trips through the forge issue body,
so its format is bit-exact: ``- [ ] **Label**: prompt`` lines grouped under
``### Category`` headings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime

from .clocks import Clock, SYSTEM_CLOCK
from .errors import InvalidField, MissingItem, Unauthorized, UnknownItem
from .people import EDITORIAL_ROLES, PersonRef

#: Exact sentence that marks a submission as already reviewed elsewhere and
#: eligible to bypass the checklist gate. Matching is deliberately exact:
#: fuzzier matching risks a false bypass of review.
FAST_TRACK_SENTENCE = "This submission has been accepted to rOpenSci."


@dataclass(frozen=True)
class ChecklistItemDef:
    """One checklist item: a stable slug, a bold label, and the question asked."""

    id: str
    label: str
    prompt: str


@dataclass(frozen=True)
class ChecklistCategory:
    name: str
    items: tuple[ChecklistItemDef, ...]


@dataclass(frozen=True)
class ChecklistTemplate:
    categories: tuple[ChecklistCategory, ...]
    version: str = "1"

    def __post_init__(self):
        seen: set[str] = set()
        for category in self.categories:
            for item in category.items:
                if item.id in seen:
                    raise InvalidField(f"duplicate checklist item id: {item.id}")
                if not item.prompt:
                    raise InvalidField(f"empty prompt for checklist item: {item.id}")
                seen.add(item.id)

    def item_ids(self) -> list[str]:
        return [item.id for category in self.categories for item in category.items]

    def item_count(self) -> int:
        return len(self.item_ids())


DEFAULT_TEMPLATE = ChecklistTemplate(
    version="1",
    categories=(
        ChecklistCategory(
            "Conflict of interest",
            (
                ChecklistItemDef(
                    "conflict-of-interest",
                    "Conflict of interest",
                    "As the reviewer I confirm that I have read the JOSS conflict of"
                    " interest policy and that there are no conflicts of interest for"
                    " me to review this work.",
                ),
            ),
        ),
        ChecklistCategory(
            "Code of Conduct",
            (
                ChecklistItemDef(
                    "code-of-conduct",
                    "Code of Conduct",
                    "I confirm that I read and will adhere to the JOSS code of conduct.",
                ),
            ),
        ),
        ChecklistCategory(
            "General checks",
            (
                ChecklistItemDef(
                    "repository",
                    "Repository",
                    "Is the source code for this software available at the repository URL?",
                ),
                ChecklistItemDef(
                    "license",
                    "License",
                    "Does the repository contain a plain-text LICENSE file with the"
                    " contents of an OSI-approved software license?",
                ),
                ChecklistItemDef(
                    "version",
                    "Version",
                    "Does the release version given match the GitHub release?",
                ),
                ChecklistItemDef(
                    "authorship",
                    "Authorship",
                    "Has the submitting author made major contributions to the software?",
                ),
            ),
        ),
        ChecklistCategory(
            "Functionality",
            (
                ChecklistItemDef(
                    "installation",
                    "Installation",
                    "Does installation proceed as outlined in the documentation?",
                ),
                ChecklistItemDef(
                    "functionality",
                    "Functionality",
                    "Have the functional claims of the software been confirmed?",
                ),
                ChecklistItemDef(
                    "performance",
                    "Performance",
                    "Have any performance claims of the software been confirmed?",
                ),
            ),
        ),
        ChecklistCategory(
            "Documentation",
            (
                ChecklistItemDef(
                    "statement-of-need",
                    "A statement of need",
                    "Do the authors clearly state what problems the software is"
                    " designed to solve and who the target audience is?",
                ),
                ChecklistItemDef(
                    "installation-instructions",
                    "Installation instructions",
                    "Is there a clearly-stated list of dependencies? Ideally these"
                    " should be handled with an automated package management solution.",
                ),
                ChecklistItemDef(
                    "example-usage",
                    "Example usage",
                    "Do the authors include examples of how to use the software"
                    " (ideally to solve real-world analysis problems)?",
                ),
                ChecklistItemDef(
                    "functionality-documentation",
                    "Functionality documentation",
                    "Is the core functionality of the software documented to a"
                    " satisfactory level (e.g., API method documentation)?",
                ),
                ChecklistItemDef(
                    "automated-tests",
                    "Automated tests",
                    "Are there automated tests or manual steps described so that the"
                    " function of the software can be verified?",
                ),
                ChecklistItemDef(
                    "community-guidelines",
                    "Community guidelines",
                    "Are there clear guidelines for third parties wishing to 1)"
                    " contribute to the software, 2) report issues or problems with"
                    " the software, and 3) seek support?",
                ),
            ),
        ),
        ChecklistCategory(
            "Software paper",
            (
                ChecklistItemDef(
                    "paper-authors",
                    "Authors",
                    "Does the paper.md file include a list of authors with their"
                    " affiliations?",
                ),
                # Same question as under Documentation, asked again about the
                # article text itself; the two items have distinct ids on purpose.
                ChecklistItemDef(
                    "paper-statement-of-need",
                    "A statement of need",
                    "Do the authors clearly state what problems the software is"
                    " designed to solve and who the target audience is?",
                ),
                ChecklistItemDef(
                    "references",
                    "References",
                    "Do all archival references that should have a DOI list one"
                    " (e.g., papers, datasets, software)?",
                ),
            ),
        ),
    ),
)


@dataclass(frozen=True)
class ReviewerChecklist:
    """One reviewer's working copy of the checklist for one submission."""

    reviewer: PersonRef
    submission_id: str
    states: dict[str, bool] = field(default_factory=dict)
    completed_at: datetime | None = None

    def to_dict(self) -> dict:
        return {
            "reviewer": self.reviewer.to_dict(),
            "submission_id": self.submission_id,
            "states": dict(self.states),
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReviewerChecklist":
        completed = d.get("completed_at")
        return cls(
            reviewer=PersonRef.from_dict(d["reviewer"]),
            submission_id=d["submission_id"],
            states=dict(d["states"]),
            completed_at=datetime.fromisoformat(completed) if completed else None,
        )


def instantiate(
    template: ChecklistTemplate, reviewer: PersonRef, submission_id: str
) -> ReviewerChecklist:
    """Create a fresh all-unchecked checklist for one reviewer."""
    return ReviewerChecklist(
        reviewer=reviewer,
        submission_id=submission_id,
        states={item_id: False for item_id in template.item_ids()},
    )


def set_item(
    c: ReviewerChecklist,
    item_id: str,
    checked: bool,
    actor: PersonRef,
    clock: Clock = SYSTEM_CLOCK,
) -> ReviewerChecklist:
    """Check or uncheck one item; only the owning reviewer or an editor may do so.

    ``completed_at`` is stamped when the final item becomes checked and cleared
    again if any item is later unchecked.
    """
    if actor.key != c.reviewer.key and actor.role not in EDITORIAL_ROLES:
        raise Unauthorized(
            f"@{actor.handle} may not edit @{c.reviewer.handle}'s checklist"
        )
    if item_id not in c.states:
        raise UnknownItem(f"no checklist item with id {item_id!r}")
    states = dict(c.states)
    states[item_id] = checked
    if all(states.values()):
        completed_at = c.completed_at or clock.now()
    else:
        completed_at = None
    return replace(c, states=states, completed_at=completed_at)


def is_complete(c: ReviewerChecklist) -> bool:
    return bool(c.states) and all(c.states.values())


_ITEM_LINE_RE = re.compile(r"^- \[( |x)\] \*\*(.+?)\*\*: ")
_CATEGORY_LINE_RE = re.compile(r"^### (.+?)\s*$")


def render_markdown(c: ReviewerChecklist, template: ChecklistTemplate) -> str:
    """Render the checklist as forge task-list text (stable, bit-exact format)."""
    lines: list[str] = []
    for category in template.categories:
        lines.append(f"### {category.name}")
        lines.append("")
        for item in category.items:
            mark = "x" if c.states.get(item.id) else " "
            lines.append(f"- [{mark}] **{item.label}**: {item.prompt}")
        lines.append("")
    return "\n".join(lines[:-1]) + "\n"


def parse_markdown(text: str, template: ChecklistTemplate) -> dict[str, bool]:
    """Recover the checked/unchecked map from rendered task-list text.

    Lines that are not category headings or item lines are ignored. Items with
    the same label in different categories are disambiguated by the heading
    they appear under.
    """
    by_category_label = {
        (category.name, item.label): item.id
        for category in template.categories
        for item in category.items
    }
    states: dict[str, bool] = {}
    current_category: str | None = None
    for line in text.splitlines():
        heading = _CATEGORY_LINE_RE.match(line)
        if heading:
            current_category = heading.group(1)
            continue
        item_match = _ITEM_LINE_RE.match(line)
        if not item_match or current_category is None:
            continue
        item_id = by_category_label.get((current_category, item_match.group(2)))
        if item_id is not None:
            states[item_id] = item_match.group(1) == "x"
    missing = [item_id for item_id in template.item_ids() if item_id not in states]
    if missing:
        raise MissingItem(f"checklist body lacks items: {', '.join(missing)}")
    return states


def detect_fast_track(note: str) -> bool:
    """True iff the note contains the exact fast-track sentence."""
    return FAST_TRACK_SENTENCE in note
