"""Chat-ops command protocol: parse issue comments addressed to the bot,
authorize them against the person registry, and execute them.

The grammar is the module's wire format and is bit-exact. Keywords are
case-sensitive; separators are one or more spaces; a comment carries at most
one command and text after a valid production is ignored:

    assign @<handle> as editor
    assign @<handle> as reviewer
    start review magic-word=<token>
    set <doi> as archive
    generate pdf
    commands
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from .errors import (
    InvalidField,
    JournalError,
    MalformedCommand,
    Unauthorized,
    UnknownActor,
    WrongMagicWord,
)
from .forge import IssueRef
from .people import EDITORIAL_ROLES, PersonRef, PersonRegistry, Role

if TYPE_CHECKING:  # pragma: no cover
    from .journal import Journal


class CommandKind(str, Enum):
    ASSIGN_EDITOR = "assign-editor"
    ASSIGN_REVIEWER = "assign-reviewer"
    START_REVIEW = "start-review"
    SET_ARCHIVE = "set-archive"
    GENERATE_PDF = "generate-pdf"
    COMMANDS = "commands"


class OutcomeStatus(str, Enum):
    APPLIED = "applied"
    REJECTED_UNAUTHORIZED = "rejected-unauthorized"
    REJECTED_INVALID = "rejected-invalid"
    IGNORED = "ignored"


@dataclass(frozen=True)
class BotCommand:
    kind: CommandKind
    argument: str | None
    raw_text: str
    actor: PersonRef | None = None
    issue: IssueRef | None = None


@dataclass(frozen=True)
class CommandOutcome:
    status: OutcomeStatus
    reply: str | None = None

    def __post_init__(self):
        if self.status is OutcomeStatus.IGNORED and self.reply is not None:
            raise InvalidField("an ignored comment never gets a reply")


IGNORED = CommandOutcome(OutcomeStatus.IGNORED)

_HANDLE = r"[A-Za-z0-9-]+"
_PRODUCTIONS: tuple[tuple[CommandKind, re.Pattern], ...] = (
    (CommandKind.ASSIGN_EDITOR, re.compile(rf"^assign +@({_HANDLE}) +as +editor(?:\s|$)")),
    (CommandKind.ASSIGN_REVIEWER, re.compile(rf"^assign +@({_HANDLE}) +as +reviewer(?:\s|$)")),
    (CommandKind.START_REVIEW, re.compile(r"^start +review +magic-word=(\S+)(?:\s|$)")),
    (CommandKind.SET_ARCHIVE, re.compile(r"^set +(\S+) +as +archive(?:\s|$)")),
    (CommandKind.GENERATE_PDF, re.compile(r"^generate +pdf(?:\s|$)")),
    (CommandKind.COMMANDS, re.compile(r"^commands(?:\s|$)")),
)

#: Which roles may run each command. Help and compilation are open to anyone.
COMMAND_ROLES: dict[CommandKind, frozenset] = {
    CommandKind.ASSIGN_EDITOR: EDITORIAL_ROLES,
    CommandKind.ASSIGN_REVIEWER: EDITORIAL_ROLES,
    CommandKind.START_REVIEW: EDITORIAL_ROLES,
    CommandKind.SET_ARCHIVE: EDITORIAL_ROLES,
    CommandKind.GENERATE_PDF: frozenset(Role),
    CommandKind.COMMANDS: frozenset(Role),
}

USAGE_LINES = (
    "assign @<handle> as editor",
    "assign @<handle> as reviewer",
    "start review magic-word=<token>",
    "set <doi> as archive",
    "generate pdf",
    "commands",
)


def _mentions_bot(text: str, bot_handle: str) -> bool:
    pattern = re.compile(rf"@{re.escape(bot_handle)}(?![A-Za-z0-9-])", re.IGNORECASE)
    return pattern.search(text) is not None


def parse_command(
    comment_text: str,
    bot_handle: str,
    actor: PersonRef | None = None,
    issue: IssueRef | None = None,
) -> BotCommand | None:
    """Parse one comment.

    Returns a BotCommand when the first token is the bot mention and the rest
    matches a production; returns None when the bot is not addressed at all;
    raises MalformedCommand when the bot is addressed but nothing matches (so
    the caller can reply with usage help).
    """
    if not bot_handle:
        raise InvalidField("bot_handle must be non-empty")
    stripped = comment_text.lstrip()
    first, _, rest = stripped.partition(" ")
    if first.casefold() == f"@{bot_handle}".casefold():
        rest = rest.lstrip(" ")
        for kind, pattern in _PRODUCTIONS:
            match = pattern.match(rest)
            if match:
                argument = match.group(1) if match.groups() else None
                return BotCommand(
                    kind=kind,
                    argument=argument,
                    raw_text=comment_text,
                    actor=actor,
                    issue=issue,
                )
        raise MalformedCommand(f"no such command: {rest.splitlines()[0] if rest else ''!r}")
    if _mentions_bot(comment_text, bot_handle):
        raise MalformedCommand("the bot is addressed mid-comment; commands must lead")
    return None


def render_command(cmd: BotCommand, bot_handle: str) -> str:
    """Canonical text for a command; re-parsing it yields an equal command."""
    mention = f"@{bot_handle}"
    if cmd.kind is CommandKind.ASSIGN_EDITOR:
        return f"{mention} assign @{cmd.argument} as editor"
    if cmd.kind is CommandKind.ASSIGN_REVIEWER:
        return f"{mention} assign @{cmd.argument} as reviewer"
    if cmd.kind is CommandKind.START_REVIEW:
        return f"{mention} start review magic-word={cmd.argument}"
    if cmd.kind is CommandKind.SET_ARCHIVE:
        return f"{mention} set {cmd.argument} as archive"
    if cmd.kind is CommandKind.GENERATE_PDF:
        return f"{mention} generate pdf"
    return f"{mention} commands"


def authorize(cmd: BotCommand, registry: PersonRegistry) -> bool:
    """True iff the actor's registered role may run this command.

    The role is taken from the registry, never from the command payload.
    Raises UnknownActor for unregistered handles.
    """
    if cmd.actor is None:
        raise UnknownActor("command carries no actor")
    person = registry.resolve(cmd.actor.handle)
    return person.role in COMMAND_ROLES[cmd.kind]


def usage_reply(bot_handle: str) -> str:
    lines = "\n".join(f"- `@{bot_handle} {line}`" for line in USAGE_LINES)
    return f"Here is what I can do:\n{lines}"


def execute(cmd: BotCommand, journal: "Journal") -> CommandOutcome:
    """Run an authorized command against the journal and reply on the issue.

    Delegate errors surface as rejected outcomes with an explanatory reply;
    nothing escapes past this boundary as an exception.
    """
    issue = cmd.issue
    if issue is None:
        return CommandOutcome(OutcomeStatus.REJECTED_INVALID, "command has no issue context")
    submission = journal.submission_for_issue(issue)
    if submission is None:
        return journal.reply(
            issue, CommandOutcome(OutcomeStatus.REJECTED_INVALID, "no submission tracks this issue")
        )
    actor_handle = cmd.actor.handle if cmd.actor else "?"

    try:
        if not authorize(cmd, journal.registry):
            return journal.reply(
                issue,
                CommandOutcome(
                    OutcomeStatus.REJECTED_UNAUTHORIZED,
                    f"@{actor_handle} is not authorized to run this command.",
                ),
            )
    except UnknownActor:
        return journal.reply(
            issue,
            CommandOutcome(
                OutcomeStatus.REJECTED_UNAUTHORIZED,
                f"@{actor_handle} is not a registered participant.",
            ),
        )

    actor = journal.registry.resolve(cmd.actor.handle)
    try:
        if cmd.kind is CommandKind.ASSIGN_EDITOR:
            journal.assign_editor(submission.id, cmd.argument, actor)
            reply = f"Editor assigned: @{cmd.argument}"
        elif cmd.kind is CommandKind.ASSIGN_REVIEWER:
            journal.assign_reviewer(submission.id, cmd.argument, actor)
            reply = f"Reviewer assigned: @{cmd.argument}"
        elif cmd.kind is CommandKind.START_REVIEW:
            updated = journal.start_review(submission.id, cmd.argument, actor)
            reply = f"Review issue opened: {updated.review_issue}"
        elif cmd.kind is CommandKind.SET_ARCHIVE:
            journal.set_archive(submission.id, cmd.argument, actor)
            reply = f"Archive set: {cmd.argument}"
        elif cmd.kind is CommandKind.GENERATE_PDF:
            journal.compile_article(submission.id)
            reply = f"Compiled the article for {submission.title!r}."
        else:
            reply = usage_reply(journal.config.bot_handle)
        return journal.reply(issue, CommandOutcome(OutcomeStatus.APPLIED, reply))
    except Unauthorized as exc:
        return journal.reply(issue, CommandOutcome(OutcomeStatus.REJECTED_UNAUTHORIZED, str(exc)))
    except WrongMagicWord as exc:
        return journal.reply(
            issue,
            CommandOutcome(
                OutcomeStatus.REJECTED_INVALID,
                f"{exc} The magic word is a safeguard against opening a review issue prematurely.",
            ),
        )
    except JournalError as exc:
        return journal.reply(issue, CommandOutcome(OutcomeStatus.REJECTED_INVALID, str(exc)))
