"""Exception hierarchy shared by all journal modules."""


class JournalError(Exception):
    """Base class for every error raised by this package."""


# -- intake / field validation -------------------------------------------------

class InvalidField(JournalError):
    """A submission field failed syntactic validation; nothing was persisted."""


class UnknownSubmission(JournalError):
    """No submission with the given id exists."""


# -- lifecycle -----------------------------------------------------------------

class IllegalTransition(JournalError):
    """The operation is not permitted from the submission's current state."""


class Unauthorized(JournalError):
    """The acting person lacks the role required for this operation."""


class DuplicateReviewer(JournalError):
    """The reviewer is already assigned to this submission."""


class EditorReviewerConflict(JournalError):
    """The same person cannot act as both editor and reviewer."""


class MissingEditor(JournalError):
    """The operation requires an assigned editor."""


class MissingReviewer(JournalError):
    """The operation requires at least one assigned reviewer."""


class WrongMagicWord(JournalError):
    """The start-review safeguard token did not match the configured one."""


class MissingArchive(JournalError):
    """Acceptance requires an archive DOI to be set first."""


class ChecklistIncomplete(JournalError):
    """Acceptance requires every reviewer checklist to be complete."""


# -- identifiers ---------------------------------------------------------------

class InvalidDoi(JournalError):
    """The text is not a syntactically valid DOI."""


class SequenceOverflow(JournalError):
    """The sequence number exceeds the five-digit DOI suffix width."""


# -- forge ---------------------------------------------------------------------

class ForgeUnavailable(JournalError):
    """The forge rejected or could not perform the operation."""


class IssueClosedError(JournalError):
    """The target issue is closed (or already closed)."""


class MalformedPayload(JournalError):
    """A webhook payload is missing fields or has invalid values."""


# -- command protocol ----------------------------------------------------------

class MalformedCommand(JournalError):
    """Text addresses the bot but matches no command production."""


class UnknownActor(JournalError):
    """The acting handle is not registered; treated as unauthorized."""


# -- checklists ----------------------------------------------------------------

class UnknownItem(JournalError):
    """The item id does not exist in the checklist template."""


class MissingItem(JournalError):
    """A rendered checklist body lacks a line for a template item."""


# -- manuscripts ---------------------------------------------------------------

class NoMetadataBlock(JournalError):
    """The manuscript has no leading ``---``-delimited metadata block."""


class MetadataSyntax(JournalError):
    """The metadata block is not valid key/value syntax."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvariantViolation(JournalError):
    """Parsed metadata violates a manuscript invariant (e.g. zero authors)."""


class BlockingViolation(JournalError):
    """The manuscript has blocking validation violations; cannot build a deposit."""


# -- analytics -----------------------------------------------------------------

class EmptyInput(JournalError):
    """The statistics operation needs at least one record."""
