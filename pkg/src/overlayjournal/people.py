"""People, roles, and the deployment-wide person registry.

Forge handles are case-insensitive for lookup but preserved as typed for
display, mirroring how code forges treat usernames.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidField, UnknownActor


class Role(str, Enum):
    AUTHOR = "author"
    REVIEWER = "reviewer"
    EDITOR = "editor"
    EDITOR_IN_CHIEF = "editor-in-chief"
    ADMIN = "admin"


#: Roles allowed to drive editorial operations (assignments, review start, archive).
EDITORIAL_ROLES = frozenset({Role.EDITOR, Role.EDITOR_IN_CHIEF, Role.ADMIN})

#: Roles allowed to accept and publish.
ACCEPTANCE_ROLES = frozenset({Role.EDITOR_IN_CHIEF, Role.ADMIN})


@dataclass(frozen=True)
class PersonRef:
    """A person identified by their forge handle."""

    handle: str
    role: Role = Role.AUTHOR
    display_name: str | None = None

    def __post_init__(self):
        if not self.handle or any(c.isspace() for c in self.handle):
            raise InvalidField(f"invalid handle: {self.handle!r}")

    @property
    def key(self) -> str:
        """Case-insensitive lookup key."""
        return self.handle.casefold()

    def to_dict(self) -> dict:
        d = {"handle": self.handle, "role": self.role.value}
        if self.display_name is not None:
            d["display_name"] = self.display_name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PersonRef":
        return cls(
            handle=d["handle"],
            role=Role(d.get("role", Role.AUTHOR.value)),
            display_name=d.get("display_name"),
        )


class PersonRegistry:
    """Handle -> person map; handles are unique per deployment."""

    def __init__(self, people: list[PersonRef] | None = None):
        self._by_key: dict[str, PersonRef] = {}
        for person in people or []:
            self.add(person)

    def add(self, person: PersonRef) -> PersonRef:
        if person.key in self._by_key:
            raise InvalidField(f"handle already registered: {person.handle}")
        self._by_key[person.key] = person
        return person

    def ensure(self, person: PersonRef) -> PersonRef:
        """Register the person if their handle is new; keep the existing entry otherwise."""
        return self._by_key.setdefault(person.key, person)

    def get(self, handle: str) -> PersonRef | None:
        return self._by_key.get(handle.casefold())

    def resolve(self, handle: str) -> PersonRef:
        person = self.get(handle)
        if person is None:
            raise UnknownActor(f"handle not registered: @{handle}")
        return person

    def __contains__(self, handle: str) -> bool:
        return handle.casefold() in self._by_key

    def __iter__(self):
        return iter(self._by_key.values())

    def __len__(self) -> int:
        return len(self._by_key)
