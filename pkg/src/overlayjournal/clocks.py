"""Injectable clocks so lifecycle timestamps are deterministic under test."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Protocol


class Clock(Protocol):
    def now(self) -> datetime:
        """Current UTC time."""
        ...


class SystemClock:
    """Wall-clock time in UTC."""

    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class TickClock:
    """Deterministic clock that advances a fixed step on every call."""

    def __init__(self, start: datetime | None = None, step_seconds: float = 1.0):
        self._current = start or datetime(2020, 1, 1, tzinfo=timezone.utc)
        if self._current.tzinfo is None:
            self._current = self._current.replace(tzinfo=timezone.utc)
        self._step = timedelta(seconds=step_seconds)

    def now(self) -> datetime:
        value = self._current
        self._current = value + self._step
        return value


SYSTEM_CLOCK = SystemClock()
