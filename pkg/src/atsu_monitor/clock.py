"""Clock abstraction so every time-dependent path is testable.

All timestamps in this project are integer milliseconds since the Unix
epoch (UTC). Production code uses SystemClock; tests inject ManualClock
and advance it explicitly, which makes staleness windows, countdowns and
emission schedules exactly reproducible.
"""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now_ms(self) -> int:
        """Current UTC time in whole milliseconds since the epoch."""
        ...


class SystemClock:
    """Wall-clock time from the OS."""

    def now_ms(self) -> int:
        return int(time.time() * 1000)


class ManualClock:
    """Test clock advanced by hand; never moves on its own."""

    def __init__(self, start_ms: int = 0):
        self._now = int(start_ms)

    def now_ms(self) -> int:
        return self._now

    def advance(self, ms: int) -> int:
        if ms < 0:
            raise ValueError(f"cannot advance clock by {ms} ms")
        self._now += int(ms)
        return self._now

    def set(self, ms: int) -> int:
        self._now = int(ms)
        return self._now
