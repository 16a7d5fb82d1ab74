"""Shared test helpers: independent oracles and generators.

crc32_bitwise is a from-scratch bit-by-bit CRC-32 kept deliberately
separate from the implementation under test. random_message produces
messages that satisfy every protocol invariant, across all mode/approach
and outage combinations.
"""

from __future__ import annotations

import random
import struct

from atsu_monitor.protocol import (
    CompositeStatusMessage,
    GbasMode,
    GlsApproachStatus,
    OutageWindow,
    crc32,
)

_PRINTABLE = [chr(c) for c in range(0x20, 0x7F)]
_PRINTABLE_NO_SPACE = _PRINTABLE[1:]


def crc32_bitwise(data: bytes) -> int:
    """Reference CRC-32 (reflected 0xEDB88320, init/xorout 0xFFFFFFFF),
    one bit at a time."""
    crc = 0xFFFFFFFF
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = (crc >> 1) ^ 0xEDB88320 if crc & 1 else crc >> 1
    return crc ^ 0xFFFFFFFF


def random_station_id(rng: random.Random) -> str:
    n = rng.randint(1, 8)
    head = "".join(rng.choice(_PRINTABLE) for _ in range(n - 1))
    return head + rng.choice(_PRINTABLE_NO_SPACE)


def random_message(rng: random.Random) -> CompositeStatusMessage:
    ts = rng.randrange(1, 1 << 48)
    mode = rng.choice(list(GbasMode))
    approach = rng.choice(list(GlsApproachStatus))
    outage = None
    if approach is GlsApproachStatus.PREDICTED_OUTAGE:
        start = ts + rng.randrange(1, 10_000_000)
        outage = OutageWindow(start, start + rng.randrange(1, 10_000_000))
    elif approach is GlsApproachStatus.NOT_AVAILABLE and rng.random() < 0.7:
        end = ts + rng.randrange(2, 10_000_000)
        outage = OutageWindow(rng.randrange(1, end), end)
    elif approach is GlsApproachStatus.AVAILABLE and rng.random() < 0.3:
        start = rng.randrange(1, 1 << 40)
        outage = OutageWindow(start, start + rng.randrange(1, 10_000_000))
    return CompositeStatusMessage(
        station_id=random_station_id(rng),
        sequence=rng.randrange(0, 1 << 32),
        timestamp=ts,
        mode=mode,
        approach=approach,
        outage=outage,
        alerts=frozenset(rng.sample(range(1, 36), rng.randint(0, 35))),
        alarms=frozenset(rng.sample(range(1, 7), rng.randint(0, 6))),
    )


def refresh_crc(frame: bytes | bytearray) -> bytes:
    """Recompute the CRC over bytes 0..51 so tampered test vectors fail on
    the field check under scrutiny instead of on the CRC."""
    body = bytes(frame[:52])
    return body + struct.pack(">I", crc32(body))
