"""Composite Status Message (CSM) domain model and wire codec.

A CSM carries everything the status monitor displays: station identity,
operating mode, approach availability, an optional outage window, and the
active service-alert / alarm sets. Frames travel over UDP, so the codec is
fixed-size and integrity-checked.

Wire frame — exactly 56 bytes, all multi-byte integers big-endian:

  offset  size  field
  ------  ----  -----
   0       4    magic "CSM1"
   4       1    version (1)
   5       8    station id, ASCII, space-padded on the right
  13       4    sequence (u32)
  17       8    timestamp, ms since Unix epoch (u64)
  25       1    mode code       (0 NORMAL, 1 ALARM, 2 TEST)
  26       1    approach code   (0 AVAILABLE, 1 PREDICTED_OUTAGE, 2 NOT_AVAILABLE)
  27       8    outage start ms (u64, 0 = no window)
  35       8    outage end ms   (u64, 0 = no window)
  43       8    alert bitmask   (bit k-1 set <=> alert k active; bits 35..63 reserved)
  51       1    alarm bitmask   (bit k-1 set <=> alarm k active; bits 6..7 reserved)
  52       4    CRC-32 (IEEE) over bytes 0..51

decode() is total: any byte input yields either a message or a typed
FrameError naming the offending offset or field, never an unhandled crash.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

MAGIC = b"CSM1"
VERSION = 1
FRAME_LEN = 56

ALERT_ID_RANGE = range(1, 36)  # 35 service alerts
ALARM_ID_RANGE = range(1, 7)   # 6 alarms

_BODY_FMT = ">4sB8sIQBBQQQB"  # bytes 0..51
_CRC_FMT = ">I"

_U32_MAX = 2**32 - 1
_U64_MAX = 2**64 - 1


class GbasMode(IntEnum):
    NORMAL = 0
    ALARM = 1
    TEST = 2


class GlsApproachStatus(IntEnum):
    AVAILABLE = 0
    PREDICTED_OUTAGE = 1
    NOT_AVAILABLE = 2


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class FrameError(ValueError):
    """Base for every decode failure; str(err) names the offset or field."""


class Truncated(FrameError):
    pass


class BadMagic(FrameError):
    pass


class BadVersion(FrameError):
    pass


class BadCrc(FrameError):
    pass


class InvalidEnum(FrameError):
    pass


class ReservedBitsSet(FrameError):
    pass


class InvalidMessage(FrameError):
    """A semantic invariant is violated (raised by encode and decode)."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OutageWindow:
    """Predicted/actual outage bounds, ms since epoch. 0 is reserved as the
    on-wire absence marker, so both instants must be positive."""

    start: int
    end: int


@dataclass(frozen=True)
class CompositeStatusMessage:
    station_id: str
    sequence: int
    timestamp: int
    mode: GbasMode
    approach: GlsApproachStatus
    outage: Optional[OutageWindow] = None
    alerts: frozenset[int] = frozenset()
    alarms: frozenset[int] = frozenset()


def crc32(data: bytes) -> int:
    """CRC-32 (IEEE 802.3 / ISO-HDLC): reflected, init and final xor
    0xFFFFFFFF. zlib implements exactly this parameterization."""
    return zlib.crc32(data) & 0xFFFFFFFF


# ---------------------------------------------------------------------------
# Validation shared by encode and decode
# ---------------------------------------------------------------------------

def _is_printable_ascii(s: str) -> bool:
    return all(0x20 <= ord(c) <= 0x7E for c in s)


def validate_message(msg: CompositeStatusMessage) -> None:
    """Raise InvalidMessage naming the first field that breaks an invariant.

    station_id must not end in a space: the wire pads with spaces, so a
    trailing space would not survive a round trip.
    """
    sid = msg.station_id
    if not sid:
        raise InvalidMessage("station_id", "must not be empty")
    if len(sid) > 8:
        raise InvalidMessage("station_id", f"{len(sid)} chars, max 8")
    if not _is_printable_ascii(sid):
        raise InvalidMessage("station_id", "contains non-printable or non-ASCII characters")
    if sid.endswith(" "):
        raise InvalidMessage("station_id", "trailing space is not representable")

    if not 0 <= msg.sequence <= _U32_MAX:
        raise InvalidMessage("sequence", f"{msg.sequence} outside u32 range")
    if not 0 <= msg.timestamp <= _U64_MAX:
        raise InvalidMessage("timestamp", f"{msg.timestamp} outside u64 range")

    if msg.outage is not None:
        w = msg.outage
        if w.start <= 0 or w.end <= 0:
            raise InvalidMessage("outage", "start and end must be positive (0 marks absence)")
        if w.end > _U64_MAX or w.start > _U64_MAX:
            raise InvalidMessage("outage", "instant outside u64 range")
        if w.end <= w.start:
            raise InvalidMessage("outage", f"end {w.end} must be after start {w.start}")

    bad_alerts = sorted(a for a in msg.alerts if a not in ALERT_ID_RANGE)
    if bad_alerts:
        raise InvalidMessage("alerts", f"ids outside 1..35: {bad_alerts}")
    bad_alarms = sorted(a for a in msg.alarms if a not in ALARM_ID_RANGE)
    if bad_alarms:
        raise InvalidMessage("alarms", f"ids outside 1..6: {bad_alarms}")

    if msg.approach is GlsApproachStatus.PREDICTED_OUTAGE:
        if msg.outage is None:
            raise InvalidMessage("outage", "PREDICTED_OUTAGE requires an outage window")
        if msg.outage.start <= msg.timestamp:
            raise InvalidMessage(
                "outage", "PREDICTED_OUTAGE start must be after the message timestamp")
    if msg.approach is GlsApproachStatus.NOT_AVAILABLE and msg.outage is not None:
        if msg.outage.end <= msg.timestamp:
            raise InvalidMessage(
                "outage", "NOT_AVAILABLE window end must be after the message timestamp")


# ---------------------------------------------------------------------------
# Bitmask helpers
# ---------------------------------------------------------------------------

def ids_to_mask(ids: frozenset[int] | set[int]) -> int:
    mask = 0
    for k in ids:
        mask |= 1 << (k - 1)
    return mask


def mask_to_ids(mask: int) -> frozenset[int]:
    return frozenset(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


# ---------------------------------------------------------------------------
# Codec
# ---------------------------------------------------------------------------

def encode(msg: CompositeStatusMessage) -> bytes:
    """Encode a validated message into a 56-byte frame. CRC goes in last,
    covering bytes 0..51."""
    validate_message(msg)
    start = msg.outage.start if msg.outage else 0
    end = msg.outage.end if msg.outage else 0
    body = struct.pack(
        _BODY_FMT,
        MAGIC,
        VERSION,
        msg.station_id.ljust(8).encode("ascii"),
        msg.sequence,
        msg.timestamp,
        int(msg.mode),
        int(msg.approach),
        start,
        end,
        ids_to_mask(msg.alerts),
        ids_to_mask(msg.alarms),
    )
    return body + struct.pack(_CRC_FMT, crc32(body))


def decode(frame: bytes) -> CompositeStatusMessage:
    """Decode arbitrary bytes; exact inverse of encode on valid frames.

    Check order: length, magic, version, CRC, enum ranges, reserved bits,
    then semantic validation. CRC runs before the field checks, so a frame
    that fails an enum or semantic check is known to be intact (useful when
    diagnosing a misbehaving sender rather than a corrupt link).
    """
    if len(frame) != FRAME_LEN:
        raise Truncated(f"frame is {len(frame)} bytes, expected {FRAME_LEN}")
    (magic, version, sid_raw, sequence, timestamp, mode_code, approach_code,
     start, end, alert_mask, alarm_mask) = struct.unpack(_BODY_FMT, frame[:52])
    (stored_crc,) = struct.unpack(_CRC_FMT, frame[52:])

    if magic != MAGIC:
        raise BadMagic(f"bytes 0..3 are {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise BadVersion(f"byte 4 is {version}, expected {VERSION}")
    actual_crc = crc32(frame[:52])
    if stored_crc != actual_crc:
        raise BadCrc(f"bytes 52..55 hold 0x{stored_crc:08X}, computed 0x{actual_crc:08X}")
    if mode_code > 2:
        raise InvalidEnum(f"mode code {mode_code} at byte 25, expected 0..2")
    if approach_code > 2:
        raise InvalidEnum(f"approach code {approach_code} at byte 26, expected 0..2")
    if alert_mask >> 35:
        raise ReservedBitsSet(f"alert mask bits 35..63 set at bytes 43..50: 0x{alert_mask:016X}")
    if alarm_mask >> 6:
        raise ReservedBitsSet(f"alarm mask bits 6..7 set at byte 51: 0x{alarm_mask:02X}")

    try:
        station_id = sid_raw.decode("ascii")
    except UnicodeDecodeError:
        raise InvalidMessage("station_id", f"non-ASCII bytes at 5..12: {sid_raw!r}") from None
    station_id = station_id.rstrip(" ")

    if (start == 0) != (end == 0):
        raise InvalidMessage("outage", f"half-present window: start={start} end={end}")
    outage = OutageWindow(start, end) if start else None

    msg = CompositeStatusMessage(
        station_id=station_id,
        sequence=sequence,
        timestamp=timestamp,
        mode=GbasMode(mode_code),
        approach=GlsApproachStatus(approach_code),
        outage=outage,
        alerts=mask_to_ids(alert_mask),
        alarms=mask_to_ids(alarm_mask),
    )
    validate_message(msg)
    return msg


# ---------------------------------------------------------------------------
# JSON text form (logs and the HTTP API)
# ---------------------------------------------------------------------------

def message_to_dict(msg: CompositeStatusMessage) -> dict:
    return {
        "station_id": msg.station_id,
        "sequence": msg.sequence,
        "timestamp": msg.timestamp,
        "mode": msg.mode.name,
        "approach": msg.approach.name,
        "outage": {"start": msg.outage.start, "end": msg.outage.end} if msg.outage else None,
        "alerts": sorted(msg.alerts),
        "alarms": sorted(msg.alarms),
    }


def message_from_dict(obj: dict) -> CompositeStatusMessage:
    outage = obj.get("outage")
    msg = CompositeStatusMessage(
        station_id=obj["station_id"],
        sequence=obj["sequence"],
        timestamp=obj["timestamp"],
        mode=GbasMode[obj["mode"]],
        approach=GlsApproachStatus[obj["approach"]],
        outage=OutageWindow(outage["start"], outage["end"]) if outage else None,
        alerts=frozenset(obj["alerts"]),
        alarms=frozenset(obj["alarms"]),
    )
    validate_message(msg)
    return msg


def message_to_json(msg: CompositeStatusMessage) -> str:
    return json.dumps(message_to_dict(msg), sort_keys=True)
