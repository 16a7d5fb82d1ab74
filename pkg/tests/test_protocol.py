import random
import struct

import pytest

from atsu_monitor import protocol
from atsu_monitor.protocol import (
    BadCrc,
    BadMagic,
    BadVersion,
    CompositeStatusMessage,
    FrameError,
    GbasMode,
    GlsApproachStatus,
    InvalidEnum,
    InvalidMessage,
    OutageWindow,
    ReservedBitsSet,
    Truncated,
    crc32,
    decode,
    encode,
    ids_to_mask,
    mask_to_ids,
)
from support import crc32_bitwise, random_message, refresh_crc

BASE = CompositeStatusMessage(
    station_id="GBAS01",
    sequence=7,
    timestamp=1_700_000_000_000,
    mode=GbasMode.NORMAL,
    approach=GlsApproachStatus.AVAILABLE,
)


# ---------------------------------------------------------------------------
# CRC-32
# ---------------------------------------------------------------------------

def test_crc_standard_check_value():
    assert crc32(b"123456789") == 0xCBF43926
    assert crc32_bitwise(b"123456789") == 0xCBF43926


def test_crc_empty_is_zero():
    assert crc32(b"") == 0
    assert crc32_bitwise(b"") == 0


def test_crc_deterministic():
    data = b"\x00\xff GBAS status"
    assert crc32(data) == crc32(data)


def test_crc_matches_bitwise_oracle():
    rng = random.Random(0xC3C)
    for _ in range(200):
        blob = rng.randbytes(rng.randint(0, 128))
        assert crc32(blob) == crc32_bitwise(blob)


# ---------------------------------------------------------------------------
# Encoding layout
# ---------------------------------------------------------------------------

def test_zero_case_layout():
    frame = encode(BASE)
    assert len(frame) == 56
    assert frame[:4] == b"CSM1"
    assert frame[4] == 1
    assert frame[5:13] == b"GBAS01  "
    assert frame[25] == 0 and frame[26] == 0
    assert frame[27:43] == bytes(16)      # no outage window
    assert frame[43:52] == bytes(9)       # no alerts, no alarms
    assert struct.unpack(">I", frame[52:])[0] == crc32_bitwise(frame[:52])


def test_alert_mask_bit_positions():
    import dataclasses
    msg = dataclasses.replace(BASE, alerts=frozenset({1, 35}))
    frame = encode(msg)
    assert struct.unpack(">Q", frame[43:51])[0] == 0x0000000400000001


def test_alarm_mask_bit_positions():
    import dataclasses
    msg = dataclasses.replace(BASE, alarms=frozenset({1, 6}))
    assert encode(msg)[51] == 0b100001


def test_outage_window_layout():
    import dataclasses
    msg = dataclasses.replace(
        BASE,
        approach=GlsApproachStatus.PREDICTED_OUTAGE,
        outage=OutageWindow(BASE.timestamp + 120_000, BASE.timestamp + 300_000),
    )
    frame = encode(msg)
    start, end = struct.unpack(">QQ", frame[27:43])
    assert start == BASE.timestamp + 120_000
    assert end == BASE.timestamp + 300_000


# ---------------------------------------------------------------------------
# Round trip
# ---------------------------------------------------------------------------

def test_round_trip_random_messages():
    rng = random.Random(1)
    for _ in range(1000):
        msg = random_message(rng)
        assert decode(encode(msg)) == msg


def test_round_trip_extreme_values():
    msg = CompositeStatusMessage(
        station_id="12345678",
        sequence=2**32 - 1,
        timestamp=2**64 - 1,
        mode=GbasMode.TEST,
        approach=GlsApproachStatus.NOT_AVAILABLE,
        outage=None,
        alerts=frozenset(range(1, 36)),
        alarms=frozenset(range(1, 7)),
    )
    assert decode(encode(msg)) == msg


# ---------------------------------------------------------------------------
# Decode errors
# ---------------------------------------------------------------------------

def test_truncated():
    frame = encode(BASE)
    for length in (0, 1, 55):
        with pytest.raises(Truncated):
            decode(frame[:length])
    with pytest.raises(Truncated):
        decode(frame + b"\x00")


def test_bad_magic():
    frame = bytearray(encode(BASE))
    frame[0] ^= 0xFF
    with pytest.raises(BadMagic):
        decode(refresh_crc(frame))


def test_bad_version():
    frame = bytearray(encode(BASE))
    frame[4] = 2
    with pytest.raises(BadVersion):
        decode(refresh_crc(frame))


def test_bad_crc():
    frame = bytearray(encode(BASE))
    frame[52] ^= 0xFF
    with pytest.raises(BadCrc):
        decode(bytes(frame))


def test_invalid_mode_enum():
    frame = bytearray(encode(BASE))
    frame[25] = 3
    with pytest.raises(InvalidEnum, match="mode"):
        decode(refresh_crc(frame))


def test_invalid_approach_enum():
    frame = bytearray(encode(BASE))
    frame[26] = 3
    with pytest.raises(InvalidEnum, match="approach"):
        decode(refresh_crc(frame))


def test_reserved_alert_bits():
    frame = bytearray(encode(BASE))
    frame[43] = 0x80  # alert bit 63
    with pytest.raises(ReservedBitsSet):
        decode(refresh_crc(frame))


def test_reserved_alarm_bits():
    frame = bytearray(encode(BASE))
    frame[51] = 0x40  # alarm bit 6
    with pytest.raises(ReservedBitsSet):
        decode(refresh_crc(frame))


def test_predicted_outage_without_window():
    frame = bytearray(encode(BASE))
    frame[26] = GlsApproachStatus.PREDICTED_OUTAGE
    with pytest.raises(InvalidMessage, match="outage"):
        decode(refresh_crc(frame))


def test_half_present_window():
    frame = bytearray(encode(BASE))
    frame[27:35] = struct.pack(">Q", BASE.timestamp + 1)
    with pytest.raises(InvalidMessage, match="half-present"):
        decode(refresh_crc(frame))


def test_window_end_before_start():
    frame = bytearray(encode(BASE))
    frame[27:35] = struct.pack(">Q", 2000)
    frame[35:43] = struct.pack(">Q", 1000)
    with pytest.raises(InvalidMessage, match="after start"):
        decode(refresh_crc(frame))


def test_not_available_with_expired_window():
    frame = bytearray(encode(BASE))
    frame[26] = GlsApproachStatus.NOT_AVAILABLE
    frame[27:35] = struct.pack(">Q", 1000)
    frame[35:43] = struct.pack(">Q", 2000)  # both before BASE.timestamp
    with pytest.raises(InvalidMessage, match="after the message timestamp"):
        decode(refresh_crc(frame))


def test_non_printable_station_id():
    frame = bytearray(encode(BASE))
    frame[5] = 0x07
    with pytest.raises(InvalidMessage, match="station_id"):
        decode(refresh_crc(frame))


# ---------------------------------------------------------------------------
# Tamper evidence and totality
# ---------------------------------------------------------------------------

def test_every_single_bit_flip_is_rejected():
    frame = encode(random_message(random.Random(2)))
    for bit in range(56 * 8):
        flipped = bytearray(frame)
        flipped[bit // 8] ^= 1 << (bit % 8)
        with pytest.raises(FrameError):
            decode(bytes(flipped))


def test_decode_is_total_on_arbitrary_input():
    rng = random.Random(3)
    for _ in range(2000):
        blob = rng.randbytes(56)
        try:
            decode(blob)
        except FrameError:
            pass
    for _ in range(200):
        blob = rng.randbytes(rng.randint(0, 65536))
        try:
            decode(blob)
        except FrameError:
            pass


# ---------------------------------------------------------------------------
# Bitmask bijection
# ---------------------------------------------------------------------------

def test_alarm_mask_bijection_exhaustive():
    for mask in range(64):
        assert ids_to_mask(mask_to_ids(mask)) == mask
    import itertools
    for r in range(7):
        for subset in itertools.combinations(range(1, 7), r):
            ids = frozenset(subset)
            assert mask_to_ids(ids_to_mask(ids)) == ids


def test_alert_mask_bijection_random():
    rng = random.Random(4)
    for _ in range(1000):
        ids = frozenset(rng.sample(range(1, 36), rng.randint(0, 35)))
        assert mask_to_ids(ids_to_mask(ids)) == ids


# ---------------------------------------------------------------------------
# Encode-side validation
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("bad", ["", "NINECHARS", "ends ", "naïve", "a\tb"])
def test_encode_rejects_bad_station_ids(bad):
    import dataclasses
    with pytest.raises(InvalidMessage, match="station_id"):
        encode(dataclasses.replace(BASE, station_id=bad))


def test_encode_rejects_out_of_range_ids():
    import dataclasses
    with pytest.raises(InvalidMessage, match="alerts"):
        encode(dataclasses.replace(BASE, alerts=frozenset({36})))
    with pytest.raises(InvalidMessage, match="alarms"):
        encode(dataclasses.replace(BASE, alarms=frozenset({7})))


def test_encode_rejects_sequence_overflow():
    import dataclasses
    with pytest.raises(InvalidMessage, match="sequence"):
        encode(dataclasses.replace(BASE, sequence=2**32))


def test_encode_rejects_inconsistent_outage():
    import dataclasses
    with pytest.raises(InvalidMessage):
        encode(dataclasses.replace(BASE, approach=GlsApproachStatus.PREDICTED_OUTAGE))
    stale = OutageWindow(BASE.timestamp - 2000, BASE.timestamp - 1000)
    with pytest.raises(InvalidMessage):
        encode(dataclasses.replace(
            BASE, approach=GlsApproachStatus.NOT_AVAILABLE, outage=stale))


# ---------------------------------------------------------------------------
# JSON text form
# ---------------------------------------------------------------------------

def test_json_form_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        msg = random_message(rng)
        assert protocol.message_from_dict(protocol.message_to_dict(msg)) == msg


def test_json_form_field_names():
    d = protocol.message_to_dict(BASE)
    assert set(d) == {"station_id", "sequence", "timestamp", "mode", "approach",
                      "outage", "alerts", "alarms"}
    assert d["mode"] == "NORMAL"
    assert isinstance(d["timestamp"], int)
