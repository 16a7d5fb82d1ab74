"""Display state machine for the air traffic status monitor.

Turns a stream of (status message, clock) observations into a render-ready
DisplayState: panel colors, the message block, outage countdowns, the UTC
clock, and the active alert/alarm lists. All timing comes from the caller's
clock; nothing here reads wall time, so every path is replayable.

Color semantics:
  GREEN  normal operation / approaches available
  YELLOW approaches will soon be unavailable (predicted outage)
  RED    approaches not permitted
  GREY   no data from the station (and only then)
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .catalog import Catalog
from .protocol import CompositeStatusMessage, GbasMode, GlsApproachStatus

DEFAULT_STALE_AFTER_S = 5.0
CLOCK_SKEW_WARN_S = 10.0
COUNTDOWN_SATURATION_S = 100 * 3600  # display caps the hour field at 99

# Sequence comparisons use serial-number arithmetic over a u32 counter:
# anything within half the number space ahead of the last value is newer.
SEQUENCE_BITS = 32


class PanelColor(str, Enum):
    GREEN = "GREEN"
    YELLOW = "YELLOW"
    RED = "RED"
    GREY = "GREY"


class Connectivity(str, Enum):
    CONNECTED = "CONNECTED"
    NO_DATA = "NO_DATA"


class CountdownKind(str, Enum):
    TO_OUTAGE_START = "TO_OUTAGE_START"
    TO_SERVICE_RETURN = "TO_SERVICE_RETURN"


@dataclass(frozen=True)
class Panel:
    label: str
    color: PanelColor


@dataclass(frozen=True)
class Countdown:
    kind: CountdownKind
    target: int      # ms since epoch
    remaining: int   # whole seconds, clamped at 0


@dataclass(frozen=True)
class DisplayState:
    connectivity: Connectivity
    mode_panel: Panel
    approach_panel: Panel
    message_block: Optional[Panel]
    countdown: Optional[Countdown]
    utc_clock: int   # ms since epoch, from the injected clock
    active_alerts: tuple[tuple[int, str], ...]
    active_alarms: tuple[tuple[int, str], ...]
    station_id: str
    last_sequence: int


class PanelSet(NamedTuple):
    mode_panel: Panel
    approach_panel: Panel
    message_block: Optional[Panel]


_MODE_LABELS = {
    GbasMode.NORMAL: "NORMAL",
    GbasMode.ALARM: "ALARM",
    GbasMode.TEST: "TEST",
}
_APPROACH_LABELS = {
    GlsApproachStatus.AVAILABLE: "AVAILABLE",
    GlsApproachStatus.PREDICTED_OUTAGE: "PREDICTED OUTAGE",
    GlsApproachStatus.NOT_AVAILABLE: "NOT AVAILABLE",
}

_NO_DATA_PANEL = Panel("NO DATA", PanelColor.GREY)


def normalize(msg: CompositeStatusMessage) -> tuple[CompositeStatusMessage, list[str]]:
    """Force approach to NOT_AVAILABLE under ALARM or TEST mode.

    The station only ever pairs those modes with an unavailable approach;
    a denormalized frame is repaired with a diagnostic rather than dropped,
    because a monitor should degrade gracefully. Idempotent.
    """
    if msg.mode in (GbasMode.ALARM, GbasMode.TEST) \
            and msg.approach is not GlsApproachStatus.NOT_AVAILABLE:
        fixed = dataclasses.replace(msg, approach=GlsApproachStatus.NOT_AVAILABLE)
        diag = (f"approach {msg.approach.name} rewritten to NOT_AVAILABLE"
                f" under mode {msg.mode.name} (seq {msg.sequence})")
        return fixed, [diag]
    return msg, []


def render_panels(connectivity: Connectivity, mode: GbasMode,
                  approach: GlsApproachStatus) -> PanelSet:
    """Total mapping from (connectivity, mode, approach) to the three
    display regions. Mode and approach are ignored when there is no data;
    denormalized pairs are rendered as if normalized, so the function never
    fails on any of the 2x3x3 inputs.
    """
    if connectivity is Connectivity.NO_DATA:
        return PanelSet(_NO_DATA_PANEL, _NO_DATA_PANEL, _NO_DATA_PANEL)

    if mode in (GbasMode.ALARM, GbasMode.TEST):
        approach = GlsApproachStatus.NOT_AVAILABLE

    mode_color = PanelColor.GREEN if mode is GbasMode.NORMAL else PanelColor.RED
    mode_panel = Panel(_MODE_LABELS[mode], mode_color)

    if approach is GlsApproachStatus.AVAILABLE:
        return PanelSet(mode_panel, Panel("AVAILABLE", PanelColor.GREEN), None)
    if approach is GlsApproachStatus.PREDICTED_OUTAGE:
        return PanelSet(
            mode_panel,
            Panel("PREDICTED OUTAGE", PanelColor.YELLOW),
            Panel("PREDICTED OUTAGE", PanelColor.YELLOW),
        )
    # NOT AVAILABLE: approaches are not permitted; under TEST the approach
    # panel shows yellow while the message block stays red.
    approach_color = PanelColor.YELLOW if mode is GbasMode.TEST else PanelColor.RED
    return PanelSet(
        mode_panel,
        Panel("NOT AVAILABLE", approach_color),
        Panel("NOT AVAILABLE", PanelColor.RED),
    )


def format_countdown(remaining_s: int) -> str:
    """HH:MM:SS, zero-padded; the hour field saturates at 99."""
    if remaining_s < 0:
        raise ValueError(f"remaining must be >= 0, got {remaining_s}")
    hours = min(remaining_s // 3600, 99)
    return f"{hours:02d}:{remaining_s % 3600 // 60:02d}:{remaining_s % 60:02d}"


def seq_is_newer(new: int, old: int, bits: int = SEQUENCE_BITS) -> bool:
    """True when `new` follows `old` in serial-number arithmetic: ahead by
    at least 1 and less than half the counter space, wrapping at 2**bits."""
    diff = (new - old) % (1 << bits)
    return 0 < diff < 1 << (bits - 1)


class MonitorCore:
    """Accumulates validated, normalized status messages and renders
    DisplayState snapshots on demand.

    Single-writer: apply_message mutates; tick only reads and returns an
    immutable snapshot safe to hand to any number of readers.
    """

    def __init__(self, catalog: Catalog, stale_after_s: float = DEFAULT_STALE_AFTER_S,
                 skew_warn_s: float = CLOCK_SKEW_WARN_S):
        self.catalog = catalog
        self.stale_after_ms = int(stale_after_s * 1000)
        self.skew_warn_ms = int(skew_warn_s * 1000)
        self.last_msg: Optional[CompositeStatusMessage] = None
        self.last_receipt_ms: Optional[int] = None
        self.out_of_order = 0

    def apply_message(self, msg: CompositeStatusMessage, now_ms: int) -> list[str]:
        """Record a normalized message received at now_ms.

        Out-of-order sequences (not newer within the 2**31 window) bump a
        counter and leave the rest of the state untouched, including the
        last-receipt instant. Returns diagnostics, never raises.
        """
        diags = []
        if self.last_msg is not None and not seq_is_newer(msg.sequence, self.last_msg.sequence):
            self.out_of_order += 1
            return [f"out-of-order sequence {msg.sequence} after {self.last_msg.sequence}"]
        skew = abs(msg.timestamp - now_ms)
        if skew > self.skew_warn_ms:
            diags.append(
                f"clock skew: message timestamp {msg.timestamp} differs from"
                f" local clock {now_ms} by {skew} ms")
        self.last_msg = msg
        self.last_receipt_ms = now_ms
        return diags

    def connectivity(self, now_ms: int) -> Connectivity:
        if self.last_receipt_ms is None or now_ms - self.last_receipt_ms > self.stale_after_ms:
            return Connectivity.NO_DATA
        return Connectivity.CONNECTED

    def tick(self, now_ms: int) -> DisplayState:
        """Render the state as of now_ms.

        The countdown targets the outage start while one is predicted and
        the outage end while service is out; after the target passes it
        stays displayed at zero until the next message changes the status.
        With no data the whole display goes grey: no countdown, no active
        alert/alarm lists, only the last-known station identity.
        """
        conn = self.connectivity(now_ms)
        msg = self.last_msg
        station_id = msg.station_id if msg else ""
        last_sequence = msg.sequence if msg else 0

        if conn is Connectivity.NO_DATA or msg is None:
            panels = render_panels(Connectivity.NO_DATA, GbasMode.NORMAL,
                                   GlsApproachStatus.AVAILABLE)
            return DisplayState(
                connectivity=Connectivity.NO_DATA,
                mode_panel=panels.mode_panel,
                approach_panel=panels.approach_panel,
                message_block=panels.message_block,
                countdown=None,
                utc_clock=now_ms,
                active_alerts=(),
                active_alarms=(),
                station_id=station_id,
                last_sequence=last_sequence,
            )

        panels = render_panels(conn, msg.mode, msg.approach)
        countdown = None
        if msg.outage is not None:
            if msg.approach is GlsApproachStatus.PREDICTED_OUTAGE:
                countdown = self._countdown(CountdownKind.TO_OUTAGE_START,
                                            msg.outage.start, now_ms)
            elif msg.approach is GlsApproachStatus.NOT_AVAILABLE:
                countdown = self._countdown(CountdownKind.TO_SERVICE_RETURN,
                                            msg.outage.end, now_ms)

        return DisplayState(
            connectivity=conn,
            mode_panel=panels.mode_panel,
            approach_panel=panels.approach_panel,
            message_block=panels.message_block,
            countdown=countdown,
            utc_clock=now_ms,
            active_alerts=self._described(msg.alerts, self.catalog.alerts),
            active_alarms=self._described(msg.alarms, self.catalog.alarms),
            station_id=station_id,
            last_sequence=last_sequence,
        )

    @staticmethod
    def _countdown(kind: CountdownKind, target_ms: int, now_ms: int) -> Countdown:
        remaining = max(0, target_ms - now_ms) // 1000
        return Countdown(kind=kind, target=target_ms, remaining=remaining)

    @staticmethod
    def _described(ids: frozenset[int], table: dict[int, str]) -> tuple[tuple[int, str], ...]:
        return tuple((i, table[i]) for i in sorted(ids))


def display_state_to_dict(ds: DisplayState) -> dict:
    """JSON-ready form served over HTTP and pushed on the event stream."""
    countdown = None
    if ds.countdown is not None:
        countdown = {
            "kind": ds.countdown.kind.value,
            "target": ds.countdown.target,
            "remaining": ds.countdown.remaining,
            "text": format_countdown(ds.countdown.remaining),
        }
    return {
        "connectivity": ds.connectivity.value,
        "mode_panel": {"label": ds.mode_panel.label, "color": ds.mode_panel.color.value},
        "approach_panel": {"label": ds.approach_panel.label,
                           "color": ds.approach_panel.color.value},
        "message_block": None if ds.message_block is None else
                         {"text": ds.message_block.label,
                          "color": ds.message_block.color.value},
        "countdown": countdown,
        "utc_clock": ds.utc_clock,
        "active_alerts": [{"id": i, "description": d} for i, d in ds.active_alerts],
        "active_alarms": [{"id": i, "description": d} for i, d in ds.active_alarms],
        "station_id": ds.station_id,
        "last_sequence": ds.last_sequence,
    }
