"""Ground-station stand-in: emits Composite Status Messages on a schedule.

The simulator is a pure state machine driven by an injected clock, so the
same scenario under the same clock produces a byte-identical frame stream.
Two control surfaces mutate it: timed events from a scenario script, and
live operator commands mirroring the console buttons (NORMAL / ALARM /
TEST / OUTAGE / RESET). Networking lives in sim_server; nothing here does
I/O.

Approach status is derived, in precedence order, from: mode (ALARM and
TEST always report NOT AVAILABLE), then a scheduled outage window
(predicted before its start, out until its end, cleared afterwards), then
an explicit SET_APPROACH override, then the AVAILABLE default. The derived
frame always satisfies the protocol invariants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .protocol import (
    ALARM_ID_RANGE,
    ALERT_ID_RANGE,
    CompositeStatusMessage,
    GbasMode,
    GlsApproachStatus,
    OutageWindow,
)

DEFAULT_RATE_HZ = 1.0
DEFAULT_STATION_ID = "GBAS01"
OUTAGE_LEAD_MS = 120_000        # operator-commanded outage starts 2 min out
DEFAULT_OUTAGE_DURATION_MS = 180_000

CONTROL_COMMANDS = ("NORMAL", "ALARM", "TEST", "OUTAGE", "RESET")

_ACTIONS = ("SET_MODE", "SET_APPROACH", "SCHEDULE_OUTAGE",
            "SET_ALERTS", "SET_ALARMS", "CLEAR_OUTAGE")


class ScenarioError(ValueError):
    """The scenario script is malformed."""


@dataclass(frozen=True)
class ScenarioEvent:
    at_s: float
    action: str
    mode: Optional[GbasMode] = None
    approach: Optional[GlsApproachStatus] = None
    start_offset_s: Optional[float] = None   # relative to the event instant
    end_offset_s: Optional[float] = None
    ids: frozenset[int] = frozenset()


@dataclass(frozen=True)
class ScenarioScript:
    station_id: str = DEFAULT_STATION_ID
    rate_hz: float = DEFAULT_RATE_HZ
    events: tuple[ScenarioEvent, ...] = ()


def _validate_script(script: ScenarioScript) -> ScenarioScript:
    if not 0.1 <= script.rate_hz <= 10:
        raise ScenarioError(f"rate_hz {script.rate_hz} outside 0.1..10")
    sid = script.station_id
    if not sid or len(sid) > 8 or sid.endswith(" ") \
            or not all(0x20 <= ord(c) <= 0x7E for c in sid):
        raise ScenarioError(
            f"station_id {sid!r} must be 1..8 printable ASCII chars without trailing spaces")
    last_at = float("-inf")
    for ev in script.events:
        if ev.action not in _ACTIONS:
            raise ScenarioError(f"unknown action {ev.action!r}")
        if ev.at_s < last_at:
            raise ScenarioError(f"events out of order at t={ev.at_s}")
        last_at = ev.at_s
        if ev.action == "SCHEDULE_OUTAGE":
            if ev.start_offset_s is None or ev.end_offset_s is None:
                raise ScenarioError("SCHEDULE_OUTAGE needs start_offset and end_offset")
            if not 0 <= ev.start_offset_s < ev.end_offset_s:
                raise ScenarioError(
                    f"SCHEDULE_OUTAGE needs end_offset > start_offset >= 0,"
                    f" got {ev.start_offset_s}/{ev.end_offset_s}")
        if ev.action == "SET_ALERTS" and not set(ev.ids) <= set(ALERT_ID_RANGE):
            raise ScenarioError(f"alert ids outside 1..35: {sorted(ev.ids)}")
        if ev.action == "SET_ALARMS" and not set(ev.ids) <= set(ALARM_ID_RANGE):
            raise ScenarioError(f"alarm ids outside 1..6: {sorted(ev.ids)}")
    return script


def parse_scenario(text: str) -> ScenarioScript:
    """Parse the JSON scenario form. Example:

    {"station_id": "GBAS01", "rate_hz": 1,
     "events": [{"at": 0, "action": "SET_MODE", "mode": "ALARM"},
                {"at": 5, "action": "SCHEDULE_OUTAGE",
                 "start_offset": 120, "end_offset": 300},
                {"at": 9, "action": "SET_ALERTS", "ids": [1, 35]}]}
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
    events = []
    for i, ev in enumerate(raw.get("events", [])):
        try:
            events.append(ScenarioEvent(
                at_s=float(ev["at"]),
                action=ev["action"],
                mode=GbasMode[ev["mode"]] if "mode" in ev else None,
                approach=GlsApproachStatus[ev["approach"]] if "approach" in ev else None,
                start_offset_s=float(ev["start_offset"]) if "start_offset" in ev else None,
                end_offset_s=float(ev["end_offset"]) if "end_offset" in ev else None,
                ids=frozenset(ev.get("ids", ())),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"event {i}: {exc}") from None
    script = ScenarioScript(
        station_id=raw.get("station_id", DEFAULT_STATION_ID),
        rate_hz=float(raw.get("rate_hz", DEFAULT_RATE_HZ)),
        events=tuple(events),
    )
    return _validate_script(script)


def load_scenario(path: str | Path) -> ScenarioScript:
    return parse_scenario(Path(path).read_text("utf-8"))


@dataclass
class _SimState:
    mode: GbasMode = GbasMode.NORMAL
    approach_override: Optional[GlsApproachStatus] = None
    window: Optional[OutageWindow] = None
    alerts: frozenset[int] = frozenset()
    alarms: frozenset[int] = frozenset()
    pending: list[ScenarioEvent] = field(default_factory=list)


class Simulator:
    """Scenario- and operator-driven frame source.

    step(now_ms) applies every due scenario event, then returns one message
    per elapsed emission period (at most one per call) or None when no
    emission is due. The sequence counter increases by exactly 1 per frame
    and survives RESET, so the monitor's ordering check never trips on an
    operator reset.
    """

    def __init__(self, script: ScenarioScript = ScenarioScript(), *,
                 start_ms: int = 0,
                 outage_duration_ms: int = DEFAULT_OUTAGE_DURATION_MS):
        _validate_script(script)
        self.script = script
        self.start_ms = start_ms
        self.outage_duration_ms = outage_duration_ms
        self.period_ms = 1000.0 / script.rate_hz
        self.sequence = 0
        self._next_due_ms = float(start_ms)
        self._state = _SimState(pending=sorted(script.events, key=lambda e: e.at_s))

    # -- event and command application ------------------------------------

    def _apply_event(self, ev: ScenarioEvent, event_ms: float) -> None:
        st = self._state
        if ev.action == "SET_MODE":
            st.mode = ev.mode
        elif ev.action == "SET_APPROACH":
            st.approach_override = ev.approach
        elif ev.action == "SCHEDULE_OUTAGE":
            st.window = OutageWindow(
                start=int(event_ms + ev.start_offset_s * 1000),
                end=int(event_ms + ev.end_offset_s * 1000),
            )
            st.approach_override = None
        elif ev.action == "SET_ALERTS":
            st.alerts = frozenset(ev.ids)
        elif ev.action == "SET_ALARMS":
            st.alarms = frozenset(ev.ids)
        elif ev.action == "CLEAR_OUTAGE":
            st.window = None

    def control(self, command: str, now_ms: int) -> None:
        """Apply an operator command (console radio buttons)."""
        st = self._state
        if command == "NORMAL":
            st.mode = GbasMode.NORMAL
            st.approach_override = None
            st.window = None
        elif command == "ALARM":
            st.mode = GbasMode.ALARM
        elif command == "TEST":
            st.mode = GbasMode.TEST
        elif command == "OUTAGE":
            start = now_ms + OUTAGE_LEAD_MS
            st.window = OutageWindow(start=start, end=start + self.outage_duration_ms)
            st.approach_override = None
        elif command == "RESET":
            self._state = _SimState(
                pending=sorted(self.script.events, key=lambda e: e.at_s))
            self.start_ms = now_ms
            self._next_due_ms = float(now_ms)
        else:
            raise ValueError(f"unknown control command {command!r}")

    # -- frame derivation ---------------------------------------------------

    def _derived_approach(self, now_ms: int) -> GlsApproachStatus:
        st = self._state
        if st.mode in (GbasMode.ALARM, GbasMode.TEST):
            return GlsApproachStatus.NOT_AVAILABLE
        if st.window is not None:
            if st.approach_override is not None:
                return st.approach_override
            if now_ms < st.window.start:
                return GlsApproachStatus.PREDICTED_OUTAGE
            return GlsApproachStatus.NOT_AVAILABLE
        if st.approach_override is not None:
            return st.approach_override
        return GlsApproachStatus.AVAILABLE

    def _build_message(self, now_ms: int) -> CompositeStatusMessage:
        st = self._state
        approach = self._derived_approach(now_ms)
        window = st.window
        # A PREDICTED_OUTAGE claim without a future start is not encodable;
        # fall back to plain availability rather than emit a bad frame.
        if approach is GlsApproachStatus.PREDICTED_OUTAGE and (
                window is None or window.start <= now_ms):
            approach = GlsApproachStatus.AVAILABLE
        if window is not None and window.end <= now_ms:
            window = None
        self.sequence = (self.sequence + 1) & 0xFFFFFFFF
        return CompositeStatusMessage(
            station_id=self.script.station_id,
            sequence=self.sequence,
            timestamp=now_ms,
            mode=st.mode,
            approach=approach,
            outage=window,
            alerts=st.alerts,
            alarms=st.alarms,
        )

    def step(self, now_ms: int) -> Optional[CompositeStatusMessage]:
        """Run the simulator up to now_ms; emit a frame when one is due."""
        st = self._state
        elapsed_s = (now_ms - self.start_ms) / 1000.0
        while st.pending and st.pending[0].at_s <= elapsed_s:
            ev = st.pending.pop(0)
            self._apply_event(ev, self.start_ms + ev.at_s * 1000)
        # The scheduled window expires on its own; once it is past, service
        # is back and the frame reverts to AVAILABLE.
        if st.window is not None and st.window.end <= now_ms:
            st.window = None
        if now_ms < self._next_due_ms:
            return None
        self._next_due_ms += self.period_ms
        return self._build_message(now_ms)

    # -- introspection ------------------------------------------------------

    def truth(self, now_ms: int) -> dict:
        """Current simulator truth, as served by GET /control/state."""
        st = self._state
        window = st.window if st.window and st.window.end > now_ms else None
        return {
            "station_id": self.script.station_id,
            "rate_hz": self.script.rate_hz,
            "sequence": self.sequence,
            "mode": st.mode.name,
            "approach": self._derived_approach(now_ms).name,
            "outage": {"start": window.start, "end": window.end} if window else None,
            "alerts": sorted(st.alerts),
            "alarms": sorted(st.alarms),
        }
