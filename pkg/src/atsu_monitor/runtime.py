"""Monitor service runtime: ingest pipeline, snapshot publication, and the
append-only transition log.

The runtime owns a MonitorCore behind one lock. Datagrams flow through
decode -> normalize -> apply_message; every published tick snapshot is
compared against the previous one and material changes are appended to the
log as TICK_TRANSITION records. "Material" excludes the UTC clock, the
countdown's remaining seconds, and the message sequence number, all of
which advance under perfectly healthy traffic; the event stream still
carries them because every tick is pushed to subscribers whether or not it
is material.

The log is newline-delimited JSON, one record per line:

  {"at": <ms>, "kind": "MESSAGE",         "payload": <message JSON>}
  {"at": <ms>, "kind": "TICK_TRANSITION", "payload": {"changed": {...}}}
  {"at": <ms>, "kind": "DIAGNOSTIC",      "payload": <text>}

MESSAGE payloads hold the frame as decoded (pre-normalization), so a replay
runs the full pipeline and must reproduce the logged TICK_TRANSITION
sequence exactly.
"""

from __future__ import annotations

import json
import queue
import threading
from pathlib import Path
from typing import Optional

from . import protocol
from .catalog import Catalog
from .core import (
    COUNTDOWN_SATURATION_S,
    DEFAULT_STALE_AFTER_S,
    MonitorCore,
    display_state_to_dict,
    normalize,
)

KIND_MESSAGE = "MESSAGE"
KIND_TICK_TRANSITION = "TICK_TRANSITION"
KIND_DIAGNOSTIC = "DIAGNOSTIC"


class TransitionLog:
    """Append-only JSONL writer; one file per service run."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("a", encoding="utf-8")

    def append(self, at_ms: int, kind: str, payload) -> None:
        self._fh.write(json.dumps(
            {"at": at_ms, "kind": kind, "payload": payload}, sort_keys=True))
        self._fh.write("\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def read_log(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


def material_view(status: dict) -> dict:
    """Strip the fields that advance under perfectly normal traffic from a
    display snapshot: the clock, the counters, the per-frame sequence, and
    the countdown's remaining time (its kind and target stay material)."""
    view = {k: v for k, v in status.items()
            if k not in ("utc_clock", "counters", "last_sequence")}
    if view.get("countdown"):
        view["countdown"] = {k: v for k, v in view["countdown"].items()
                             if k in ("kind", "target")}
    return view


def material_diff(old: Optional[dict], new: dict) -> dict:
    """Changed material fields, keyed by field name with the new values.
    Against None (first publish) every material field counts as changed."""
    new_view = material_view(new)
    if old is None:
        return new_view
    old_view = material_view(old)
    return {k: v for k, v in new_view.items() if old_view.get(k, object()) != v}


class AtsuRuntime:
    """Thread-safe monitor state shared by the UDP ingest path, the tick
    publisher, and any number of HTTP readers and stream subscribers."""

    def __init__(self, catalog: Catalog, *,
                 stale_after_s: float = DEFAULT_STALE_AFTER_S,
                 log: Optional[TransitionLog] = None):
        self.core = MonitorCore(catalog, stale_after_s=stale_after_s)
        self.log = log
        self.bad_frames = 0
        self.messages = 0
        self._lock = threading.Lock()
        self._subscribers: list[queue.Queue] = []
        self._last_status: Optional[dict] = None
        self._saturation_logged_target: Optional[int] = None

    # -- ingest ----------------------------------------------------------

    def ingest(self, datagram: bytes, now_ms: int) -> list[str]:
        """Run one datagram through decode -> normalize -> apply_message.

        Decode failures bump the bad-frame counter and become DIAGNOSTIC
        records; nothing is ever sent back to the sender. Returns the
        diagnostics for the caller's benefit.
        """
        with self._lock:
            try:
                msg = protocol.decode(datagram)
            except protocol.FrameError as err:
                self.bad_frames += 1
                diag = f"bad frame ({type(err).__name__}): {err}"
                self._log(now_ms, KIND_DIAGNOSTIC, diag)
                return [diag]
            self.messages += 1
            self._log(now_ms, KIND_MESSAGE, protocol.message_to_dict(msg))
            normalized, diags = normalize(msg)
            diags.extend(self.core.apply_message(normalized, now_ms))
            for diag in diags:
                self._log(now_ms, KIND_DIAGNOSTIC, diag)
            return diags

    # -- reading -----------------------------------------------------------

    def status(self, now_ms: int) -> dict:
        """Fresh DisplayState snapshot plus service counters."""
        with self._lock:
            return self._status_locked(now_ms)

    def _status_locked(self, now_ms: int) -> dict:
        status = display_state_to_dict(self.core.tick(now_ms))
        status["counters"] = {
            "messages": self.messages,
            "bad_frames": self.bad_frames,
            "out_of_order": self.core.out_of_order,
        }
        return status

    # -- publication ---------------------------------------------------------

    def publish_tick(self, now_ms: int) -> dict:
        """Compute the snapshot at now_ms, log a TICK_TRANSITION if any
        material field changed, and push the snapshot to every subscriber."""
        with self._lock:
            status = self._status_locked(now_ms)
            changed = material_diff(self._last_status, status)
            if changed:
                self._log(now_ms, KIND_TICK_TRANSITION, {"changed": changed})
            self._last_status = status
            countdown = status.get("countdown")
            if countdown and countdown["remaining"] >= COUNTDOWN_SATURATION_S \
                    and self._saturation_logged_target != countdown["target"]:
                self._saturation_logged_target = countdown["target"]
                self._log(now_ms, KIND_DIAGNOSTIC,
                          f"countdown beyond 99 h, display saturated"
                          f" (remaining {countdown['remaining']} s)")
            subscribers = list(self._subscribers)
        for q in subscribers:
            q.put(status)
        return status

    def _log(self, at_ms: int, kind: str, payload) -> None:
        if self.log is not None:
            self.log.append(at_ms, kind, payload)

    # -- stream subscriptions -----------------------------------------------

    def subscribe(self, now_ms: int) -> queue.Queue:
        """Register a stream subscriber; the current snapshot is queued
        first so a reconnecting client is immediately consistent."""
        q: queue.Queue = queue.Queue()
        with self._lock:
            q.put(self._status_locked(now_ms))
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)


def replay_log(records: list[dict], catalog: Catalog, *,
               stale_after_s: float = DEFAULT_STALE_AFTER_S) -> list[dict]:
    """Re-run the logged MESSAGE records through a fresh core, ticking at
    each logged TICK_TRANSITION instant. Returns the recomputed transition
    records ({"at", "changed"}); a faithful log reproduces itself."""
    core = MonitorCore(catalog, stale_after_s=stale_after_s)
    last_status: Optional[dict] = None
    transitions = []
    for rec in records:
        at = rec["at"]
        if rec["kind"] == KIND_MESSAGE:
            msg = protocol.message_from_dict(rec["payload"])
            normalized, _ = normalize(msg)
            core.apply_message(normalized, at)
        elif rec["kind"] == KIND_TICK_TRANSITION:
            status = display_state_to_dict(core.tick(at))
            transitions.append({"at": at, "changed": material_diff(last_status, status)})
            last_status = status
    return transitions
