"""Networked runner for the ground-station simulator.

Emits encoded status frames over UDP unicast to the monitor's address and,
optionally, exposes the operator control API the browser console uses:

  POST /control/normal|alarm|test|outage|reset
  GET  /control/state

Frames are fire-and-forget datagrams; stopping the sender is exactly how
the monitor's staleness path gets exercised.
"""

from __future__ import annotations

import argparse
import json
import logging
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .clock import Clock, SystemClock
from .protocol import encode
from .server import parse_hostport
from .simulator import (
    CONTROL_COMMANDS,
    DEFAULT_RATE_HZ,
    DEFAULT_STATION_ID,
    ScenarioScript,
    Simulator,
    load_scenario,
)

log = logging.getLogger("gbas.sim")


class _ControlHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: "ControlHttpServer"

    def log_message(self, fmt, *args):
        log.debug("http %s", fmt % args)

    def _send_json(self, code: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path.rstrip("/") == "/control/state":
            self._send_json(200, self.server.sim_runner.state())
        else:
            self._send_json(404, {"error": f"no such resource: {self.path}"})

    def do_POST(self):
        command = self.path.rstrip("/").rsplit("/", 1)[-1].upper()
        if not self.path.startswith("/control/") or command not in CONTROL_COMMANDS:
            self._send_json(404, {"error": f"no such control: {self.path}"})
            return
        state = self.server.sim_runner.control(command)
        self._send_json(200, {"ok": True, "command": command, "state": state})


class ControlHttpServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, sim_runner: "SimRunner"):
        super().__init__(addr, _ControlHandler)
        self.sim_runner = sim_runner


class SimRunner:
    """Owns the simulator state machine, the emission thread, and the
    optional control HTTP server. Control commands and emissions are
    serialized on one lock, so commands apply between frames."""

    def __init__(self, sim: Simulator, dest: str, *,
                 clock: Optional[Clock] = None,
                 control_http: Optional[str] = None):
        self.sim = sim
        self.dest = parse_hostport(dest, "--dest")
        self.clock = clock or SystemClock()
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self.frames_sent = 0
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind(("0.0.0.0", 0))
        self._control_server = None
        if control_http is not None:
            self._control_server = ControlHttpServer(
                parse_hostport(control_http, "--control-http"), self)

    @property
    def control_port(self) -> Optional[int]:
        return self._control_server.server_address[1] if self._control_server else None

    def pump(self) -> bool:
        """Step the simulator once at the current clock; send any due frame.
        Returns True when a frame went out."""
        with self._lock:
            msg = self.sim.step(self.clock.now_ms())
            if msg is None:
                return False
            frame = encode(msg)
        self.sock.sendto(frame, self.dest)
        self.frames_sent += 1
        return True

    def control(self, command: str) -> dict:
        with self._lock:
            now = self.clock.now_ms()
            self.sim.control(command, now)
            return self.sim.truth(now)

    def state(self) -> dict:
        with self._lock:
            return self.sim.truth(self.clock.now_ms())

    def start(self) -> None:
        self._threads = [threading.Thread(target=self._emit_loop, name="sim-emit", daemon=True)]
        if self._control_server is not None:
            self._threads.append(threading.Thread(
                target=self._control_server.serve_forever, name="sim-control", daemon=True))
        for t in self._threads:
            t.start()
        log.info("emitting %s frames at %.2f Hz to %s:%d",
                 self.sim.script.station_id, self.sim.script.rate_hz, *self.dest)
        if self._control_server is not None:
            log.info("control api on http://%s:%d/control/state",
                     self._control_server.server_address[0], self.control_port)

    def _emit_loop(self) -> None:
        # Poll well below the emission period so frames land close to due time.
        poll_s = min(0.05, self.sim.period_ms / 1000.0 / 4)
        while not self._stop.is_set():
            self.pump()
            self._stop.wait(poll_s)

    def stop(self) -> None:
        self._stop.set()
        if self._control_server is not None:
            self._control_server.shutdown()
            self._control_server.server_close()
        for t in self._threads:
            t.join(timeout=2)
        self.sock.close()


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gbas-sim",
        description="GBAS station simulator: emits status frames over UDP.")
    p.add_argument("--dest", default="127.0.0.1:21511",
                   help="monitor host:port receiving the frames")
    p.add_argument("--rate-hz", type=float, default=None,
                   help=f"emission rate; overrides the scenario value"
                        f" (default {DEFAULT_RATE_HZ})")
    p.add_argument("--scenario", default=None, help="scenario script JSON file")
    p.add_argument("--control-http", default=None,
                   help="host:port for the operator control API (off unless set)")
    p.add_argument("--seed-station", default=None,
                   help=f"station id when no scenario provides one"
                        f" (default {DEFAULT_STATION_ID})")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    args = build_arg_parser().parse_args(argv)
    script = load_scenario(args.scenario) if args.scenario else ScenarioScript()
    overrides = {}
    if args.rate_hz is not None:
        overrides["rate_hz"] = args.rate_hz
    if args.seed_station is not None:
        overrides["station_id"] = args.seed_station
    if overrides:
        import dataclasses
        script = dataclasses.replace(script, **overrides)
    clock = SystemClock()
    runner = SimRunner(Simulator(script, start_ms=clock.now_ms()), args.dest,
                       clock=clock, control_http=args.control_http)
    runner.start()
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        log.info("stopping after %d frames", runner.frames_sent)
        runner.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
