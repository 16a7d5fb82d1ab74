"""ATSU service process: UDP ingest, HTTP status API, and the push stream.

The service is a read-only monitor. It listens for status frames on a UDP
port, never transmits anything on that socket, and serves the current
display state over HTTP:

  GET /api/status        current DisplayState JSON (plus counters)
  GET /api/alerts        full service-alert catalog (35 entries)
  GET /api/alarms        full alarm catalog (6 entries)
  GET /api/alerts/{id}   single description, 404 outside 1..35
  GET /api/alarms/{id}   single description, 404 outside 1..6
  GET /api/stream        server-sent events; one snapshot per tick
  GET /api/health        uptime and counters

Every flag has an environment override (ATSU_LISTEN, ATSU_HTTP,
ATSU_STALE_SECS, ATSU_CATALOG, ATSU_LOG_DIR); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import queue
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .catalog import Catalog, UnknownId, load_catalog, lookup
from .clock import Clock, SystemClock
from .core import DEFAULT_STALE_AFTER_S
from .runtime import AtsuRuntime, TransitionLog

log = logging.getLogger("atsu.service")

DEFAULT_LISTEN = "0.0.0.0:21511"
DEFAULT_HTTP = "127.0.0.1:8080"
MAX_DATAGRAM = 65535


def parse_hostport(text: str, what: str = "address") -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep:
        raise ValueError(f"{what} must be host:port, got {text!r}")
    return host, int(port)


class _ApiHandler(BaseHTTPRequestHandler):
    """Read-only JSON API over the shared runtime."""

    protocol_version = "HTTP/1.1"
    server: "ApiHttpServer"

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
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        runtime = self.server.runtime
        catalog = self.server.catalog
        now_ms = self.server.clock.now_ms()
        path = self.path.split("?")[0].rstrip("/") or "/"

        if path == "/api/status":
            self._send_json(200, runtime.status(now_ms))
        elif path == "/api/alerts":
            self._send_json(200, [{"id": i, "description": catalog.alerts[i]}
                                  for i in sorted(catalog.alerts)])
        elif path == "/api/alarms":
            self._send_json(200, [{"id": i, "description": catalog.alarms[i]}
                                  for i in sorted(catalog.alarms)])
        elif path.startswith("/api/alerts/") or path.startswith("/api/alarms/"):
            kind = "alert" if path.startswith("/api/alerts/") else "alarm"
            self._catalog_entry(kind, path.rsplit("/", 1)[1])
        elif path == "/api/health":
            status = runtime.status(now_ms)
            self._send_json(200, {
                "uptime_s": round(time.monotonic() - self.server.started_monotonic, 3),
                "station_id": status["station_id"],
                "counters": status["counters"],
            })
        elif path == "/api/stream":
            self._stream(now_ms)
        else:
            self._send_json(404, {"error": f"no such resource: {path}"})

    def _catalog_entry(self, kind: str, raw_id: str) -> None:
        try:
            entry_id = int(raw_id)
            description = lookup(self.server.catalog, kind, entry_id)
        except (ValueError, UnknownId):
            self._send_json(404, {"error": f"unknown {kind} id {raw_id!r}"})
            return
        self._send_json(200, {"id": entry_id, "description": description})

    def _stream(self, now_ms: int) -> None:
        """Server-sent events: current snapshot immediately, then every
        published tick until the client disconnects or the server stops."""
        runtime = self.server.runtime
        q = runtime.subscribe(now_ms)
        try:
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            while not self.server.stopping.is_set():
                try:
                    snapshot = q.get(timeout=1.0)
                except queue.Empty:
                    self.wfile.write(b": keepalive\n\n")
                    self.wfile.flush()
                    continue
                self.wfile.write(b"data: " + json.dumps(snapshot).encode("utf-8") + b"\n\n")
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            runtime.unsubscribe(q)


class ApiHttpServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, runtime: AtsuRuntime, catalog: Catalog, clock: Clock):
        super().__init__(addr, _ApiHandler)
        self.runtime = runtime
        self.catalog = catalog
        self.clock = clock
        self.stopping = threading.Event()
        self.started_monotonic = time.monotonic()


class AtsuServer:
    """Wires the runtime to real sockets: one UDP ingest thread, one tick
    publisher thread, and the threaded HTTP server.

    tick_interval_s=None disables the internal publisher so a test harness
    can drive runtime.publish_tick against its own clock.
    """

    def __init__(self, runtime: AtsuRuntime, catalog: Catalog, *,
                 clock: Optional[Clock] = None,
                 listen: str = DEFAULT_LISTEN,
                 http: str = DEFAULT_HTTP,
                 tick_interval_s: Optional[float] = 1.0):
        self.runtime = runtime
        self.clock = clock or SystemClock()
        self._listen_addr = parse_hostport(listen, "--listen")
        self._http_addr = parse_hostport(http, "--http")
        self._tick_interval_s = tick_interval_s
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

        self._udp = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._udp.bind(self._listen_addr)
        self._udp.settimeout(0.2)
        self._http = ApiHttpServer(self._http_addr, runtime, catalog, self.clock)

    @property
    def udp_port(self) -> int:
        return self._udp.getsockname()[1]

    @property
    def http_port(self) -> int:
        return self._http.server_address[1]

    def start(self) -> None:
        self._threads = [
            threading.Thread(target=self._udp_loop, name="atsu-udp", daemon=True),
            threading.Thread(target=self._http.serve_forever, name="atsu-http", daemon=True),
        ]
        if self._tick_interval_s is not None:
            self._threads.append(
                threading.Thread(target=self._tick_loop, name="atsu-tick", daemon=True))
        for t in self._threads:
            t.start()
        log.info("listening for frames on udp %s:%d, serving http on %s:%d",
                 self._listen_addr[0], self.udp_port, self._http_addr[0], self.http_port)

    def _udp_loop(self) -> None:
        # Receive-only by contract: this socket never sends a byte.
        while not self._stop.is_set():
            try:
                data, _addr = self._udp.recvfrom(MAX_DATAGRAM)
            except socket.timeout:
                continue
            except OSError:
                break
            self.runtime.ingest(data, self.clock.now_ms())

    def _tick_loop(self) -> None:
        while not self._stop.is_set():
            self.runtime.publish_tick(self.clock.now_ms())
            self._stop.wait(self._tick_interval_s)

    def stop(self) -> None:
        self._stop.set()
        self._http.stopping.set()
        self._http.shutdown()
        self._http.server_close()
        self._udp.close()
        for t in self._threads:
            t.join(timeout=2)


def _env_default(name: str, fallback):
    return os.environ.get(name, fallback)


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="atsu-service",
        description="Air traffic status monitor: UDP frame ingest plus HTTP status API.")
    p.add_argument("--listen", default=_env_default("ATSU_LISTEN", DEFAULT_LISTEN),
                   help="UDP host:port to receive status frames (env ATSU_LISTEN)")
    p.add_argument("--http", default=_env_default("ATSU_HTTP", DEFAULT_HTTP),
                   help="HTTP host:port for the status API (env ATSU_HTTP)")
    p.add_argument("--stale-secs", type=float,
                   default=float(_env_default("ATSU_STALE_SECS", DEFAULT_STALE_AFTER_S)),
                   help="seconds without a frame before the display goes grey"
                        " (env ATSU_STALE_SECS)")
    p.add_argument("--catalog", default=_env_default("ATSU_CATALOG", None),
                   help="alert/alarm catalog JSON; default is the packaged catalog"
                        " (env ATSU_CATALOG)")
    p.add_argument("--log-dir", default=_env_default("ATSU_LOG_DIR", "./atsu-logs"),
                   help="directory for the per-run transition log (env ATSU_LOG_DIR)")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    args = build_arg_parser().parse_args(argv)
    catalog = load_catalog(args.catalog)
    log_path = Path(args.log_dir) / time.strftime(f"atsu-%Y%m%d-%H%M%S-{os.getpid()}.jsonl")
    runtime = AtsuRuntime(catalog, stale_after_s=args.stale_secs,
                          log=TransitionLog(log_path))
    server = AtsuServer(runtime, catalog, listen=args.listen, http=args.http)
    server.start()
    log.info("transition log: %s", log_path)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        log.info("shutting down")
        server.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
