import json
import time

from atsu_monitor import server as service_mod
from atsu_monitor import sim_server as sim_mod
from atsu_monitor.catalog import load_catalog
from atsu_monitor.runtime import AtsuRuntime
from atsu_monitor.server import AtsuServer, parse_hostport
from atsu_monitor.sim_server import SimRunner
from atsu_monitor.simulator import Simulator
from test_service import _wait_for, http_get

CATALOG = load_catalog()


def test_parse_hostport():
    assert parse_hostport("127.0.0.1:8080") == ("127.0.0.1", 8080)
    assert parse_hostport("0.0.0.0:0") == ("0.0.0.0", 0)


def test_service_flags_and_env_overrides(monkeypatch):
    parser = service_mod.build_arg_parser()
    args = parser.parse_args([])
    assert args.listen == "0.0.0.0:21511"
    assert args.http == "127.0.0.1:8080"
    assert args.stale_secs == 5.0

    monkeypatch.setenv("ATSU_LISTEN", "127.0.0.1:1234")
    monkeypatch.setenv("ATSU_STALE_SECS", "9")
    args = service_mod.build_arg_parser().parse_args([])
    assert args.listen == "127.0.0.1:1234"
    assert args.stale_secs == 9.0
    # explicit flag still wins over the environment
    args = service_mod.build_arg_parser().parse_args(["--listen", "127.0.0.1:9"])
    assert args.listen == "127.0.0.1:9"


def test_sim_flags():
    args = sim_mod.build_arg_parser().parse_args(
        ["--dest", "10.0.0.1:21511", "--rate-hz", "2",
         "--control-http", "127.0.0.1:0", "--seed-station", "TWR1"])
    assert args.dest == "10.0.0.1:21511"
    assert args.rate_hz == 2.0
    assert args.seed_station == "TWR1"


def test_threaded_realtime_loop():
    """Short real-clock run: emit thread, tick thread, control HTTP, and
    the UDP ingest thread all running for real."""
    runtime = AtsuRuntime(CATALOG, stale_after_s=5.0)
    server = AtsuServer(runtime, CATALOG,
                        listen="127.0.0.1:0", http="127.0.0.1:0",
                        tick_interval_s=0.1)
    server.start()
    from atsu_monitor.simulator import ScenarioScript
    sim = Simulator(ScenarioScript(rate_hz=10),  # keeps the wall-clock cost tiny
                    start_ms=int(time.time() * 1000))
    runner = SimRunner(sim, f"127.0.0.1:{server.udp_port}",
                       control_http="127.0.0.1:0")
    runner.start()
    try:
        assert _wait_for(lambda: runtime.messages >= 3, timeout=5)
        code, status = http_get(server.http_port, "/api/status")
        assert code == 200 and status["connectivity"] == "CONNECTED"

        # control API drives the next frames
        import http.client
        conn = http.client.HTTPConnection("127.0.0.1", runner.control_port, timeout=5)
        conn.request("POST", "/control/alarm")
        resp = conn.getresponse()
        body = json.loads(resp.read())
        conn.close()
        assert resp.status == 200 and body["state"]["mode"] == "ALARM"

        assert _wait_for(
            lambda: http_get(server.http_port, "/api/status")[1]
            ["mode_panel"]["color"] == "RED", timeout=5)

        code, truth = http_get(runner.control_port, "/control/state")
        assert code == 200 and truth["mode"] == "ALARM"
        assert http_get(runner.control_port, "/control/bogus")[0] == 404
    finally:
        runner.stop()
        server.stop()
