"""GBAS air traffic status monitoring suite.

Pieces: a bit-exact status-frame codec (protocol), the display state
machine (core) with its alert/alarm catalogs (catalog), a scenario-driven
ground-station simulator (simulator, sim_server), and the monitor service
with UDP ingest, HTTP API and event stream (runtime, server).
"""

from .catalog import Catalog, CatalogError, UnknownId, load_catalog, lookup
from .clock import Clock, ManualClock, SystemClock
from .core import (
    Connectivity,
    Countdown,
    CountdownKind,
    DisplayState,
    MonitorCore,
    Panel,
    PanelColor,
    display_state_to_dict,
    format_countdown,
    normalize,
    render_panels,
    seq_is_newer,
)
from .protocol import (
    CompositeStatusMessage,
    FrameError,
    GbasMode,
    GlsApproachStatus,
    InvalidMessage,
    OutageWindow,
    crc32,
    decode,
    encode,
)
from .runtime import AtsuRuntime, TransitionLog, read_log, replay_log
from .simulator import ScenarioError, ScenarioScript, Simulator, load_scenario, parse_scenario

__version__ = "0.1.0"
