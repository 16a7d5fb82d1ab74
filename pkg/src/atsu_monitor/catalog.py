"""Service-alert and alarm catalogs.

The monitor displays 35 cataloged service alerts and 6 alarms. The id to
description tables live in a human-editable JSON file (keys are ids, values
are description text); a default ships with the package. Loading fails
loudly on wrong entry counts, gaps, or empty descriptions so a broken edit
cannot reach the display silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

ALERT_COUNT = 35
ALARM_COUNT = 6


class CatalogError(ValueError):
    """The catalog file is missing entries or malformed."""


class UnknownId(KeyError):
    """Lookup outside 1..35 (alerts) or 1..6 (alarms)."""


@dataclass(frozen=True)
class Catalog:
    alerts: dict[int, str]
    alarms: dict[int, str]


def _parse_table(raw: dict, kind: str, count: int) -> dict[int, str]:
    table: dict[int, str] = {}
    for key, text in raw.items():
        try:
            entry_id = int(key)
        except (TypeError, ValueError):
            raise CatalogError(f"{kind} key {key!r} is not an integer id") from None
        if not isinstance(text, str) or not text.strip():
            raise CatalogError(f"{kind} {entry_id} has an empty description")
        table[entry_id] = text
    expected = set(range(1, count + 1))
    if set(table) != expected:
        missing = sorted(expected - set(table))
        extra = sorted(set(table) - expected)
        raise CatalogError(
            f"{kind} table must hold ids 1..{count}"
            f" (missing {missing}, unexpected {extra})")
    return table


def parse_catalog(text: str) -> Catalog:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "alerts" not in raw or "alarms" not in raw:
        raise CatalogError('catalog must be an object with "alerts" and "alarms" tables')
    return Catalog(
        alerts=_parse_table(raw["alerts"], "alert", ALERT_COUNT),
        alarms=_parse_table(raw["alarms"], "alarm", ALARM_COUNT),
    )


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and validate a catalog file; None loads the packaged default."""
    if path is None:
        text = resources.files("atsu_monitor").joinpath("data/catalog.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_catalog(text)


def lookup(catalog: Catalog, kind: str, entry_id: int) -> str:
    """Description for one alert or alarm id; kind is "alert" or "alarm"."""
    if kind == "alert":
        table = catalog.alerts
    elif kind == "alarm":
        table = catalog.alarms
    else:
        raise ValueError(f"kind must be 'alert' or 'alarm', not {kind!r}")
    try:
        return table[entry_id]
    except KeyError:
        raise UnknownId(f"unknown {kind} id {entry_id}") from None
