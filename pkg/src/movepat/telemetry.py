"""Per-stage telemetry: stages call record() with counters, the pipeline snapshots them."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field


@dataclass
class _StageTelemetry:
    """Accumulated counters for a single stage."""

    call_count: int = 0
    counters: dict[str, int] = field(default_factory=dict)


_lock = threading.Lock()
_telemetry: dict[str, _StageTelemetry] = {}


def record(stage: str, **counts: int) -> None:
    """Add counts to a stage's running totals.

    Safe to call from worker threads. Totals are sums, so the snapshot does not
    depend on the order in which workers report.
    """
    with _lock:
        entry = _telemetry.get(stage)
        if entry is None:
            entry = _StageTelemetry()
            _telemetry[stage] = entry
        entry.call_count += 1
        for name, value in counts.items():
            entry.counters[name] = entry.counters.get(name, 0) + int(value)


def snapshot() -> dict[str, dict[str, object]]:
    """Return a copy of the accumulated telemetry keyed by stage."""
    with _lock:
        return _build_payload()


def get_telemetry_json() -> str:
    """Return accumulated telemetry as a JSON string with sorted keys."""
    return json.dumps(snapshot(), sort_keys=True)


def reset_telemetry() -> None:
    """Clear all accumulated telemetry (start of a pipeline run, tests)."""
    with _lock:
        _telemetry.clear()


def _build_payload() -> dict[str, dict[str, object]]:
    stages: dict[str, dict[str, object]] = {}
    for stage, entry in sorted(_telemetry.items()):
        stages[stage] = {"call_count": entry.call_count, **dict(sorted(entry.counters.items()))}
    return {"movepat_telemetry": {"version": 1, "stages": stages}}
