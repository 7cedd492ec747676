"""Tests for per-stage telemetry counters."""

from __future__ import annotations

import json

from movepat._parallel import parallel_map
from movepat.telemetry import get_telemetry_json, record, reset_telemetry, snapshot


def test_record_accumulates_counters() -> None:
    """Repeated `record(...)` calls sum their counters per stage."""
    record("mine.lccspm", observations=1, patterns=4)
    record("mine.lccspm", observations=1, patterns=2)

    stage = json.loads(get_telemetry_json())["movepat_telemetry"]["stages"]["mine.lccspm"]
    assert stage == {"call_count": 2, "observations": 2, "patterns": 6}


def test_totals_do_not_depend_on_threads() -> None:
    """Worker threads reporting concurrently give the serial totals."""
    parallel_map(lambda i: record("synth", sequences=i), range(200), threads=8)
    stage = snapshot()["movepat_telemetry"]["stages"]["synth"]
    assert stage["call_count"] == 200
    assert stage["sequences"] == sum(range(200))


def test_reset_clears_everything() -> None:
    record("discretize", samples=10)
    reset_telemetry()
    assert snapshot() == {"movepat_telemetry": {"version": 1, "stages": {}}}


def test_json_is_stable() -> None:
    """Stages and counters serialize in sorted order."""
    record("mine.smp-lcs", patterns=1)
    record("discretize", samples=3, inactive_samples=1)
    text = get_telemetry_json()
    assert text.index("discretize") < text.index("mine.smp-lcs")
    assert text.index("inactive_samples") < text.index("samples\": 3")
