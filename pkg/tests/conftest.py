"""Pytest configuration and shared fixtures for movepat tests."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from movepat import telemetry
from movepat.alphabet import decode
from movepat.ingest import TrackingStream

# =============================================================================
# Representative signal values per band
# =============================================================================
# One value strictly inside each band, used to build streams that discretize
# to a known string.

VELOCITY_VALUES = {"Walk": 1.0, "Jog": 3.0, "Run": 4.5, "Sprint": 6.0}
ACCELERATION_VALUES = {"Deceleration": -0.5, "Neutral": 0.0, "Acceleration": 0.5}
TURNING_VALUES = {"Straight": 5.0, "Acute": 20.0, "Large": 60.0, "Backwards": 120.0}


def stream_for(
    symbols: str,
    *,
    player_id: str = "P1",
    match_id: str = "M1",
    position: str = "hooker",
    t0: float = 0.0,
) -> TrackingStream:
    """A 10 Hz stream whose samples discretize to `symbols`."""
    units = [decode(char) for char in symbols]
    return TrackingStream(
        player_id=player_id,
        match_id=match_id,
        position=position,
        t=t0 + np.arange(len(units)) * 0.1,
        velocity=np.array([VELOCITY_VALUES[u.velocity_band.value] for u in units]),
        acceleration=np.array([ACCELERATION_VALUES[u.acceleration_band.value] for u in units]),
        turning_angle=np.array([TURNING_VALUES[u.turning_band.value] for u in units]),
    )


@pytest.fixture
def make_stream() -> Callable[..., TrackingStream]:
    return stream_for


@pytest.fixture
def hooker_stream() -> TrackingStream:
    """Ten consecutive samples of one hooker that discretize to 'ijfeikhddb'."""
    return TrackingStream(
        player_id="H07",
        match_id="R12",
        position="hooker",
        t=146.9 + np.arange(10) * 0.1,
        velocity=np.array([1.02, 1.21, 1.25, 1.24, 1.31, 1.45, 1.44, 1.20, 0.98, 0.95]),
        acceleration=np.array([0.42, 1.90, 0.11, -0.05, 0.70, 1.40, -0.10, -2.40, -2.20, -0.30]),
        turning_angle=np.array([3.1, 12.4, 18.0, 7.5, 2.2, 51.0, 97.3, 134.8, 101.6, 27.9]),
    )


@pytest.fixture(autouse=True)
def clean_telemetry():
    """Every test starts and ends with empty telemetry."""
    telemetry.reset_telemetry()
    yield
    telemetry.reset_telemetry()


def pytest_configure(config):
    """Configure pytest markers."""
    config.addinivalue_line("markers", "slow: runs the pipeline on a full-size synthetic cohort")
