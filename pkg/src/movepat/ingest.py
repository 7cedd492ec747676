"""Tracking ingestion: derive missing signals, discretize, split into active sequences."""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from movepat import telemetry
from movepat._parallel import parallel_map
from movepat.alphabet import (
    ACCELERATION_BANDS,
    TURNING_BANDS,
    VELOCITY_BANDS,
    BandThresholds,
    MovementUnit,
    band_of,
    characters,
    encode,
)
from movepat.exceptions import EmptyInputError, GapError, InvalidSampleError, UnrecoverableInputError
from movepat.types import GRID_TOLERANCE, SAMPLE_PERIOD, MovementSequence, ObservationSet, TrackingSample

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("player_id", "match_id", "position", "t", "velocity")
OPTIONAL_COLUMNS = ("acceleration", "heading", "turning_angle")


class InactiveConfig(BaseModel):
    """Inactive-period rule: velocity below v_min for at least min_dur seconds"""

    v_min: float = Field(default=0.1, ge=0.0)
    min_dur: float = Field(default=2.0, gt=0.0)
    min_segment_length: int = Field(default=2, ge=1)


@dataclass(slots=True)
class TrackingStream:
    """Columnar 10 Hz stream of one player-match."""

    player_id: str
    match_id: str
    position: str
    t: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray | None = None
    turning_angle: np.ndarray | None = None
    heading: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.t)

    @classmethod
    def from_samples(cls, samples: list[TrackingSample]) -> TrackingStream:
        if not samples:
            raise EmptyInputError("no tracking samples")
        first = samples[0]

        def column(name: str) -> np.ndarray | None:
            values = [getattr(sample, name) for sample in samples]
            if all(value is None for value in values):
                return None
            if any(value is None for value in values):
                raise UnrecoverableInputError(f"column {name!r} is only partly present")
            return np.asarray(values, dtype=float)

        return cls(
            player_id=first.player_id,
            match_id=first.match_id,
            position=first.position,
            t=np.asarray([sample.t for sample in samples], dtype=float),
            velocity=np.asarray([sample.velocity for sample in samples], dtype=float),
            acceleration=column("acceleration"),
            turning_angle=column("turning_angle"),
            heading=column("heading"),
        )


def _gap_positions(t: np.ndarray) -> np.ndarray:
    """Indices i where t[i] - t[i-1] is off the 0.1 s grid."""
    if len(t) < 2:
        return np.empty(0, dtype=np.int64)
    off_grid = np.abs(np.diff(t) - SAMPLE_PERIOD) > GRID_TOLERANCE
    return np.flatnonzero(off_grid) + 1


def _require_uniform(t: np.ndarray) -> None:
    gaps = _gap_positions(t)
    if len(gaps):
        first = int(gaps[0])
        raise GapError(f"stream leaves the 0.1 s grid at t={t[first]:.3f}", t=float(t[first]))


def _acceleration(velocity: np.ndarray) -> np.ndarray:
    acceleration = np.zeros_like(velocity, dtype=float)
    acceleration[1:] = np.diff(velocity) / SAMPLE_PERIOD
    return acceleration


def _turning(heading: np.ndarray) -> np.ndarray:
    turning = np.zeros_like(heading, dtype=float)
    delta = np.abs(np.diff(heading)) % 360.0
    turning[1:] = np.minimum(delta, 360.0 - delta)
    return turning


def derive_acceleration(stream: TrackingStream) -> TrackingStream:
    """Fill acceleration by finite differences of velocity; the first sample gets 0."""
    _require_uniform(stream.t)
    return replace(stream, acceleration=_acceleration(stream.velocity))


def derive_turning_angle(stream: TrackingStream) -> TrackingStream:
    """Fill turning angle from consecutive headings, folded into [0, 180]."""
    if stream.turning_angle is not None:
        return stream
    if stream.heading is None:
        raise UnrecoverableInputError(
            f"{stream.player_id}@{stream.match_id} has neither heading nor turning_angle"
        )
    return replace(stream, turning_angle=_turning(stream.heading))


def discretize_sample(sample: TrackingSample, thresholds: BandThresholds | None = None) -> MovementUnit:
    """Band one sample's (velocity, acceleration, turning angle) into a movement unit."""
    thresholds = thresholds or BandThresholds()
    signals = (sample.velocity, sample.acceleration, sample.turning_angle)
    if any(value is None or not math.isfinite(value) for value in signals):
        raise InvalidSampleError(f"sample at t={sample.t} has a missing or non-finite signal", t=sample.t)
    velocity = max(sample.velocity, 0.0)
    if velocity != sample.velocity:
        logger.warning(f"sample at t={sample.t}: clamped 1 negative velocity to 0")
    turning = min(max(sample.turning_angle, 0.0), 180.0)
    if turning != sample.turning_angle:
        logger.warning(f"sample at t={sample.t}: clamped 1 turning angle into [0, 180]")
    return encode(
        VELOCITY_BANDS[band_of(velocity, thresholds.velocity)],
        ACCELERATION_BANDS[band_of(sample.acceleration, thresholds.acceleration)],
        TURNING_BANDS[band_of(turning, thresholds.turning)],
    )


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, end) ranges of consecutive True values."""
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[0::2].tolist(), edges[1::2].tolist()))


def _clamp(stream: TrackingStream) -> TrackingStream:
    velocity = stream.velocity
    negative = int((velocity < 0).sum())
    if negative:
        logger.warning(f"{stream.player_id}@{stream.match_id}: clamped {negative} negative velocities to 0")
        velocity = np.maximum(velocity, 0.0)
    turning = stream.turning_angle
    if turning is not None:
        outside = int(((turning < 0) | (turning > 180)).sum())
        if outside:
            logger.warning(f"{stream.player_id}@{stream.match_id}: clamped {outside} turning angles into [0, 180]")
            turning = np.clip(turning, 0.0, 180.0)
    return replace(stream, velocity=velocity, turning_angle=turning)


def build_sequences(
    stream: TrackingStream,
    thresholds: BandThresholds | None = None,
    inactive: InactiveConfig | None = None,
) -> ObservationSet | None:
    """Discretize one player-match stream into its active movement sequences.

    Inactive runs (velocity < v_min for >= min_dur) are removed, the stream is
    split at removed runs and at grid gaps, and segments shorter than
    min_segment_length are dropped. Returns None when nothing survives.
    """
    thresholds = thresholds or BandThresholds()
    inactive = inactive or InactiveConfig()
    if len(stream) == 0:
        logger.warning(f"{stream.player_id}@{stream.match_id}: empty stream, observation excluded")
        return None
    if stream.turning_angle is None and stream.heading is None:
        raise UnrecoverableInputError(
            f"{stream.player_id}@{stream.match_id} has neither heading nor turning_angle"
        )
    stream = _clamp(stream)

    bounds = [0, *_gap_positions(stream.t).tolist(), len(stream)]
    min_run = int(math.ceil(inactive.min_dur / SAMPLE_PERIOD - 1e-9))
    sequences: list[MovementSequence] = []
    dropped = removed = 0
    for lo, hi in zip(bounds, bounds[1:]):
        velocity = stream.velocity[lo:hi]
        acceleration = stream.acceleration[lo:hi] if stream.acceleration is not None else _acceleration(velocity)
        if stream.turning_angle is not None:
            turning = stream.turning_angle[lo:hi]
        else:
            turning = np.clip(_turning(stream.heading[lo:hi]), 0.0, 180.0)
        t = stream.t[lo:hi]

        bad = ~(np.isfinite(velocity) & np.isfinite(acceleration) & np.isfinite(turning))
        if bad.any():
            where = float(t[np.flatnonzero(bad)[0]])
            raise InvalidSampleError(f"{stream.player_id}@{stream.match_id}: non-finite signal at t={where}", t=where)

        keep = np.ones(hi - lo, dtype=bool)
        for start, end in _runs(velocity < inactive.v_min):
            if end - start >= min_run:
                keep[start:end] = False
                removed += end - start
        for start, end in _runs(keep):
            if end - start < inactive.min_segment_length:
                dropped += 1
                continue
            symbols = characters(velocity[start:end], acceleration[start:end], turning[start:end], thresholds)
            sequences.append(MovementSequence(symbols=symbols, start_t=float(t[start]), end_t=float(t[end - 1])))

    telemetry.record(
        "discretize", samples=len(stream), inactive_samples=removed, short_segments=dropped, sequences=len(sequences)
    )
    if not sequences:
        logger.warning(f"{stream.player_id}@{stream.match_id}: no active sequences, observation excluded")
        return None
    return ObservationSet(
        player_id=stream.player_id, match_id=stream.match_id, position=stream.position, sequences=sequences
    )


# =============================================================================
# File formats
# =============================================================================


def read_tracking_csv(path: str | Path) -> list[TrackingStream]:
    """Read a tracking CSV into per player-match streams ordered by (player_id, match_id)."""
    try:
        frame = pd.read_csv(path, dtype={"player_id": str, "match_id": str, "position": str})
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"{path} is empty") from None
    missing = [column for column in REQUIRED_COLUMNS if column not in frame.columns]
    if missing:
        raise UnrecoverableInputError(f"{path} lacks required columns: {', '.join(missing)}")
    if frame.empty:
        raise EmptyInputError(f"{path} has a header but no rows")

    streams = []
    for (player_id, match_id), group in frame.groupby(["player_id", "match_id"], sort=True):
        group = group.sort_values("t", kind="stable")
        positions = group["position"].unique()
        if len(positions) > 1:
            logger.warning(f"{player_id}@{match_id}: several positions {list(positions)}, using {positions[0]!r}")

        def optional(name: str) -> np.ndarray | None:
            if name not in group.columns or group[name].isna().all():
                return None
            return group[name].to_numpy(dtype=float)

        streams.append(
            TrackingStream(
                player_id=str(player_id),
                match_id=str(match_id),
                position=str(positions[0]),
                t=group["t"].to_numpy(dtype=float),
                velocity=group["velocity"].to_numpy(dtype=float),
                acceleration=optional("acceleration"),
                turning_angle=optional("turning_angle"),
                heading=optional("heading"),
            )
        )
    return streams


def write_tracking_csv(streams: Iterable[TrackingStream], path: str | Path) -> None:
    """Write streams in the tracking CSV format; absent optional signals are omitted."""
    frames = []
    for stream in streams:
        columns: dict[str, object] = {
            "player_id": stream.player_id,
            "match_id": stream.match_id,
            "position": stream.position,
            "t": stream.t,
            "velocity": stream.velocity,
        }
        for name in OPTIONAL_COLUMNS:
            values = getattr(stream, name)
            if values is not None:
                columns[name] = values
        frames.append(pd.DataFrame(columns))
    if not frames:
        raise EmptyInputError("no streams to write")
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)


def discretize_streams(
    streams: Iterable[TrackingStream],
    thresholds: BandThresholds | None = None,
    inactive: InactiveConfig | None = None,
    threads: int = 1,
) -> list[ObservationSet]:
    """Run build_sequences over every stream; excluded observations are skipped."""
    results = parallel_map(lambda stream: build_sequences(stream, thresholds, inactive), streams, threads)
    observations = [observation for observation in results if observation is not None]
    observations.sort(key=lambda obs: (obs.player_id, obs.match_id))
    return observations


def write_observations(observations: Iterable[ObservationSet], path: str | Path) -> None:
    """Write one JSON object per observation."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for observation in observations:
            record = {
                "player_id": observation.player_id,
                "match_id": observation.match_id,
                "position": observation.position,
                "sequences": observation.symbols,
            }
            handle.write(json.dumps(record) + "\n")


def read_observations(path: str | Path) -> list[ObservationSet]:
    """Read observations written by write_observations."""
    observations = []
    with Path(path).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            record = json.loads(line)
            try:
                observations.append(
                    ObservationSet.from_strings(
                        str(record["player_id"]), str(record["match_id"]), str(record["position"]), record["sequences"]
                    )
                )
            except KeyError as exc:
                raise UnrecoverableInputError(f"{path}:{line_number} lacks field {exc}") from None
    if not observations:
        raise EmptyInputError(f"{path} holds no observations")
    return observations
