"""Synthetic cohorts: Markov movement sequences with position-specific motifs.

Each observation draws its sequences from a first-order chain over the 48
movement units, then splices its position's motifs in at random offsets. Raw
10 Hz streams can be realized from the sequences so that discretizing them gives
the sequences back exactly.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from pydantic import BaseModel, Field, model_validator

from movepat import telemetry
from movepat._parallel import parallel_map
from movepat.alphabet import (
    ACCELERATION_BANDS,
    ALPHABET,
    TURNING_BANDS,
    VELOCITY_BANDS,
    BandThresholds,
    decode,
    is_alphabet,
)
from movepat.exceptions import ConfigError
from movepat.ingest import InactiveConfig, TrackingStream
from movepat.types import SAMPLE_PERIOD, ObservationSet

logger = logging.getLogger(__name__)

N_SYMBOLS = len(ALPHABET)
# Seconds of standstill between two realized sequences; must exceed the inactive min_dur.
PAUSE_SECONDS = 3.0
_MARGINS = {"velocity": 0.2, "acceleration": 0.05, "turning": 1.0}


def default_chain(same_band_weight: float = 3.0) -> np.ndarray:
    """Row-stochastic chain favouring moves within the same velocity band."""
    per_band = len(ACCELERATION_BANDS) * len(TURNING_BANDS)
    band = np.arange(N_SYMBOLS) // per_band
    weights = np.where(band[:, None] == band[None, :], same_band_weight, 1.0)
    return weights / weights.sum(axis=1, keepdims=True)


def stationary_distribution(chain: np.ndarray) -> np.ndarray:
    """Left eigenvector of the chain for eigenvalue 1, normalized to sum 1."""
    values, vectors = np.linalg.eig(chain.T)
    vector = np.real(vectors[:, int(np.argmin(np.abs(values - 1.0)))])
    vector = np.abs(vector)
    return vector / vector.sum()


class Motif(BaseModel):
    """A pattern spliced in at `rate` expected insertions per 100 base symbols"""

    pattern: str = Field(min_length=1)
    rate: float = Field(default=1.0, ge=0.0)


class SynthConfig(BaseModel):
    """Cohort generator settings"""

    players_per_position: int = Field(default=20, ge=1)
    matches_per_player: int = Field(default=10, ge=1)
    seed: int = 0
    positions: list[str] = Field(default_factory=lambda: ["hooker", "winger"], min_length=1)
    base_chain: list[list[float]] | None = None  # None -> default_chain()
    motifs: dict[str, list[Motif]] = Field(default_factory=dict)
    sequence_length_range: tuple[int, int] = (3, 8)
    sequences_per_observation_range: tuple[int, int] = (40, 80)

    @model_validator(mode="after")
    def _check(self) -> SynthConfig:
        low, high = self.sequence_length_range
        if low < 2 or high < low:
            raise ConfigError(f"invalid sequence_length_range {self.sequence_length_range}", field="sequence_length_range")
        low, high = self.sequences_per_observation_range
        if low < 1 or high < low:
            raise ConfigError(
                f"invalid sequences_per_observation_range {self.sequences_per_observation_range}",
                field="sequences_per_observation_range",
            )
        if len(set(self.positions)) != len(self.positions):
            raise ConfigError("positions must be distinct", field="positions")
        for position, motifs in self.motifs.items():
            if position not in self.positions:
                raise ConfigError(f"motifs given for unknown position {position!r}", field="motifs")
            for motif in motifs:
                if not is_alphabet(motif.pattern):
                    raise ConfigError(f"motif {motif.pattern!r} uses symbols outside the alphabet", field="motifs")
        if self.base_chain is not None:
            chain = np.asarray(self.base_chain, dtype=float)
            if chain.shape != (N_SYMBOLS, N_SYMBOLS):
                raise ConfigError(f"base_chain must be {N_SYMBOLS}x{N_SYMBOLS}, got {chain.shape}", field="base_chain")
            if (chain < 0).any() or np.abs(chain.sum(axis=1) - 1.0).max() > 1e-9:
                raise ConfigError("base_chain rows must be non-negative and sum to 1", field="base_chain")
        return self

    def chain(self) -> np.ndarray:
        return default_chain() if self.base_chain is None else np.asarray(self.base_chain, dtype=float)


def sample_chain(chain: np.ndarray, length: int, rng: np.random.Generator, start: np.ndarray | None = None) -> str:
    """Draw `length` symbols; the first from `start` (stationary by default)."""
    cumulative = np.cumsum(chain, axis=1)
    start = stationary_distribution(chain) if start is None else start
    draws = rng.random(length)
    state = min(int(np.searchsorted(np.cumsum(start), draws[0], side="right")), N_SYMBOLS - 1)
    symbols = [state]
    for u in draws[1:].tolist():
        state = min(int(np.searchsorted(cumulative[state], u, side="right")), N_SYMBOLS - 1)
        symbols.append(state)
    return "".join(ALPHABET[s] for s in symbols)


def inject_motifs(sequence: str, motifs: list[Motif], rng: np.random.Generator) -> tuple[str, int]:
    """Insert each motif Poisson(rate * len / 100) times at random offsets."""
    base = len(sequence)
    inserted = 0
    for motif in motifs:
        for _ in range(int(rng.poisson(motif.rate * base / 100.0))):
            offset = int(rng.integers(0, len(sequence) + 1))
            sequence = sequence[:offset] + motif.pattern + sequence[offset:]
            inserted += 1
    return sequence, inserted


def _identities(cfg: SynthConfig) -> list[tuple[str, str, str]]:
    """(player_id, match_id, position) in (player_id, match_id) order."""
    identities = []
    player = 0
    for position in cfg.positions:
        for _ in range(cfg.players_per_position):
            player += 1
            for match in range(1, cfg.matches_per_player + 1):
                identities.append((f"P{player:03d}", f"M{match:02d}", position))
    return identities


def generate_cohort(cfg: SynthConfig, threads: int = 1) -> list[ObservationSet]:
    """Generate every observation; observation i draws from default_rng([seed, i])."""
    chain = cfg.chain()
    start = stationary_distribution(chain)
    identities = _identities(cfg)

    def build(job: tuple[int, tuple[str, str, str]]) -> ObservationSet:
        index, (player_id, match_id, position) = job
        rng = np.random.default_rng([cfg.seed, index])
        n_sequences = int(rng.integers(cfg.sequences_per_observation_range[0], cfg.sequences_per_observation_range[1] + 1))
        sequences = []
        injected = 0
        for _ in range(n_sequences):
            length = int(rng.integers(cfg.sequence_length_range[0], cfg.sequence_length_range[1] + 1))
            sequence, count = inject_motifs(sample_chain(chain, length, rng, start), cfg.motifs.get(position, []), rng)
            sequences.append(sequence)
            injected += count
        telemetry.record("synth", observations=1, sequences=n_sequences, motifs=injected)
        return ObservationSet.from_strings(player_id, match_id, position, sequences)

    cohort = parallel_map(build, list(enumerate(identities)), threads)
    logger.info(f"synth: {len(cohort)} observations over {len(cfg.positions)} positions (seed {cfg.seed})")
    return cohort


def realize_streams(
    cohort: list[ObservationSet],
    seed: int = 0,
    thresholds: BandThresholds | None = None,
    inactive: InactiveConfig | None = None,
) -> list[TrackingStream]:
    """Realize each observation as a 10 Hz stream with explicit acceleration and turning angle.

    Every symbol becomes one sample whose signals lie strictly inside the
    symbol's bands; sequences are separated by a standstill long enough to be
    removed as inactive.
    """
    thresholds = thresholds or BandThresholds()
    inactive = inactive or InactiveConfig()
    pause = max(PAUSE_SECONDS, inactive.min_dur + 1.0)
    pause_samples = int(math.ceil(pause / SAMPLE_PERIOD))
    if thresholds.velocity[0].interior(_MARGINS["velocity"])[0] < inactive.v_min:
        raise ConfigError("the slowest band's interior reaches below the inactive velocity", field="v_min")
    intervals = {
        signal: [band.interior(_MARGINS[signal]) for band in getattr(thresholds, signal)]
        for signal in ("velocity", "acceleration", "turning")
    }
    lookup = {
        "velocity": {band: i for i, band in enumerate(VELOCITY_BANDS)},
        "acceleration": {band: i for i, band in enumerate(ACCELERATION_BANDS)},
        "turning": {band: i for i, band in enumerate(TURNING_BANDS)},
    }

    streams = []
    for index, observation in enumerate(cohort):
        rng = np.random.default_rng([seed, index, 1])
        velocity: list[float] = []
        acceleration: list[float] = []
        turning: list[float] = []
        for s, symbols in enumerate(observation.symbols):
            if s:
                velocity.extend([0.0] * pause_samples)
                acceleration.extend([0.0] * pause_samples)
                turning.extend([0.0] * pause_samples)
            for char in symbols:
                unit = decode(char)
                for signal, band, out in (
                    ("velocity", unit.velocity_band, velocity),
                    ("acceleration", unit.acceleration_band, acceleration),
                    ("turning", unit.turning_band, turning),
                ):
                    low, high = intervals[signal][lookup[signal][band]]
                    out.append(float(rng.uniform(low, high)))
        n = len(velocity)
        streams.append(
            TrackingStream(
                player_id=observation.player_id,
                match_id=observation.match_id,
                position=observation.position,
                t=np.round(np.arange(n) * SAMPLE_PERIOD, 6),
                velocity=np.asarray(velocity),
                acceleration=np.asarray(acceleration),
                turning_angle=np.asarray(turning),
            )
        )
    return streams
