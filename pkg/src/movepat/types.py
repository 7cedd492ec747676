"""movepat domain types"""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, Field, model_validator

# Sampling period of the tracking devices (10 Hz)
SAMPLE_PERIOD = 0.1
# Tolerance for comparing timestamps on the 0.1 s grid
GRID_TOLERANCE = 1e-6


class PatternKind(str, Enum):
    """Shape of a mined pattern"""

    CONTIGUOUS = "contiguous"  # strictly adjacent symbols, repeats allowed
    ITEMSET = "itemset"  # distinct symbols, ASCII ascending
    SUBSEQUENCE = "subsequence"  # ordered symbols, omissions allowed


class Algorithm(str, Enum):
    """Pattern mining algorithm"""

    LCCSPM = "lccspm"
    APRIORICLOSE = "aprioriclose"
    SMP_LCS = "smp-lcs"

    @property
    def kind(self) -> PatternKind:
        return ALGORITHM_KINDS[self]

    @classmethod
    def for_kind(cls, kind: PatternKind) -> Algorithm:
        for algorithm, algorithm_kind in ALGORITHM_KINDS.items():
            if algorithm_kind == kind:
                return algorithm
        raise ValueError(f"No algorithm produces {kind.value} patterns")


ALGORITHM_KINDS: dict[Algorithm, PatternKind] = {
    Algorithm.LCCSPM: PatternKind.CONTIGUOUS,
    Algorithm.APRIORICLOSE: PatternKind.ITEMSET,
    Algorithm.SMP_LCS: PatternKind.SUBSEQUENCE,
}


class ModelName(str, Enum):
    """Classifier family"""

    LOGREG = "logreg"
    GNB = "gnb"
    CART = "cart"
    RF = "rf"
    MLP = "mlp"


class OverlapEnd(str, Enum):
    """Which end of a frequency ranking to take"""

    MOST = "most"
    LEAST = "least"


def observation_key(player_id: str, match_id: str) -> str:
    """Build the observation id used in pattern and matrix files."""
    return f"{player_id}@{match_id}"


# =============================================================================
# Tracking data and sequences
# =============================================================================


class TrackingSample(BaseModel):
    """One 10 Hz tracking row. Missing signals are derived during ingestion."""

    t: float
    velocity: float
    acceleration: float | None = None
    turning_angle: float | None = None
    heading: float | None = None
    player_id: str = ""
    match_id: str = ""
    position: str = ""


class MovementSequence(BaseModel):
    """Movement-unit characters of one active period"""

    symbols: str = Field(min_length=1)
    start_t: float | None = None  # None when read back from JSON-lines
    end_t: float | None = None

    @model_validator(mode="after")
    def _check_span(self) -> MovementSequence:
        if self.start_t is not None and self.end_t is not None:
            expected = SAMPLE_PERIOD * (len(self.symbols) - 1)
            if abs((self.end_t - self.start_t) - expected) > 1e-6 * max(1, len(self.symbols)):
                raise ValueError(
                    f"span {self.start_t}..{self.end_t} does not match {len(self.symbols)} symbols"
                )
        return self


class ObservationSet(BaseModel):
    """All movement sequences of one player in one match"""

    player_id: str
    match_id: str
    position: str
    sequences: list[MovementSequence] = Field(min_length=1)

    @property
    def observation_id(self) -> str:
        return observation_key(self.player_id, self.match_id)

    @property
    def symbols(self) -> list[str]:
        return [sequence.symbols for sequence in self.sequences]

    @classmethod
    def from_strings(cls, player_id: str, match_id: str, position: str, sequences: list[str]) -> ObservationSet:
        return cls(
            player_id=player_id,
            match_id=match_id,
            position=position,
            sequences=[MovementSequence(symbols=s) for s in sequences],
        )


# =============================================================================
# Mining
# =============================================================================


class MinerConfig(BaseModel):
    """Support and length bounds shared by the miners"""

    min_support: float = Field(default=0.05, gt=0.0, le=1.0)
    max_len: int = Field(default=20, ge=1)

    def threshold(self, n: int) -> int:
        """Absolute support threshold: ceil(min_support * n), at least 1."""
        return max(1, math.ceil(self.min_support * n - 1e-9))


class ClusteringConfig(BaseModel):
    """Settings of the cluster-then-LCS miner"""

    k: int = Field(default=25, ge=1)
    linkage: str = Field(default="average", pattern="^average$")
    distance: str = Field(default="normalized_edit", pattern="^normalized_edit$")
    max_len: int = Field(default=20, ge=1)  # longer LCS results are discarded


class Pattern(BaseModel):
    """A mined pattern with its sequence-level support"""

    kind: PatternKind
    symbols: str = Field(min_length=1)
    support_count: int = Field(ge=1)
    support_fraction: float = Field(gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_itemset_order(self) -> Pattern:
        if self.kind == PatternKind.ITEMSET:
            if any(a >= b for a, b in zip(self.symbols, self.symbols[1:])):
                raise ValueError(f"itemset {self.symbols!r} is not strictly ASCII-ascending")
        return self


class MinedObservation(BaseModel):
    """One observation's mined pattern set for one algorithm"""

    observation_id: str
    algorithm: Algorithm
    position: str = ""
    n_sequences: int = Field(default=0, ge=0)
    patterns: list[Pattern] = Field(default_factory=list)

    @property
    def pattern_set(self) -> frozenset[str]:
        return frozenset(pattern.symbols for pattern in self.patterns)


# =============================================================================
# Analysis
# =============================================================================


class UniquePatternSet(BaseModel):
    """Union of one algorithm's per-observation pattern sets"""

    algorithm: Algorithm
    frequency: dict[str, int] = Field(default_factory=dict)  # pattern -> number of observations

    @model_validator(mode="after")
    def _check_frequencies(self) -> UniquePatternSet:
        for pattern, count in self.frequency.items():
            if count < 1:
                raise ValueError(f"pattern {pattern!r} has frequency {count}")
        return self

    @property
    def patterns(self) -> frozenset[str]:
        return frozenset(self.frequency)

    def ranked(self) -> list[str]:
        """Patterns by frequency descending, then ASCII."""
        return sorted(self.frequency, key=lambda p: (-self.frequency[p], p))

    def __len__(self) -> int:
        return len(self.frequency)


class OverlapEntry(BaseModel):
    pattern: str
    freq_a: int
    freq_b: int


class PositionOverlap(BaseModel):
    """Split of one algorithm's patterns between two positions"""

    algorithm: Algorithm
    first: str
    second: str
    only_first: dict[str, int] = Field(default_factory=dict)
    only_second: dict[str, int] = Field(default_factory=dict)
    shared: dict[str, tuple[int, int]] = Field(default_factory=dict)  # pattern -> (freq first, freq second)


# =============================================================================
# Classification
# =============================================================================


class CvConfig(BaseModel):
    """K-fold settings"""

    n_splits: int = Field(default=10, ge=2)
    shuffle: bool = True
    seed: int = 10


class FoldMetrics(BaseModel):
    fold: int
    n_test: int
    accuracy: float = Field(ge=0.0, le=100.0)  # percent
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f1: float = Field(ge=0.0, le=1.0)


class CvReport(BaseModel):
    """Cross-validated performance of one model on one algorithm's matrix"""

    model: ModelName
    algorithm: str
    folds: list[FoldMetrics]
    accuracy: float
    precision: float
    recall: float
    f1: float


class ImportanceEntry(BaseModel):
    pattern: str
    score: float = Field(ge=0.0)
    gloss: list[str] = Field(default_factory=list)


class ImportanceRanking(BaseModel):
    """Patterns ranked by absolute linear weight"""

    entries: list[ImportanceEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_order(self) -> ImportanceRanking:
        scores = [entry.score for entry in self.entries]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("importance entries must be in descending score order")
        return self
