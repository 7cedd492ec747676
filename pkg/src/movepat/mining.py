"""Per-observation mining across the three algorithms, and the pattern CSV format."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

import pandas as pd

from movepat import telemetry
from movepat._parallel import parallel_map
from movepat.contiguous import mine_closed_contiguous
from movepat.exceptions import EmptyInputError, KindMismatchError, UnrecoverableInputError
from movepat.itemset import mine_closed_itemsets, to_transactions
from movepat.smp import smp_extract
from movepat.types import (
    Algorithm,
    ClusteringConfig,
    MinedObservation,
    MinerConfig,
    ObservationSet,
    Pattern,
    PatternKind,
)

logger = logging.getLogger(__name__)

PATTERN_COLUMNS = ["observation_id", "kind", "pattern", "support_count", "support_fraction"]


def mine_sequences(
    sequences: Sequence[str],
    algorithm: Algorithm,
    miner: MinerConfig | None = None,
    clustering: ClusteringConfig | None = None,
) -> list[Pattern]:
    """Mine one sequence set with the chosen algorithm."""
    miner = miner or MinerConfig()
    if algorithm == Algorithm.LCCSPM:
        return mine_closed_contiguous(sequences, miner)
    if algorithm == Algorithm.APRIORICLOSE:
        return mine_closed_itemsets(to_transactions(sequences), miner)
    clustering = clustering or ClusteringConfig(max_len=miner.max_len)
    return smp_extract(sequences, clustering)


def mine_observations(
    observations: Iterable[ObservationSet],
    algorithm: Algorithm,
    miner: MinerConfig | None = None,
    clustering: ClusteringConfig | None = None,
    threads: int = 1,
) -> list[MinedObservation]:
    """Mine every observation independently; output follows input order."""
    observations = list(observations)
    if not observations:
        raise EmptyInputError("no observations to mine")

    def run(observation: ObservationSet) -> MinedObservation:
        patterns = mine_sequences(observation.symbols, algorithm, miner, clustering)
        telemetry.record(f"mine.{algorithm.value}", observations=1, patterns=len(patterns))
        return MinedObservation(
            observation_id=observation.observation_id,
            algorithm=algorithm,
            position=observation.position,
            n_sequences=len(observation.sequences),
            patterns=patterns,
        )

    mined = parallel_map(run, observations, threads)
    logger.info(f"{algorithm.value}: mined {sum(len(m.patterns) for m in mined)} patterns over {len(mined)} observations")
    return mined


def write_patterns(mined: Iterable[MinedObservation], path: str | Path) -> None:
    """Write mined patterns, one row per (observation, pattern)."""
    rows = [
        {
            "observation_id": observation.observation_id,
            "kind": pattern.kind.value,
            "pattern": pattern.symbols,
            "support_count": pattern.support_count,
            "support_fraction": pattern.support_fraction,
        }
        for observation in mined
        for pattern in observation.patterns
    ]
    pd.DataFrame(rows, columns=PATTERN_COLUMNS).to_csv(path, index=False)


def read_patterns(path: str | Path) -> list[MinedObservation]:
    """Read a pattern CSV back into per-observation mined sets (positions unset)."""
    try:
        frame = pd.read_csv(path, dtype={"observation_id": str, "kind": str, "pattern": str}, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"{path} is empty") from None
    missing = [column for column in PATTERN_COLUMNS if column not in frame.columns]
    if missing:
        raise UnrecoverableInputError(f"{path} lacks columns: {', '.join(missing)}")
    if frame.empty:
        raise EmptyInputError(f"{path} holds no patterns")

    mined = []
    for observation_id, group in frame.groupby("observation_id", sort=True):
        kinds = set(group["kind"])
        if len(kinds) != 1:
            raise KindMismatchError(f"observation {observation_id} mixes pattern kinds {sorted(kinds)}")
        kind = PatternKind(kinds.pop())
        patterns = [
            Pattern(
                kind=kind,
                symbols=row.pattern,
                support_count=int(row.support_count),
                support_fraction=float(row.support_fraction),
            )
            for row in group.itertuples(index=False)
        ]
        mined.append(
            MinedObservation(observation_id=str(observation_id), algorithm=Algorithm.for_kind(kind), patterns=patterns)
        )
    return mined


def attach_observations(mined: Sequence[MinedObservation], observations: Sequence[ObservationSet]) -> list[MinedObservation]:
    """Align mined sets with observations: copy positions, add empty sets for pattern-less observations.

    Observations present in the pattern file but absent from `observations` are dropped with a warning.
    """
    if not mined:
        raise EmptyInputError("no mined observations")
    algorithm = mined[0].algorithm
    by_id = {item.observation_id: item for item in mined}
    aligned = []
    for observation in observations:
        item = by_id.pop(observation.observation_id, None)
        if item is None:
            item = MinedObservation(observation_id=observation.observation_id, algorithm=algorithm)
        aligned.append(
            item.model_copy(update={"position": observation.position, "n_sequences": len(observation.sequences)})
        )
    if by_id:
        logger.warning(f"{len(by_id)} mined observations have no matching sequences and were dropped")
    return aligned
