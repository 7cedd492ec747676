"""Pattern-set analysis: unions, Jaccard similarity, top/bottom-k and positional overlap.

Frequencies are observation-level: the number of observations whose mined set
contains the pattern. All matching is exact string identity.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence
from itertools import combinations

from movepat.exceptions import EmptyInputError, KindMismatchError, MissingClassError, UndefinedInputError
from movepat.types import MinedObservation, OverlapEnd, OverlapEntry, PositionOverlap, UniquePatternSet

logger = logging.getLogger(__name__)


def union_patterns(mined: Sequence[MinedObservation]) -> UniquePatternSet:
    """Union of per-observation pattern sets with observation-level frequencies."""
    if not mined:
        raise EmptyInputError("cannot union zero observations")
    algorithm = mined[0].algorithm
    frequency: Counter[str] = Counter()
    for observation in mined:
        if observation.algorithm != algorithm:
            raise KindMismatchError(
                f"observation {observation.observation_id} was mined with {observation.algorithm.value}, "
                f"expected {algorithm.value}",
                expected=algorithm.value,
                actual=observation.algorithm.value,
            )
        frequency.update(observation.pattern_set)
    return UniquePatternSet(algorithm=algorithm, frequency=dict(sorted(frequency.items())))


def jaccard(x: set[str] | frozenset[str], y: set[str] | frozenset[str]) -> float:
    """|X ∩ Y| / |X ∪ Y|."""
    union = len(x | y)
    if union == 0:
        raise UndefinedInputError("Jaccard similarity of two empty sets is undefined")
    return len(x & y) / union


def jaccard_matrix(sets: Sequence[UniquePatternSet]) -> dict[str, float]:
    """Jaccard similarity of every algorithm pair, keyed "a|b"."""
    return {
        f"{a.algorithm.value}|{b.algorithm.value}": jaccard(a.patterns, b.patterns) for a, b in combinations(sets, 2)
    }


def top_k(unique: UniquePatternSet, k: int, end: OverlapEnd = OverlapEnd.MOST) -> list[str]:
    """The k most or least frequent patterns; ties broken ASCII ascending."""
    if k < 1:
        raise ValueError("k must be at least 1")
    sign = -1 if end == OverlapEnd.MOST else 1
    return sorted(unique.frequency, key=lambda p: (sign * unique.frequency[p], p))[:k]


def overlap_topk(a: UniquePatternSet, b: UniquePatternSet, k: int, end: OverlapEnd = OverlapEnd.MOST) -> list[OverlapEntry]:
    """Patterns in both A's and B's top-k (or bottom-k), ordered by A's frequency."""
    shared = set(top_k(a, k, end)) & set(top_k(b, k, end))
    ordered = sorted(shared, key=lambda p: (-a.frequency[p], p))
    return [OverlapEntry(pattern=p, freq_a=a.frequency[p], freq_b=b.frequency[p]) for p in ordered]


def overlap_summary(a: UniquePatternSet, b: UniquePatternSet) -> dict[str, float | int]:
    """Size of the exact overlap and its share of each set, in percent."""
    shared = len(a.patterns & b.patterns)
    return {
        "shared": shared,
        "size_a": len(a),
        "size_b": len(b),
        "percent_of_a": 100.0 * shared / len(a) if len(a) else 0.0,
        "percent_of_b": 100.0 * shared / len(b) if len(b) else 0.0,
    }


def _positions(mined: Sequence[MinedObservation]) -> list[str]:
    return sorted({observation.position for observation in mined})


def position_overlap(mined: Sequence[MinedObservation], positions: tuple[str, str] | None = None) -> PositionOverlap:
    """Split one algorithm's patterns into first-only, second-only and shared.

    Without explicit positions the two labels are taken from the data (sorted);
    a single observed label yields an empty second position. Explicitly named
    positions must each have at least one observation.
    """
    if not mined:
        raise EmptyInputError("no observations")
    if positions is None:
        observed = _positions(mined)
        if len(observed) > 2:
            raise ValueError(f"expected at most two positions, found {observed}")
        first, second = (observed + [""])[:2]
    else:
        first, second = positions
        for label in positions:
            if not any(observation.position == label for observation in mined):
                raise MissingClassError(f"no observations for position {label!r}", label=label)

    per_position = {}
    for label in (first, second):
        members = [observation for observation in mined if observation.position == label]
        per_position[label] = union_patterns(members).frequency if members else {}
    freq_first, freq_second = per_position[first], per_position[second]
    if first == second:
        freq_second = {}

    return PositionOverlap(
        algorithm=mined[0].algorithm,
        first=first,
        second=second,
        only_first={p: c for p, c in freq_first.items() if p not in freq_second},
        only_second={p: c for p, c in freq_second.items() if p not in freq_first},
        shared={p: (c, freq_second[p]) for p, c in freq_first.items() if p in freq_second},
    )


def overlap_by_position(
    entries: Sequence[OverlapEntry],
    mined_a: Sequence[MinedObservation],
    mined_b: Sequence[MinedObservation],
) -> dict[str, dict[str, tuple[int, int]]]:
    """For each overlapped pattern: position -> (frequency under A, frequency under B)."""
    positions = sorted(set(_positions(mined_a)) | set(_positions(mined_b)))
    wanted = {entry.pattern for entry in entries}

    def counts(mined: Sequence[MinedObservation]) -> dict[str, Counter[str]]:
        table = {position: Counter() for position in positions}
        for observation in mined:
            table[observation.position].update(observation.pattern_set & wanted)
        return table

    table_a, table_b = counts(mined_a), counts(mined_b)
    return {
        entry.pattern: {
            position: (table_a[position][entry.pattern], table_b[position][entry.pattern]) for position in positions
        }
        for entry in entries
    }


def compare(
    mined_a: Sequence[MinedObservation],
    mined_b: Sequence[MinedObservation],
    top: int = 50,
    with_positions: bool = True,
) -> dict[str, object]:
    """Comparison report of two algorithms' mined sets (JSON-ready)."""
    a, b = union_patterns(mined_a), union_patterns(mined_b)
    most = overlap_topk(a, b, top, OverlapEnd.MOST)
    least = overlap_topk(a, b, top, OverlapEnd.LEAST)
    report: dict[str, object] = {
        "a": a.algorithm.value,
        "b": b.algorithm.value,
        "jaccard": jaccard(a.patterns, b.patterns),
        "overlap": overlap_summary(a, b),
        "top": top,
        "most_frequent_overlap": [entry.model_dump() for entry in most],
        "least_frequent_overlap": [entry.model_dump() for entry in least],
    }
    if with_positions:
        report["positions"] = {
            a.algorithm.value: position_overlap(mined_a).model_dump(mode="json"),
            b.algorithm.value: position_overlap(mined_b).model_dump(mode="json"),
        }
        report["most_frequent_overlap_by_position"] = overlap_by_position(most, mined_a, mined_b)
    logger.info(f"{a.algorithm.value} vs {b.algorithm.value}: jaccard {report['jaccard']:.4f}")
    return report


def overlap_rows(report: dict[str, object]) -> list[dict[str, object]]:
    """Flatten a compare report's overlap lists into plot-ready rows."""
    rows = []
    for end, key in (("most", "most_frequent_overlap"), ("least", "least_frequent_overlap")):
        for entry in report[key]:
            rows.append({"end": end, "pattern": entry["pattern"], "freq_a": entry["freq_a"], "freq_b": entry["freq_b"]})
    return rows
