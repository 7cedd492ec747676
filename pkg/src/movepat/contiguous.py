"""Closed contiguous sequential pattern mining with a length bound.

Support is sequence-level: a pattern's support is the number of sequences that
contain it as a substring at least once. A frequent pattern is closed when no
contiguous super-pattern of length <= max_len has the same support.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence

from movepat.exceptions import EmptyInputError
from movepat.types import MinerConfig, Pattern, PatternKind

logger = logging.getLogger(__name__)


def support_contiguous(pattern: str, sequences: Sequence[str]) -> int:
    """Number of sequences containing pattern as a contiguous substring."""
    if not pattern:
        raise ValueError("pattern must be non-empty")
    return sum(1 for sequence in sequences if pattern in sequence)


def _frequent_levels(sequences: Sequence[str], threshold: int, max_len: int) -> list[dict[str, int]]:
    """Frequent substrings grouped by length (index k-1 holds length k).

    A length-k candidate is only counted when both of its (k-1)-long
    borders are frequent.
    """
    counts: Counter[str] = Counter()
    for sequence in sequences:
        counts.update(set(sequence))
    level = {symbol: count for symbol, count in counts.items() if count >= threshold}
    levels = []
    k = 1
    while level:
        levels.append(level)
        if k == max_len:
            break
        k += 1
        counts = Counter()
        for sequence in sequences:
            seen = set()
            for start in range(len(sequence) - k + 1):
                candidate = sequence[start : start + k]
                if candidate[:-1] in level and candidate[1:] in level:
                    seen.add(candidate)
            counts.update(seen)
        level = {pattern: count for pattern, count in counts.items() if count >= threshold}
    return levels


def canonical_order(pattern: Pattern) -> tuple[int, int, str]:
    """Descending support, then ascending length, then ASCII."""
    return (-pattern.support_count, len(pattern.symbols), pattern.symbols)


def mine_closed_contiguous(sequences: Sequence[str], cfg: MinerConfig | None = None) -> list[Pattern]:
    """Mine frequent closed contiguous patterns of length <= cfg.max_len.

    Returns patterns in canonical order. Duplicate sequences count separately.
    """
    cfg = cfg or MinerConfig()
    if not sequences:
        raise EmptyInputError("cannot mine an empty sequence set")
    n = len(sequences)
    threshold = cfg.threshold(n)
    levels = _frequent_levels(sequences, threshold, cfg.max_len)

    patterns = []
    for index, level in enumerate(levels):
        # Best support among one-symbol extensions; equal support means absorbed.
        extension: dict[str, int] = {}
        if index + 1 < len(levels):
            for longer, count in levels[index + 1].items():
                for border in (longer[:-1], longer[1:]):
                    if count > extension.get(border, 0):
                        extension[border] = count
        for symbols, count in level.items():
            if extension.get(symbols, 0) == count:
                continue
            patterns.append(
                Pattern(kind=PatternKind.CONTIGUOUS, symbols=symbols, support_count=count, support_fraction=count / n)
            )
    patterns.sort(key=canonical_order)
    logger.debug(f"closed contiguous: {len(patterns)} patterns from {n} sequences (threshold {threshold})")
    return patterns
