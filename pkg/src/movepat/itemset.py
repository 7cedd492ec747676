"""Frequent closed itemset mining over per-sequence symbol sets.

Produces the same closed itemsets as AprioriClose, but walks the closed
lattice directly: each closed set is reached once by prefix-preserving closure
extension, with transaction sets kept as integer bitmasks.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from movepat.exceptions import EmptyInputError
from movepat.types import MinerConfig, Pattern, PatternKind

logger = logging.getLogger(__name__)


def to_transactions(sequences: Sequence[str]) -> list[frozenset[str]]:
    """One transaction per sequence: its distinct symbols."""
    if not sequences:
        raise EmptyInputError("cannot build transactions from an empty sequence set")
    return [frozenset(sequence) for sequence in sequences]


def support_itemset(items: str | frozenset[str], transactions: Sequence[frozenset[str]]) -> int:
    """Number of transactions containing every item."""
    wanted = frozenset(items)
    return sum(1 for transaction in transactions if wanted <= transaction)


def mine_closed_itemsets(transactions: Sequence[frozenset[str]], cfg: MinerConfig | None = None) -> list[Pattern]:
    """Mine frequent closed itemsets with at most cfg.max_len items.

    An itemset is closed when no strict superset has the same support. Patterns
    are rendered ASCII-ascending and returned by descending support, then
    length, then ASCII.
    """
    cfg = cfg or MinerConfig()
    if not transactions:
        raise EmptyInputError("cannot mine an empty transaction set")
    n = len(transactions)
    threshold = cfg.threshold(n)

    items = sorted(set().union(*transactions))
    tidsets = [0] * len(items)
    index_of = {item: index for index, item in enumerate(items)}
    for tid, transaction in enumerate(transactions):
        for item in transaction:
            tidsets[index_of[item]] |= 1 << tid
    everything = (1 << n) - 1

    def closure(tids: int) -> tuple[int, ...]:
        return tuple(index for index, mask in enumerate(tidsets) if mask & tids == tids)

    found: list[tuple[tuple[int, ...], int]] = []

    def expand(closed: tuple[int, ...], tids: int, core: int) -> None:
        members = set(closed)
        for item in range(core + 1, len(items)):
            if item in members:
                continue
            extended = tids & tidsets[item]
            support = extended.bit_count()
            if support < threshold:
                continue
            candidate = closure(extended)
            # Prefix-preserving check: nothing below `item` may be added.
            if [i for i in candidate if i < item] != [i for i in closed if i < item]:
                continue
            if len(candidate) > cfg.max_len:
                continue  # every descendant is a superset, so also too long
            found.append((candidate, support))
            expand(candidate, extended, item)

    root = closure(everything)
    if root and len(root) <= cfg.max_len:
        found.append((root, n))
    if len(root) <= cfg.max_len:
        expand(root, everything, -1)

    patterns = [
        Pattern(
            kind=PatternKind.ITEMSET,
            symbols="".join(items[index] for index in closed),
            support_count=support,
            support_fraction=support / n,
        )
        for closed, support in found
    ]
    patterns.sort(key=lambda p: (-p.support_count, len(p.symbols), p.symbols))
    logger.debug(f"closed itemsets: {len(patterns)} patterns from {n} transactions (threshold {threshold})")
    return patterns
