"""Cluster-then-LCS movement patterns.

Sequences are grouped by average-linkage agglomerative clustering on normalized
edit distance; each cluster's members are folded through pairwise LCS to give
one common subsequence per cluster.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from movepat._parallel import parallel_map
from movepat.types import ClusteringConfig, Pattern, PatternKind

logger = logging.getLogger(__name__)


def levenshtein(x: str, y: str) -> int:
    """Unit-cost edit distance with a two-row table."""
    if len(x) < len(y):
        x, y = y, x
    previous = list(range(len(y) + 1))
    for i, cx in enumerate(x, 1):
        current = [i]
        for j, cy in enumerate(y, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (cx != cy)))
        previous = current
    return previous[-1]


def edit_distance_normalized(x: str, y: str) -> float:
    """Levenshtein distance divided by the longer length; 0 for two empty strings."""
    longest = max(len(x), len(y))
    if longest == 0:
        return 0.0
    return levenshtein(x, y) / longest


def distance_matrix(sequences: Sequence[str], threads: int = 1) -> np.ndarray:
    n = len(sequences)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    values = parallel_map(lambda pair: edit_distance_normalized(sequences[pair[0]], sequences[pair[1]]), pairs, threads)
    matrix = np.zeros((n, n))
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = matrix[j, i] = value
    return matrix


def cluster_sequences(
    sequences: Sequence[str], cfg: ClusteringConfig | None = None, threads: int = 1
) -> list[list[int]]:
    """Average-linkage clustering cut at min(k, n) clusters.

    Returns clusters as sorted member-index lists, ordered by smallest member.
    Among equal-distance merges the lexicographically least (i, j) cluster
    pair wins, with clusters indexed by their smallest member.
    """
    cfg = cfg or ClusteringConfig()
    n = len(sequences)
    if n == 0:
        return []
    target = min(cfg.k, n)
    distances = distance_matrix(sequences, threads)
    np.fill_diagonal(distances, np.inf)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    clusters: list[list[int] | None] = [[i] for i in range(n)]
    active = n
    while active > target:
        # Row-major argmin over the upper triangle picks the least (i, j) on ties.
        flat = int(np.argmin(np.where(upper, distances, np.inf)))
        i, j = divmod(flat, n)
        size_i, size_j = len(clusters[i]), len(clusters[j])
        merged = (size_i * distances[i] + size_j * distances[j]) / (size_i + size_j)
        distances[i, :] = merged
        distances[:, i] = merged
        distances[i, i] = np.inf
        distances[j, :] = np.inf
        distances[:, j] = np.inf
        clusters[i] = sorted(clusters[i] + clusters[j])
        clusters[j] = None
        active -= 1
    return [cluster for cluster in clusters if cluster is not None]


def lcs_pair(x: str, y: str) -> str:
    """A longest common subsequence of x and y.

    Backtrace priority is fixed: take the diagonal on a match, otherwise drop a
    symbol of x when that keeps the optimum, otherwise drop a symbol of y.
    """
    rows, cols = len(x), len(y)
    table = [[0] * (cols + 1) for _ in range(rows + 1)]
    for i in range(1, rows + 1):
        row, above = table[i], table[i - 1]
        cx = x[i - 1]
        for j in range(1, cols + 1):
            if cx == y[j - 1]:
                row[j] = above[j - 1] + 1
            else:
                row[j] = above[j] if above[j] >= row[j - 1] else row[j - 1]
    out = []
    i, j = rows, cols
    while i > 0 and j > 0:
        if x[i - 1] == y[j - 1]:
            out.append(x[i - 1])
            i -= 1
            j -= 1
        elif table[i - 1][j] == table[i][j]:
            i -= 1
        else:
            j -= 1
    return "".join(reversed(out))


def is_subsequence(pattern: str, sequence: str) -> bool:
    it = iter(sequence)
    return all(symbol in it for symbol in pattern)


def fold_cluster(members: Sequence[str]) -> str:
    """Progressive LCS over members ordered by descending length, then ASCII."""
    ordered = sorted(members, key=lambda s: (-len(s), s))
    result = ordered[0]
    for member in ordered[1:]:
        if not result:
            break
        result = lcs_pair(result, member)
    return result


def smp_extract(sequences: Sequence[str], cfg: ClusteringConfig | None = None, threads: int = 1) -> list[Pattern]:
    """One LCS pattern per cluster, with subsequence support over all sequences.

    Empty fold results and patterns longer than cfg.max_len are dropped; clusters
    yielding the same LCS contribute one pattern.
    """
    cfg = cfg or ClusteringConfig()
    if not sequences:
        return []
    clusters = cluster_sequences(sequences, cfg, threads)
    folds = parallel_map(lambda cluster: fold_cluster([sequences[i] for i in cluster]), clusters, threads)
    n = len(sequences)
    patterns: dict[str, Pattern] = {}
    too_long = 0
    for symbols in folds:
        if not symbols or symbols in patterns:
            continue
        if len(symbols) > cfg.max_len:
            too_long += 1
            continue
        support = sum(1 for sequence in sequences if is_subsequence(symbols, sequence))
        patterns[symbols] = Pattern(
            kind=PatternKind.SUBSEQUENCE, symbols=symbols, support_count=support, support_fraction=support / n
        )
    if too_long:
        logger.debug(f"smp: dropped {too_long} cluster patterns longer than {cfg.max_len}")
    return sorted(patterns.values(), key=lambda p: (-p.support_count, len(p.symbols), p.symbols))
