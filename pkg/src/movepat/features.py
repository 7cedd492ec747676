"""Binary observation x pattern matrices."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from movepat.exceptions import EmptyInputError, KindMismatchError, UnrecoverableInputError
from movepat.types import MinedObservation, UniquePatternSet

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class FeatureMatrix:
    """values[r, c] == 1 iff pattern columns[c] is in observation rows[r]'s mined set."""

    columns: list[str]
    rows: list[str]
    values: np.ndarray
    labels: list[str]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row_patterns(self, index: int) -> set[str]:
        return {self.columns[c] for c in np.flatnonzero(self.values[index])}

    def column_sums(self) -> dict[str, int]:
        return dict(zip(self.columns, self.values.sum(axis=0).astype(int).tolist()))


def featurize(unique: UniquePatternSet, mined: Sequence[MinedObservation]) -> FeatureMatrix:
    """Build the labeled binary matrix; columns by frequency descending, then ASCII."""
    if not mined:
        raise EmptyInputError("no observations to featurize")
    for observation in mined:
        if observation.algorithm != unique.algorithm:
            raise KindMismatchError(
                f"observation {observation.observation_id} was mined with {observation.algorithm.value}, "
                f"patterns come from {unique.algorithm.value}",
                expected=unique.algorithm.value,
                actual=observation.algorithm.value,
            )
    columns = unique.ranked()
    index = {pattern: c for c, pattern in enumerate(columns)}
    values = np.zeros((len(mined), len(columns)), dtype=np.uint8)
    for r, observation in enumerate(mined):
        for pattern in observation.pattern_set:
            c = index.get(pattern)
            if c is None:
                raise KindMismatchError(f"pattern {pattern!r} of {observation.observation_id} is not in the union")
            values[r, c] = 1
    empty = [columns[c] for c in np.flatnonzero(values.sum(axis=0) == 0)]
    if empty:
        raise ValueError(f"{len(empty)} union patterns appear in no observation, e.g. {empty[0]!r}")
    logger.info(f"{unique.algorithm.value}: feature matrix {values.shape[0]} x {values.shape[1]}")
    return FeatureMatrix(
        columns=columns,
        rows=[observation.observation_id for observation in mined],
        values=values,
        labels=[observation.position for observation in mined],
    )


def write_matrix(matrix: FeatureMatrix, path: str | Path) -> None:
    """CSV: observation_id, label, then one 0/1 column per pattern."""
    keys = pd.DataFrame({"observation_id": matrix.rows, "label": matrix.labels})
    values = pd.DataFrame(matrix.values, columns=matrix.columns)
    # pattern headers may repeat "label"; concat keeps duplicate names
    pd.concat([keys, values], axis=1).to_csv(path, index=False)


def read_matrix(path: str | Path) -> FeatureMatrix:
    """Read a matrix written by write_matrix."""
    try:
        raw = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"{path} is empty") from None
    header = raw.iloc[0].tolist()
    if header[:2] != ["observation_id", "label"]:
        raise UnrecoverableInputError(f"{path} must start with observation_id,label columns")
    body = raw.iloc[1:]
    if body.empty:
        raise EmptyInputError(f"{path} has no rows")
    return FeatureMatrix(
        columns=header[2:],
        rows=body.iloc[:, 0].tolist(),
        values=body.iloc[:, 2:].astype(np.uint8).to_numpy(),
        labels=body.iloc[:, 1].tolist(),
    )
