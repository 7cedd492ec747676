"""End-to-end run: discretize -> mine -> compare -> featurize -> classify.

Every stage writes its artifacts into the output directory before the next one
starts, so a failing run leaves the earlier stages' files behind.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import pandas as pd

from movepat import telemetry
from movepat._version import __version__
from movepat.analysis import compare, jaccard_matrix, overlap_rows, union_patterns
from movepat.config import PipelineConfig
from movepat.exceptions import EmptyInputError, StageError
from movepat.features import FeatureMatrix, featurize, write_matrix
from movepat.ingest import discretize_streams, read_observations, read_tracking_csv, write_observations
from movepat.mining import mine_observations, write_patterns
from movepat.synth import generate_cohort
from movepat.types import Algorithm, CvReport, MinedObservation, ModelName, ObservationSet, UniquePatternSet
from movepat.validation import cross_validate, importance_for_matrix

logger = logging.getLogger(__name__)

SUMMARY_FILE = "summary.json"
TELEMETRY_FILE = "telemetry.json"
FLOAT_DIGITS = 6


@dataclass
class PipelineResult:
    """Result of one pipeline run."""

    output_dir: Path
    summary: dict[str, object]
    artifacts: dict[str, Path] = field(default_factory=dict)
    reports: list[CvReport] = field(default_factory=list)


@contextmanager
def _stage(name: str) -> Iterator[None]:
    """Re-raise any failure inside the block as a StageError tagged with the stage."""
    logger.info(f"stage {name}")
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(f"{type(exc).__name__}: {exc}", stage=name) from exc


def _rounded(value: object) -> object:
    if isinstance(value, float):
        return round(value, FLOAT_DIGITS)
    if isinstance(value, dict):
        return {str(key): _rounded(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(item) for item in value]
    return value


def _write_json(payload: object, path: Path) -> None:
    path.write_text(json.dumps(_rounded(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def best_models(results: dict[str, dict[str, dict[str, float]]]) -> dict[str, str]:
    """Per algorithm, the model with the highest mean accuracy; ties follow ModelName order."""
    order = [model.value for model in ModelName]
    best = {}
    for algorithm, per_model in results.items():
        ranked = sorted(per_model, key=lambda m: (-round(per_model[m]["accuracy"], FLOAT_DIGITS), order.index(m)))
        best[algorithm] = ranked[0]
    return best


def _load_observations(cfg: PipelineConfig) -> list[ObservationSet]:
    if cfg.input is not None:
        streams = read_tracking_csv(cfg.input)
        return discretize_streams(streams, cfg.discretize.thresholds, cfg.discretize.inactive, cfg.threads)
    if cfg.sequences is not None:
        return read_observations(cfg.sequences)
    return generate_cohort(cfg.synth_config(), cfg.threads)


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every stage and write summary.json plus per-stage artifacts."""
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    telemetry.reset_telemetry()
    artifacts: dict[str, Path] = {}
    try:
        return _run(cfg, out, artifacts)
    finally:
        telemetry_path = out / TELEMETRY_FILE
        telemetry_path.write_text(json.dumps(telemetry.snapshot(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _run(cfg: PipelineConfig, out: Path, artifacts: dict[str, Path]) -> PipelineResult:
    with _stage("discretize"):
        observations = _load_observations(cfg)
        if not observations:
            raise EmptyInputError("no observation has an active sequence")
        artifacts["sequences"] = out / "sequences.jsonl"
        write_observations(observations, artifacts["sequences"])

    mined: dict[Algorithm, list[MinedObservation]] = {}
    with _stage("mine"):
        for algorithm in cfg.algorithms:
            mined[algorithm] = mine_observations(observations, algorithm, cfg.miner, cfg.clustering, cfg.threads)
            artifacts[f"patterns_{algorithm.value}"] = out / f"patterns_{algorithm.value}.csv"
            write_patterns(mined[algorithm], artifacts[f"patterns_{algorithm.value}"])

    unique: dict[Algorithm, UniquePatternSet] = {}
    comparisons: dict[str, dict[str, object]] = {}
    with _stage("compare"):
        for algorithm, items in mined.items():
            unique[algorithm] = union_patterns(items)
        similarity = jaccard_matrix(list(unique.values()))
        for a, b in combinations(cfg.algorithms, 2):
            report = compare(mined[a], mined[b], top=cfg.compare.top)
            key = f"{a.value}_vs_{b.value}"
            artifacts[f"compare_{key}"] = out / f"compare_{key}.json"
            _write_json(report, artifacts[f"compare_{key}"])
            artifacts[f"overlap_{key}"] = out / f"overlap_{key}.csv"
            pd.DataFrame(overlap_rows(report), columns=["end", "pattern", "freq_a", "freq_b"]).to_csv(
                artifacts[f"overlap_{key}"], index=False
            )
            comparisons[f"{a.value}|{b.value}"] = {
                "overlap": report["overlap"],
                "most_frequent_overlap": len(report["most_frequent_overlap"]),
                "least_frequent_overlap": len(report["least_frequent_overlap"]),
            }

    matrices: dict[Algorithm, FeatureMatrix] = {}
    with _stage("featurize"):
        for algorithm in cfg.algorithms:
            matrices[algorithm] = featurize(unique[algorithm], mined[algorithm])
            artifacts[f"matrix_{algorithm.value}"] = out / f"matrix_{algorithm.value}.csv"
            write_matrix(matrices[algorithm], artifacts[f"matrix_{algorithm.value}"])

    reports: list[CvReport] = []
    results: dict[str, dict[str, dict[str, float]]] = {}
    importance: dict[str, list[dict[str, object]]] = {}
    with _stage("classify"):
        for algorithm, matrix in matrices.items():
            results[algorithm.value] = {}
            for model in cfg.classify.models:
                report = cross_validate(model, matrix, cfg.classify.cv, algorithm=algorithm.value, threads=cfg.threads)
                reports.append(report)
                results[algorithm.value][model.value] = {
                    "accuracy": report.accuracy,
                    "precision": report.precision,
                    "recall": report.recall,
                    "f1": report.f1,
                }
            if cfg.classify.importance:
                ranking = importance_for_matrix(matrix, cfg.classify.importance)
                importance[algorithm.value] = [entry.model_dump() for entry in ranking.entries]
        artifacts["cv_reports"] = out / "cv_reports.json"
        _write_json([report.model_dump(mode="json") for report in reports], artifacts["cv_reports"])

    summary: dict[str, object] = {
        "version": __version__,
        "settings": {
            "seed": cfg.seed,
            "algorithms": [algorithm.value for algorithm in cfg.algorithms],
            "miner": cfg.miner.model_dump(),
            "clustering": cfg.clustering.model_dump(),
            "compare": cfg.compare.model_dump(),
            "cv": cfg.classify.cv.model_dump(),
        },
        "observations": {
            "count": len(observations),
            "sequences": sum(len(observation.sequences) for observation in observations),
            "by_position": dict(sorted(Counter(observation.position for observation in observations).items())),
        },
        "patterns": {
            algorithm.value: {
                "unique": len(unique[algorithm]),
                "mined": sum(len(item.patterns) for item in mined[algorithm]),
            }
            for algorithm in cfg.algorithms
        },
        "jaccard": similarity,
        "overlaps": comparisons,
        "results": results,
        "best_model": best_models(results),
        "importance": importance,
        "cv_reports": [report.model_dump(mode="json") for report in reports],
        "artifacts": {name: path.name for name, path in sorted(artifacts.items())},
    }
    artifacts["summary"] = out / SUMMARY_FILE
    _write_json(summary, artifacts["summary"])
    logger.info(f"pipeline finished, summary at {artifacts['summary']}")
    return PipelineResult(output_dir=out, summary=summary, artifacts=artifacts, reports=reports)
