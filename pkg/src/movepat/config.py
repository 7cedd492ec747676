"""Pipeline configuration: pydantic stage configs and the JSON/YAML loader."""

from __future__ import annotations

import json
import os
import warnings
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError, model_validator

from movepat.alphabet import BandThresholds
from movepat.exceptions import ConfigError
from movepat.ingest import InactiveConfig
from movepat.synth import SynthConfig
from movepat.types import Algorithm, ClusteringConfig, CvConfig, MinerConfig, ModelName

OUTPUT_DIR_ENV_VAR = "MOVEPAT_OUTPUT_DIR"
THREADS_ENV_VAR = "MOVEPAT_THREADS"
DEFAULT_OUTPUT_DIR = "movepat-out"
DEFAULT_THREADS = 1


def resolve_threads(configured: int | None = None) -> int:
    """Worker cap from explicit config, MOVEPAT_THREADS, or the default."""
    if configured is not None:
        if configured < 1:
            raise ConfigError(f"threads must be at least 1; got {configured}", field="threads")
        return configured
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_THREADS
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        warnings.warn(
            f"{THREADS_ENV_VAR}={raw!r} is invalid. Expected a positive integer. Falling back to {DEFAULT_THREADS}.",
            stacklevel=2,
        )
        return DEFAULT_THREADS
    return threads


def resolve_output_dir(configured: str | Path | None = None) -> Path:
    """Output directory from explicit config, MOVEPAT_OUTPUT_DIR, or the default."""
    if configured is not None:
        return Path(configured)
    return Path(os.environ.get(OUTPUT_DIR_ENV_VAR) or DEFAULT_OUTPUT_DIR)


class DiscretizeConfig(BaseModel):
    thresholds: BandThresholds = Field(default_factory=BandThresholds)
    inactive: InactiveConfig = Field(default_factory=InactiveConfig)


class CompareConfig(BaseModel):
    top: int = Field(default=50, ge=1)


class ClassifyConfig(BaseModel):
    cv: CvConfig = Field(default_factory=CvConfig)
    models: list[ModelName] = Field(default_factory=lambda: list(ModelName), min_length=1)
    importance: int = Field(default=20, ge=0)  # 0 disables the ranking


class PipelineConfig(BaseModel):
    """End-to-end run. Exactly one source: a tracking CSV, a sequence JSONL, or a synthetic cohort."""

    input: Path | None = None
    sequences: Path | None = None
    synth: SynthConfig | None = None
    output_dir: Path = Field(default_factory=resolve_output_dir)
    seed: int | None = None  # overrides synth.seed when set
    threads: int = Field(default_factory=resolve_threads, ge=1)
    algorithms: list[Algorithm] = Field(default_factory=lambda: list(Algorithm), min_length=1)
    discretize: DiscretizeConfig = Field(default_factory=DiscretizeConfig)
    miner: MinerConfig = Field(default_factory=MinerConfig)
    clustering: ClusteringConfig = Field(default_factory=ClusteringConfig)
    compare: CompareConfig = Field(default_factory=CompareConfig)
    classify: ClassifyConfig = Field(default_factory=ClassifyConfig)

    @model_validator(mode="after")
    def _check_sources(self) -> PipelineConfig:
        sources = [name for name in ("input", "sequences", "synth") if getattr(self, name) is not None]
        if len(sources) != 1:
            raise ConfigError(
                f"exactly one of input, sequences or synth must be set; got {sources or 'none'}", field="input"
            )
        for name in ("input", "sequences"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ConfigError(f"{name} file {path} does not exist", field=name)
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("algorithms must not repeat", field="algorithms")
        if "max_len" not in self.clustering.model_fields_set:
            self.clustering = self.clustering.model_copy(update={"max_len": self.miner.max_len})
        elif self.clustering.max_len != self.miner.max_len:
            raise ConfigError(
                f"clustering.max_len {self.clustering.max_len} differs from miner.max_len {self.miner.max_len}",
                field="clustering.max_len",
            )
        return self

    def synth_config(self) -> SynthConfig | None:
        if self.synth is None or self.seed is None:
            return self.synth
        return self.synth.model_copy(update={"seed": self.seed})


def _load_config_dict(path: Path) -> dict[str, object]:
    """Load a JSON or YAML mapping; YAML needs PyYAML."""
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            import yaml
        except ImportError:
            raise ConfigError(f"{path}: reading YAML configs needs PyYAML") from None
        parsed = yaml.safe_load(text)
    else:
        try:
            parsed = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(parsed, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return {str(key): value for key, value in parsed.items()}


def _validation_error(path: Path, exc: ValidationError) -> ConfigError:
    first = exc.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or None
    return ConfigError(f"{path}: {field or 'config'}: {first['msg']}", field=field)


def load_config(path: str | Path) -> PipelineConfig:
    """Read and validate a pipeline config; relative paths resolve against its directory."""
    config_path = Path(path).expanduser().resolve()
    if not config_path.is_file():
        raise ConfigError(f"config file {config_path} does not exist")
    raw = _load_config_dict(config_path)
    for key in ("input", "sequences", "output_dir"):
        value = raw.get(key)
        if isinstance(value, str) and not Path(value).expanduser().is_absolute():
            raw[key] = str(config_path.parent / value)
    try:
        return PipelineConfig.model_validate(raw)
    except ValidationError as exc:
        raise _validation_error(config_path, exc) from None


def load_synth_config(path: str | Path) -> SynthConfig:
    config_path = Path(path).expanduser().resolve()
    if not config_path.is_file():
        raise ConfigError(f"config file {config_path} does not exist")
    try:
        return SynthConfig.model_validate(_load_config_dict(config_path))
    except ValidationError as exc:
        raise _validation_error(config_path, exc) from None


def load_thresholds(path: str | Path) -> BandThresholds:
    """Read a JSON band-threshold override."""
    config_path = Path(path).expanduser().resolve()
    if not config_path.is_file():
        raise ConfigError(f"thresholds file {config_path} does not exist", field="thresholds")
    try:
        return BandThresholds.model_validate(_load_config_dict(config_path))
    except ValidationError as exc:
        raise _validation_error(config_path, exc) from None
