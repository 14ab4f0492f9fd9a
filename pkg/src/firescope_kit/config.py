import os
import json
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from firescope_kit.constants import (
    CONFIG_PATH,
    DEFAULT_JOBS,
    DEFAULT_SEED,
    ECE_BINS,
    IOU_THRESHOLD,
    JOBS_ENV_VAR,
)
from firescope_kit.errors import ValidationError
from firescope_kit.metrics.pixel import SsimParams
from firescope_kit.utils.utils import atomic_write, canonical_json, sha256_hex


class EvalConfig(BaseModel):
    """Settings of one evaluation run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    threshold: float = Field(IOU_THRESHOLD, ge=0.0, le=1.0, description="binarization threshold for IoU")
    ece_bins: int = Field(ECE_BINS, ge=1, description="equally spaced calibration bins")
    ssim: SsimParams = Field(default_factory=SsimParams)
    jobs: int = Field(DEFAULT_JOBS, ge=1, description="worker count; never changes results")
    seed: int = Field(DEFAULT_SEED, ge=0, description="recorded in provenance")
    tile_score: Literal["mean", "max"] = Field("mean", description="pooling of a predicted raster into a tile score")

    def config_hash(self) -> str:
        """SHA-256 over every value that can change a report (``jobs`` excluded)."""
        return sha256_hex(canonical_json(self.model_dump(mode="json", exclude={"jobs"})))


class ConfigManager:
    """
    Resolve evaluation settings, in increasing priority, from built-in
    defaults, the user config file, the FSK_JOBS environment variable, CLI
    flags and finally a --config JSON file.
    """
    CONFIG_PATH = CONFIG_PATH

    @classmethod
    def _read_config(cls) -> Dict[str, Any]:
        if cls.CONFIG_PATH.exists():
            try:
                return json.loads(cls.CONFIG_PATH.read_text())
            except json.JSONDecodeError:
                logging.warning("Ignoring unreadable config file %s", cls.CONFIG_PATH)
                return {}
        return {}

    @classmethod
    def _write_config(cls, cfg: Dict[str, Any]) -> None:
        atomic_write(cls.CONFIG_PATH, json.dumps(cfg, indent=2, sort_keys=True))

    @staticmethod
    def _read_override_file(path: Path) -> Dict[str, Any]:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path} is not valid JSON: {exc}", field="config") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"{path} must hold a JSON object", field="config")
        return data

    @staticmethod
    def _env_jobs() -> Optional[int]:
        raw = os.getenv(JOBS_ENV_VAR)
        if raw is None or not raw.strip():
            return None
        try:
            return int(raw)
        except ValueError as exc:
            raise ValidationError(f"{raw!r} is not an integer", field=JOBS_ENV_VAR) from exc

    @classmethod
    def load(
        cls,
        overrides: Optional[Dict[str, Any]] = None,
        config_file: Optional[Path] = None,
    ) -> EvalConfig:
        """
        Return the effective EvalConfig. ``None`` values in ``overrides`` mean
        the flag was not given.
        """
        # 1) user config file on top of defaults
        values: Dict[str, Any] = dict(cls._read_config())

        # 2) environment
        jobs = cls._env_jobs()
        if jobs is not None:
            values["jobs"] = jobs

        # 3) CLI flags
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})

        # 4) structured config file wins over flags
        if config_file is not None:
            values.update(cls._read_override_file(config_file))

        return EvalConfig.model_validate(values)

    @classmethod
    def set_defaults(cls, **values: Any) -> Path:
        """Merge non-None values into the user config file after validating them."""
        cfg = cls._read_config()
        cfg.update({k: v for k, v in values.items() if v is not None})
        EvalConfig.model_validate(cfg)
        cls._write_config(cfg)
        return cls.CONFIG_PATH


__all__ = ["EvalConfig", "ConfigManager"]
