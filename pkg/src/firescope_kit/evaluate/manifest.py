"""
evaluate/manifest.py

JSON manifest listing the tiles of one evaluation run.

Role rules:
  • ``id_test``     needs ``target_path``; must not carry ``mask_path``.
  • ``ood_event``   needs ``mask_path``; must not carry ``target_path``.
  • ``ood_control`` carries neither.

Relative paths are resolved against the manifest's directory.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from firescope_kit.constants import MANIFEST_SCHEMA_VERSION, ORDINAL_LEVELS
from firescope_kit.errors import ManifestError

Role = Literal["id_test", "ood_event", "ood_control"]


class TileRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tile_id: str = Field(..., min_length=1)
    role: Role
    prediction_path: Path = Field(..., description="container with the predicted risk raster")
    target_path: Optional[Path] = Field(None, description="ground-truth risk raster (id_test only)")
    mask_path: Optional[Path] = Field(None, description="burn mask container (ood_event only)")
    climate_path: Optional[Path] = Field(None, description="climatology record of the tile centroid")
    year: Optional[int] = Field(None, description="year of the wildfire event or control sample")
    country: Optional[str] = None
    oracle_prediction: Optional[int] = Field(
        None, ge=0, lt=ORDINAL_LEVELS, description="ordinal risk level answered by the Oracle"
    )

    @model_validator(mode="after")
    def _role_paths(self) -> "TileRecord":
        if self.role == "id_test" and self.target_path is None:
            raise ValueError(f"{self.tile_id}: id_test entries need target_path")
        if self.role != "id_test" and self.target_path is not None:
            raise ValueError(f"{self.tile_id}: only id_test entries take target_path")
        if self.role == "ood_event" and self.mask_path is None:
            raise ValueError(f"{self.tile_id}: ood_event entries need mask_path")
        if self.role != "ood_event" and self.mask_path is not None:
            raise ValueError(f"{self.tile_id}: only ood_event entries take mask_path")
        return self

    def resolved(self, base: Path) -> "TileRecord":
        """Copy with every relative path anchored at ``base``."""
        update = {}
        for name in ("prediction_path", "target_path", "mask_path", "climate_path"):
            value = getattr(self, name)
            if value is not None and not value.is_absolute():
                update[name] = base / value
        return self.model_copy(update=update)


class EvalManifest(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: str = MANIFEST_SCHEMA_VERSION
    entries: List[TileRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_ids(self) -> "EvalManifest":
        seen = set()
        for entry in self.entries:
            if entry.tile_id in seen:
                raise ValueError(f"duplicate tile_id {entry.tile_id!r}")
            seen.add(entry.tile_id)
        return self

    def by_role(self, role: Role) -> List[TileRecord]:
        return sorted((e for e in self.entries if e.role == role), key=lambda e: e.tile_id)


def parse_manifest(text: str, base: Optional[Path] = None) -> EvalManifest:
    try:
        manifest = EvalManifest.model_validate_json(text)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ())) or "manifest"
        raise ManifestError(first["msg"], field=field) from exc
    if base is None:
        return manifest
    return manifest.model_copy(update={"entries": [e.resolved(base) for e in manifest.entries]})


def load_manifest(path: Union[str, Path]) -> EvalManifest:
    path = Path(path)
    return parse_manifest(path.read_text(), base=path.parent)


def dump_manifest(manifest: EvalManifest) -> str:
    return json.dumps(manifest.model_dump(mode="json", exclude_none=True), indent=2)


__all__ = ["Role", "TileRecord", "EvalManifest", "parse_manifest", "load_manifest", "dump_manifest"]
