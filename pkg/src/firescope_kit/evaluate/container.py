"""
evaluate/container.py

Minimal raster container (``.fsr``) used for predictions, targets and masks.

Layout::

    FSKR1\\n
    {"byte_order":"little-endian","dtype":"f32",...}\\n     canonical JSON header
    <width * height little-endian float32 values, row-major>

The header is parsed and validated before the payload is touched. When the
header carries a ``nodata`` sentinel, payload values equal to it are masked.
Every malformed input raises ``ContainerError`` naming the field and the path.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from firescope_kit.constants import CONTAINER_MAGIC, MAX_HEADER_BYTES
from firescope_kit.errors import ContainerError
from firescope_kit.raster import Raster
from firescope_kit.utils.utils import atomic_write, canonical_json

_PAYLOAD_DTYPE = np.dtype("<f4")
DEFAULT_NODATA = -9999.0


# ---- === Sub-models === ----
class RasterHeader(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    width: int = Field(..., gt=0, description="pixels per row")
    height: int = Field(..., gt=0, description="number of rows")
    dtype: Literal["f32"] = "f32"
    order: Literal["row-major"] = "row-major"
    byte_order: Literal["little-endian"] = "little-endian"
    tile_id: str = Field("", description="identifier of the tile the raster covers")
    lat: Optional[float] = Field(None, ge=-90.0, le=90.0, description="centroid latitude")
    lon: Optional[float] = Field(None, ge=-180.0, le=180.0, description="centroid longitude")
    nodata: Optional[float] = Field(None, description="payload value marking masked pixels")

    @model_validator(mode="after")
    def _finite_nodata(self) -> "RasterHeader":
        if self.nodata is not None and not math.isfinite(self.nodata):
            raise ValueError("nodata sentinel must be finite")
        return self

    @property
    def payload_bytes(self) -> int:
        return self.width * self.height * _PAYLOAD_DTYPE.itemsize


# ---- === Main model === ----
class RasterContainer(BaseModel):
    model_config = ConfigDict(frozen=True)

    header: RasterHeader
    raster: Raster

    @model_validator(mode="after")
    def _shape_matches(self) -> "RasterContainer":
        if self.raster.shape != (self.header.height, self.header.width):
            raise ValueError(
                f"raster {self.raster.shape} != header {(self.header.height, self.header.width)}"
            )
        return self


def _field_of(exc: PydanticValidationError) -> str:
    errors = exc.errors()
    if errors and errors[0].get("loc"):
        return ".".join(str(p) for p in errors[0]["loc"])
    return "header"


def decode_container(data: bytes, path: Optional[Union[str, Path]] = None) -> RasterContainer:
    where = str(path) if path is not None else None
    prefix = CONTAINER_MAGIC + b"\n"
    if not data.startswith(prefix):
        raise ContainerError("missing container magic", field="magic", path=where)
    end = data.find(b"\n", len(prefix), len(prefix) + MAX_HEADER_BYTES + 1)
    if end < 0:
        raise ContainerError("header line is unterminated or too long", field="header", path=where)
    try:
        raw = json.loads(data[len(prefix):end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError, RecursionError) as exc:
        raise ContainerError(f"header is not JSON: {exc}", field="header", path=where) from exc
    if not isinstance(raw, dict):
        raise ContainerError("header must be a JSON object", field="header", path=where)
    try:
        header = RasterHeader.model_validate(raw)
    except PydanticValidationError as exc:
        raise ContainerError(str(exc.errors()[0]["msg"]), field=_field_of(exc), path=where) from exc

    payload = data[end + 1:]
    if len(payload) != header.payload_bytes:
        raise ContainerError(
            f"payload has {len(payload)} bytes, header implies {header.payload_bytes}",
            field="payload",
            path=where,
        )
    values = np.frombuffer(payload, dtype=_PAYLOAD_DTYPE).astype(np.float64).reshape(header.height, header.width)
    if not np.all(np.isfinite(values)):
        raise ContainerError("payload holds non-finite values", field="payload", path=where)
    mask = None
    if header.nodata is not None:
        sentinel = float(np.float32(header.nodata))
        hits = values == sentinel
        if hits.any():
            mask = hits
    return RasterContainer(header=header, raster=Raster(values=values, nodata_mask=mask))


def encode_container(container: RasterContainer) -> bytes:
    header = container.header
    raster = container.raster
    values = raster.values
    if raster.nodata_mask is not None and raster.nodata_mask.any():
        if header.nodata is None:
            header = header.model_copy(update={"nodata": DEFAULT_NODATA})
        sentinel = np.float32(header.nodata)
        if np.any(raster.valid_values().astype(_PAYLOAD_DTYPE) == sentinel):
            raise ContainerError("a valid pixel equals the nodata sentinel", field="nodata")
        values = np.where(raster.valid, values, float(sentinel))
    with np.errstate(over="ignore"):
        payload = np.ascontiguousarray(values, dtype=_PAYLOAD_DTYPE)
    if not np.all(np.isfinite(payload)):
        raise ContainerError("values overflow float32", field="values")
    meta = header.model_dump(mode="json", exclude_none=True)
    return CONTAINER_MAGIC + b"\n" + canonical_json(meta).encode("utf-8") + b"\n" + payload.tobytes()


def read_container(path: Union[str, Path]) -> RasterContainer:
    return decode_container(Path(path).read_bytes(), path)


def write_container(container: RasterContainer, path: Union[str, Path]) -> Path:
    return atomic_write(path, encode_container(container))


def load_raster(path: Union[str, Path]) -> Raster:
    """Read the raster of a container file; the header is validated and dropped."""
    return read_container(path).raster


def save_raster(
    r: Raster,
    path: Union[str, Path],
    tile_id: str = "",
    lat: Optional[float] = None,
    lon: Optional[float] = None,
    nodata: Optional[float] = None,
) -> Path:
    """Write ``r`` as float32; values must be float32-representable to round-trip exactly."""
    header = RasterHeader(width=r.width, height=r.height, tile_id=tile_id, lat=lat, lon=lon, nodata=nodata)
    return write_container(RasterContainer(header=header, raster=r), path)


__all__ = [
    "RasterHeader",
    "RasterContainer",
    "decode_container",
    "encode_container",
    "read_container",
    "write_container",
    "load_raster",
    "save_raster",
]
