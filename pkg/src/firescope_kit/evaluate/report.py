"""
evaluate/report.py

MetricReport model and its two serializations: structured JSON (lossless,
round-trips through ``parse_report``) and a ``block,metric,value`` table.
Curve points (ROC, reliability) and per-tile error rows are emitted as data
rows only.
"""
from __future__ import annotations

import csv
import io
import math
from typing import Dict, Iterable, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from firescope_kit.constants import REPORT_SCHEMA_VERSION
from firescope_kit.errors import ValidationError
from firescope_kit.metrics.probabilistic import CalibrationBin, RocPoint

ReportFormat = Literal["json", "csv"]


# ---- === Metric blocks === ----
class _Block(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _finite(self):
        for name, value in self.metrics().items():
            if not math.isfinite(value):
                raise ValueError(f"{name} is not finite")
        return self

    def metrics(self) -> Dict[str, float]:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class IdBlock(_Block):
    mse: float
    mae: float
    ssim: float = Field(..., description="mean of per-tile SSIM")


class OodEventBlock(_Block):
    brier: float
    roc_auc: float
    ece: float


class OodPixelBlock(_Block):
    roc_auc: float = Field(..., description="burnt pixels vs control-tile pixels")
    iou: float = Field(..., description="micro IoU over summed counts")
    iou_macro: Optional[float] = Field(None, description="mean of per-tile IoU")


class OrdinalBlock(_Block):
    qwk: float
    brier: float = Field(..., description="bin-centre probability vs mean target risk")
    mae: float


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: str = REPORT_SCHEMA_VERSION
    tool_version: str
    seed: int
    config_hash: str
    counts: Dict[str, int] = Field(default_factory=dict, description="samples behind each block")


# ---- === Main model === ----
class MetricReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id_block: Optional[IdBlock] = None
    ood_event_block: Optional[OodEventBlock] = None
    ood_pixel_block: Optional[OodPixelBlock] = None
    ordinal_block: Optional[OrdinalBlock] = None
    oracle_event_block: Optional[OodEventBlock] = None
    provenance: Provenance

    def blocks(self) -> Dict[str, _Block]:
        names = ("id_block", "ood_event_block", "ood_pixel_block", "ordinal_block", "oracle_event_block")
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}


class CurveRow(BaseModel):
    """One point of a ROC curve or one bin of a reliability diagram."""

    model_config = ConfigDict(frozen=True)

    curve: str
    key: float = Field(..., description="threshold for ROC rows, bin lower edge for calibration rows")
    x: Optional[float] = None
    y: Optional[float] = None
    count: Optional[int] = None


class TileErrorRow(BaseModel):
    """Tile-level forecast and its squared error, for error studies by year or region."""

    model_config = ConfigDict(frozen=True)

    tile_id: str
    role: str
    year: Optional[int] = None
    country: Optional[str] = None
    lat: Optional[float] = Field(None, description="tile centroid latitude from the prediction header")
    lon: Optional[float] = Field(None, description="tile centroid longitude from the prediction header")
    score: float = Field(..., description="pooled tile score")
    label: int = Field(..., description="1 for wildfire events, 0 for controls")
    brier: float


def roc_rows(curve: str, points: Iterable[RocPoint]) -> List[CurveRow]:
    return [CurveRow(curve=curve, key=p.threshold, x=p.fpr, y=p.tpr) for p in points]


def calibration_rows(curve: str, bins: Iterable[CalibrationBin]) -> List[CurveRow]:
    return [
        CurveRow(curve=curve, key=b.lower, x=b.mean_confidence, y=b.observed_frequency, count=b.count)
        for b in bins
    ]


def _cell(value: Union[None, int, float, str]) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _table(header: List[str], rows: Iterable[List[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def emit_report(report: MetricReport, fmt: ReportFormat = "json") -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2, exclude_none=True) + "\n"
    if fmt == "csv":
        rows = [
            [block, metric, _cell(value)]
            for block, model in report.blocks().items()
            for metric, value in model.metrics().items()
        ]
        prov = report.provenance
        rows += [
            ["provenance", "schema_version", prov.schema_version],
            ["provenance", "tool_version", prov.tool_version],
            ["provenance", "seed", str(prov.seed)],
            ["provenance", "config_hash", prov.config_hash],
        ]
        rows += [["provenance", f"count.{k}", str(v)] for k, v in sorted(prov.counts.items())]
        return _table(["block", "metric", "value"], rows)
    raise ValidationError(f"unknown report format {fmt!r}", field="format")


def parse_report(text: str) -> MetricReport:
    return MetricReport.model_validate_json(text)


def emit_curves(rows: Iterable[CurveRow]) -> str:
    return _table(
        ["curve", "key", "x", "y", "count"],
        ([r.curve, _cell(r.key), _cell(r.x), _cell(r.y), _cell(r.count)] for r in rows),
    )


def emit_tiles(rows: Iterable[TileErrorRow]) -> str:
    return _table(
        ["tile_id", "role", "year", "country", "lat", "lon", "score", "label", "brier"],
        (
            [r.tile_id, r.role, _cell(r.year), _cell(r.country), _cell(r.lat), _cell(r.lon),
             _cell(r.score), _cell(r.label), _cell(r.brier)]
            for r in rows
        ),
    )


__all__ = [
    "ReportFormat",
    "IdBlock",
    "OodEventBlock",
    "OodPixelBlock",
    "OrdinalBlock",
    "Provenance",
    "MetricReport",
    "CurveRow",
    "TileErrorRow",
    "roc_rows",
    "calibration_rows",
    "emit_report",
    "parse_report",
    "emit_curves",
    "emit_tiles",
]
