# evaluate/workers.py
"""Evaluate every manifest tile on a worker pool, then reduce in tile-id order.

Workers only read files and compute per-tile partial results; the reducer
owns every accumulator. The report is therefore byte-identical for any
``jobs`` value.
"""
import asyncio
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from firescope_kit import __version__
from firescope_kit.config import EvalConfig
from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.evaluate.container import load_raster, read_container
from firescope_kit.evaluate.manifest import EvalManifest, TileRecord
from firescope_kit.evaluate.report import (
    CurveRow,
    IdBlock,
    MetricReport,
    OodEventBlock,
    OodPixelBlock,
    OrdinalBlock,
    Provenance,
    TileErrorRow,
    calibration_rows,
    roc_rows,
)
from firescope_kit.ingest.climate import load_climate_vector
from firescope_kit.metrics.ordinal import OrdinalPair, ordinal_to_probability, qwk
from firescope_kit.metrics.pixel import iou_counts, iou_from_counts, pixel_error_sums, ssim
from firescope_kit.metrics.pixel_sets import EvaluatedTile, PixelEvalSet, assemble_pixel_eval
from firescope_kit.metrics.probabilistic import brier, ece, reliability_curve, roc_auc, roc_curve, tile_brier
from firescope_kit.raster import BinaryMask, Raster, discretize_mean_risk, raster_mean
from firescope_kit.utils.utils import fsum_mean


class TileOutcome(BaseModel):
    """Partial results of one tile; combined only by the reducer."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    record: TileRecord
    lat: Optional[float] = None
    lon: Optional[float] = None
    sq_sum: float = 0.0
    abs_sum: float = 0.0
    pixels: int = 0
    ssim: Optional[float] = None
    target_mean: Optional[float] = None
    target_level: Optional[int] = None
    tile_score: Optional[float] = None
    iou_counts: Optional[Tuple[int, int, int]] = None
    pixel_set: Optional[PixelEvalSet] = None


class EvaluationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    report: MetricReport
    curves: List[CurveRow]
    tiles: List[TileErrorRow] = []


def _tile_score(prediction: Raster, pooling: str) -> float:
    if pooling == "max":
        values = prediction.valid_values()
        if values.size == 0:
            raise EmptyInputError("all pixels are masked", field="prediction")
        return float(values.max())
    return raster_mean(prediction)


def _check_unit_range(r: Raster, tile_id: str, field: str) -> Raster:
    values = r.valid_values()
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValidationError(
            f"tile {tile_id}: {field} values span [{float(values.min())}, {float(values.max())}], expected [0, 1]",
            field=field,
        )
    return r


def evaluate_tile(record: TileRecord, config: EvalConfig) -> TileOutcome:
    """Read one tile's containers and compute everything that needs its pixels.

    Predictions and targets are risk probabilities; any valid pixel outside
    [0, 1] is rejected with the tile id in the message.
    """
    container = read_container(record.prediction_path)
    prediction = _check_unit_range(container.raster, record.tile_id, "prediction")
    centroid = {"lat": container.header.lat, "lon": container.header.lon}
    if record.climate_path is not None:
        load_climate_vector(record.climate_path)
    if record.role == "id_test":
        target = _check_unit_range(load_raster(record.target_path), record.tile_id, "target")
        sq, ab, n = pixel_error_sums(prediction, target)
        return TileOutcome(
            record=record,
            **centroid,
            sq_sum=sq,
            abs_sum=ab,
            pixels=n,
            ssim=ssim(prediction, target, config.ssim),
            target_mean=raster_mean(target),
            target_level=discretize_mean_risk(target),
        )

    mask = None
    counts = None
    if record.role == "ood_event":
        mask = BinaryMask.from_raster(load_raster(record.mask_path))
        counts = iou_counts(prediction, mask, config.threshold)
    tile = EvaluatedTile(tile_id=record.tile_id, role=record.role, prediction=prediction, mask=mask)
    return TileOutcome(
        record=record,
        **centroid,
        tile_score=_tile_score(prediction, config.tile_score),
        iou_counts=counts,
        pixel_set=assemble_pixel_eval([tile]),
    )


async def worker(queue: asyncio.Queue, config: EvalConfig, results: Dict[str, object]) -> None:
    while True:
        record = await queue.get()
        if record is None:
            queue.task_done()
            break
        try:
            results[record.tile_id] = await asyncio.to_thread(evaluate_tile, record, config)
        except Exception as e:
            logging.error("Error evaluating tile %s: %s", record.tile_id, e)
            results[record.tile_id] = e
        finally:
            queue.task_done()


async def run(manifest: EvalManifest, config: EvalConfig) -> Dict[str, TileOutcome]:
    queue: asyncio.Queue = asyncio.Queue()
    for record in sorted(manifest.entries, key=lambda e: e.tile_id):
        queue.put_nowait(record)
    for _ in range(config.jobs):
        queue.put_nowait(None)

    results: Dict[str, object] = {}
    tasks = [asyncio.create_task(worker(queue, config, results)) for _ in range(config.jobs)]
    await queue.join()
    await asyncio.gather(*tasks)

    for tile_id in sorted(results):
        if isinstance(results[tile_id], Exception):
            raise results[tile_id]
    return {k: results[k] for k in sorted(results)}  # type: ignore[misc]


# ---- === Reduction === ----
def _event_block(scores: List[float], labels: List[int], bins: int, name: str) -> OodEventBlock:
    positives = [s for s, y in zip(scores, labels) if y == 1]
    negatives = [s for s, y in zip(scores, labels) if y == 0]
    if not positives or not negatives:
        raise EmptyInputError("needs at least one event and one control tile", field=name)
    return OodEventBlock(
        brier=brier(scores, labels),
        roc_auc=roc_auc(positives, negatives),
        ece=ece(scores, labels, bins),
    )


def _concat(parts: List[np.ndarray]) -> np.ndarray:
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.float64)


def reduce_outcomes(outcomes: Dict[str, TileOutcome], config: EvalConfig) -> EvaluationResult:
    ordered = [outcomes[k] for k in sorted(outcomes)]
    id_tiles = [o for o in ordered if o.record.role == "id_test"]
    ood_tiles = [o for o in ordered if o.record.role != "id_test"]
    events = [o for o in ood_tiles if o.record.role == "ood_event"]
    counts: Dict[str, int] = {
        "id_test": len(id_tiles),
        "ood_event": len(events),
        "ood_control": len(ood_tiles) - len(events),
    }
    blocks: Dict[str, object] = {}
    curves: List[CurveRow] = []
    tiles: List[TileErrorRow] = []

    if id_tiles:
        n = sum(o.pixels for o in id_tiles)
        if n == 0:
            raise EmptyInputError("no valid pixels in id_test tiles", field="id_block")
        blocks["id_block"] = IdBlock(
            mse=math.fsum(o.sq_sum for o in id_tiles) / n,
            mae=math.fsum(o.abs_sum for o in id_tiles) / n,
            ssim=fsum_mean((o.ssim for o in id_tiles), field="id_block"),
        )
        counts["id_pixels"] = n

    if ood_tiles:
        scores = [o.tile_score for o in ood_tiles]
        labels = [1 if o.record.role == "ood_event" else 0 for o in ood_tiles]
        blocks["ood_event_block"] = _event_block(scores, labels, config.ece_bins, "ood_event_block")
        tiles = [
            TileErrorRow(
                tile_id=o.record.tile_id,
                role=o.record.role,
                year=o.record.year,
                country=o.record.country,
                lat=o.lat,
                lon=o.lon,
                score=s,
                label=y,
                brier=tile_brier(s, y),
            )
            for o, s, y in zip(ood_tiles, scores, labels)
        ]
        curves += roc_rows(
            "event_roc",
            roc_curve([s for s, y in zip(scores, labels) if y], [s for s, y in zip(scores, labels) if not y]),
        )
        curves += calibration_rows("event_calibration", reliability_curve(scores, labels, config.ece_bins))

        positives = _concat([o.pixel_set.positive_scores for o in ood_tiles])
        negatives = _concat([o.pixel_set.negative_scores for o in ood_tiles])
        background = _concat([o.pixel_set.background_scores for o in ood_tiles])
        tp, fp, fn = (sum(c) for c in zip(*(o.iou_counts for o in events)))
        blocks["ood_pixel_block"] = OodPixelBlock(
            roc_auc=roc_auc(positives, negatives),
            iou=iou_from_counts(tp, fp, fn),
            iou_macro=fsum_mean((iou_from_counts(*o.iou_counts) for o in events), field="ood_pixel_block"),
        )
        curves += roc_rows("pixel_roc", roc_curve(positives, negatives))
        counts.update(
            positive_pixels=int(positives.size),
            negative_pixels=int(negatives.size),
            background_pixels=int(background.size),
        )

    graded = [o for o in id_tiles if o.record.oracle_prediction is not None]
    if graded:
        probs = [ordinal_to_probability(o.record.oracle_prediction) for o in graded]
        diffs = [p - o.target_mean for p, o in zip(probs, graded)]
        blocks["ordinal_block"] = OrdinalBlock(
            qwk=qwk([OrdinalPair(predicted=o.record.oracle_prediction, actual=o.target_level) for o in graded]),
            brier=fsum_mean(d * d for d in diffs),
            mae=fsum_mean(abs(d) for d in diffs),
        )
        counts["oracle_id"] = len(graded)

    oracle_ood = [o for o in ood_tiles if o.record.oracle_prediction is not None]
    if oracle_ood:
        scores = [ordinal_to_probability(o.record.oracle_prediction) for o in oracle_ood]
        labels = [1 if o.record.role == "ood_event" else 0 for o in oracle_ood]
        blocks["oracle_event_block"] = _event_block(scores, labels, config.ece_bins, "oracle_event_block")
        counts["oracle_ood"] = len(oracle_ood)

    if not blocks:
        raise EmptyInputError("manifest lists no tiles", field="entries")

    report = MetricReport(
        **blocks,
        provenance=Provenance(
            tool_version=__version__,
            seed=config.seed,
            config_hash=config.config_hash(),
            counts=dict(sorted(counts.items())),
        ),
    )
    return EvaluationResult(report=report, curves=curves, tiles=tiles)


def run_evaluation(manifest: EvalManifest, config: EvalConfig = EvalConfig()) -> EvaluationResult:
    """Evaluate ``manifest`` with ``config.jobs`` workers and build the report."""
    logging.info("Evaluating %d tiles with %d worker(s)...", len(manifest.entries), config.jobs)
    outcomes = asyncio.run(run(manifest, config))
    return reduce_outcomes(outcomes, config)


__all__ = ["TileOutcome", "EvaluationResult", "evaluate_tile", "run", "reduce_outcomes", "run_evaluation"]
