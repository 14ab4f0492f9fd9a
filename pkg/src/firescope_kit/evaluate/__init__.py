"""Artifact plumbing: raster containers, manifests, reports and the evaluation worker pool."""
from firescope_kit.evaluate.container import (
    RasterContainer,
    RasterHeader,
    decode_container,
    encode_container,
    load_raster,
    read_container,
    save_raster,
    write_container,
)
from firescope_kit.evaluate.manifest import EvalManifest, TileRecord, dump_manifest, load_manifest, parse_manifest
from firescope_kit.evaluate.report import MetricReport, TileErrorRow, emit_curves, emit_report, emit_tiles, parse_report
from firescope_kit.evaluate.workers import EvaluationResult, run_evaluation

__all__ = [
    "RasterContainer",
    "RasterHeader",
    "decode_container",
    "encode_container",
    "load_raster",
    "read_container",
    "save_raster",
    "write_container",
    "EvalManifest",
    "TileRecord",
    "dump_manifest",
    "load_manifest",
    "parse_manifest",
    "MetricReport",
    "TileErrorRow",
    "emit_curves",
    "emit_tiles",
    "emit_report",
    "parse_report",
    "EvaluationResult",
    "run_evaluation",
]
