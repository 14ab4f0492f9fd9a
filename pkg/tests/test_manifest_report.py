#!/usr/bin/env python

"""Tests for `firescope_kit.evaluate.manifest` and `firescope_kit.evaluate.report`."""

import json
from pathlib import Path

import pytest

from firescope_kit.errors import ManifestError, ValidationError
from firescope_kit.evaluate.manifest import EvalManifest, TileRecord, dump_manifest, load_manifest, parse_manifest
from firescope_kit.evaluate.report import (
    CurveRow,
    IdBlock,
    MetricReport,
    OodEventBlock,
    Provenance,
    TileErrorRow,
    emit_curves,
    emit_report,
    emit_tiles,
    parse_report,
)


def manifest_text(*entries):
    return json.dumps({"schema_version": "1.0", "entries": list(entries)})


# ---- manifest ----


def test_roles_and_relative_paths(tmp_path):
    text = manifest_text(
        {"tile_id": "b", "role": "ood_control", "prediction_path": "b.fsr"},
        {"tile_id": "a", "role": "id_test", "prediction_path": "a.fsr", "target_path": "/abs/a_t.fsr"},
        {"tile_id": "c", "role": "ood_event", "prediction_path": "c.fsr", "mask_path": "c_m.fsr", "year": 2023},
    )
    (tmp_path / "manifest.json").write_text(text)
    m = load_manifest(tmp_path / "manifest.json")
    a = m.by_role("id_test")[0]
    assert a.prediction_path == tmp_path / "a.fsr"
    assert a.target_path == Path("/abs/a_t.fsr")
    assert m.by_role("ood_event")[0].mask_path == tmp_path / "c_m.fsr"
    assert [e.tile_id for e in m.by_role("ood_control")] == ["b"]


@pytest.mark.parametrize(
    "entry",
    [
        {"tile_id": "a", "role": "id_test", "prediction_path": "a.fsr"},
        {"tile_id": "a", "role": "ood_event", "prediction_path": "a.fsr"},
        {"tile_id": "a", "role": "ood_control", "prediction_path": "a.fsr", "mask_path": "m.fsr"},
        {"tile_id": "a", "role": "ood_event", "prediction_path": "a.fsr", "mask_path": "m", "target_path": "t"},
        {"tile_id": "a", "role": "train", "prediction_path": "a.fsr"},
        {"tile_id": "a", "role": "ood_control", "prediction_path": "a.fsr", "oracle_prediction": 10},
        {"tile_id": "a", "role": "ood_control", "prediction_path": "a.fsr", "colour": "red"},
    ],
)
def test_bad_entries(entry):
    with pytest.raises(ManifestError) as info:
        parse_manifest(manifest_text(entry))
    assert info.value.field


def test_duplicate_ids():
    entry = {"tile_id": "a", "role": "ood_control", "prediction_path": "a.fsr"}
    with pytest.raises(ManifestError):
        parse_manifest(manifest_text(entry, entry))


def test_not_json():
    with pytest.raises(ManifestError):
        parse_manifest("{oops")


def test_dump_and_parse_agree():
    m = EvalManifest(entries=[TileRecord(tile_id="x", role="ood_control", prediction_path=Path("x.fsr"))])
    assert parse_manifest(dump_manifest(m)) == m


# ---- report ----


def sample_report():
    return MetricReport(
        id_block=IdBlock(mse=0.25, mae=0.5, ssim=0.75),
        ood_event_block=OodEventBlock(brier=0.125, roc_auc=1.0, ece=0.0),
        provenance=Provenance(tool_version="0.1.0", seed=0, config_hash="ab" * 32, counts={"id_test": 2}),
    )


def test_json_round_trip():
    report = sample_report()
    text = emit_report(report, "json")
    assert text.endswith("\n")
    assert parse_report(text) == report
    assert "ood_pixel_block" not in json.loads(text)


def test_csv_rows():
    lines = emit_report(sample_report(), "csv").splitlines()
    assert lines[0] == "block,metric,value"
    assert "id_block,mse,0.25" in lines
    assert "ood_event_block,roc_auc,1.0" in lines
    assert "provenance,count.id_test,2" in lines


def test_unknown_format():
    with pytest.raises(ValidationError):
        emit_report(sample_report(), "xml")


def test_non_finite_metrics_rejected():
    with pytest.raises(ValueError):
        IdBlock(mse=float("nan"), mae=0.0, ssim=1.0)


def test_curve_table():
    text = emit_curves(
        [
            CurveRow(curve="event_roc", key=float("inf"), x=0.0, y=0.0),
            CurveRow(curve="event_calibration", key=0.0, x=None, y=None, count=0),
        ]
    )
    assert text.splitlines() == [
        "curve,key,x,y,count",
        "event_roc,inf,0.0,0.0,",
        "event_calibration,0.0,,,0",
    ]


def test_tile_table():
    text = emit_tiles(
        [
            TileErrorRow(tile_id="e1", role="ood_event", year=2021, country="PT", lat=40.0, lon=-8.5,
                         score=0.25, label=1, brier=0.5625),
            TileErrorRow(tile_id="c1", role="ood_control", score=0.0, label=0, brier=0.0),
        ]
    )
    assert text.splitlines() == [
        "tile_id,role,year,country,lat,lon,score,label,brier",
        "e1,ood_event,2021,PT,40.0,-8.5,0.25,1,0.5625",
        "c1,ood_control,,,,,0.0,0,0.0",
    ]
