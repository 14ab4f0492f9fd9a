#!/usr/bin/env python

"""Tests for `firescope_kit.evaluate.container`."""

import json

import numpy as np
import pytest

from firescope_kit.errors import ContainerError, ValidationError
from firescope_kit.evaluate.container import (
    RasterContainer,
    RasterHeader,
    decode_container,
    encode_container,
    load_raster,
    save_raster,
)
from firescope_kit.raster import Raster


def blob(header, payload=b""):
    return b"FSKR1\n" + json.dumps(header).encode() + b"\n" + payload


def quarters(shape, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(-40, 40, size=shape) / 4.0


def test_round_trip_is_byte_stable(tmp_path):
    r = Raster(values=quarters((5, 7)))
    path = save_raster(r, tmp_path / "a.fsr", tile_id="t1", lat=40.5, lon=-3.25)
    data = path.read_bytes()
    back = decode_container(data)
    assert back.raster == r
    assert back.header.tile_id == "t1"
    assert back.header.lat == 40.5
    assert encode_container(back) == data
    assert load_raster(path) == r


def test_nodata_mask_survives(tmp_path):
    mask = np.zeros((3, 4), dtype=bool)
    mask[1, 2] = True
    r = Raster(values=quarters((3, 4)), nodata_mask=mask)
    back = load_raster(save_raster(r, tmp_path / "m.fsr"))
    assert back == r
    assert back.valid_count == 11


def test_valid_pixel_equal_to_sentinel_is_rejected():
    values = np.zeros((2, 2))
    values[0, 0] = -9999.0
    r = Raster(values=values, nodata_mask=[[False, False], [False, True]])
    with pytest.raises(ContainerError):
        encode_container(RasterContainer(header=RasterHeader(width=2, height=2), raster=r))


def test_overflow_is_rejected():
    r = Raster(values=[[1e300]])
    with pytest.raises(ContainerError) as info:
        encode_container(RasterContainer(header=RasterHeader(width=1, height=1), raster=r))
    assert info.value.field == "values"


def test_short_payload():
    payload = np.zeros(6, dtype="<f4").tobytes()
    with pytest.raises(ContainerError) as info:
        decode_container(blob({"width": 2, "height": 4}, payload), "x.fsr")
    assert info.value.field == "payload"
    assert "x.fsr" in str(info.value)


@pytest.mark.parametrize(
    "data, field",
    [
        (b"NOPE\n{}\n", "magic"),
        (b"FSKR1\n{\"width\": 2", "header"),
        (b"FSKR1\n[1, 2]\n", "header"),
        (b"FSKR1\n\xff\xfe\n", "header"),
        (blob({"width": 0, "height": 1}), "width"),
        (blob({"width": 1, "height": 1, "dtype": "f64"}), "dtype"),
        (blob({"width": 1, "height": 1, "extra": 1}), "extra"),
    ],
)
def test_malformed_headers(data, field):
    with pytest.raises(ContainerError) as info:
        decode_container(data)
    assert info.value.field == field


def test_non_finite_payload():
    payload = np.array([np.nan], dtype="<f4").tobytes()
    with pytest.raises(ContainerError):
        decode_container(blob({"width": 1, "height": 1}, payload))


@pytest.mark.parametrize("seed", range(10))
def test_random_bytes_never_crash(seed):
    rng = np.random.default_rng(seed)
    good = encode_container(
        RasterContainer(header=RasterHeader(width=3, height=3), raster=Raster(values=quarters((3, 3), seed)))
    )
    for _ in range(200):
        data = bytearray(good)
        for pos in rng.integers(0, len(data), size=int(rng.integers(1, 6))):
            data[pos] = int(rng.integers(0, 256))
        cut = int(rng.integers(0, len(data) + 1))
        try:
            decode_container(bytes(data[:cut]))
        except ValidationError:
            pass
