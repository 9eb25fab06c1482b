"""Checkpoint container: roundtrip and documented byte layout."""

import json

import numpy as np
import pytest

from conftest import random_field
from qhmhd.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from qhmhd.grid import make_grid


def test_roundtrip(tmp_path, grid64, rng):
    fields = {"R": random_field(grid64, rng), "u_x": random_field(grid64, rng)}
    path = tmp_path / "state.qhc"
    save_checkpoint(path, grid64, 1.25, fields)
    grid, time, loaded = load_checkpoint(path)
    assert grid.n == 64 and time == 1.25
    assert set(loaded) == {"R", "u_x"}
    for name in fields:
        assert np.abs(loaded[name].values - fields[name].values).max() < 1e-12


def test_byte_layout(tmp_path):
    grid = make_grid(8)
    samples = np.arange(64, dtype=float).reshape(8, 8)
    from qhmhd.grid import SpectralField

    f = SpectralField.from_values(grid, samples)
    path = tmp_path / "layout.qhc"
    save_checkpoint(path, grid, 0.5, {"f": f})
    raw = path.read_bytes()
    nl = raw.index(b"\n")
    header = json.loads(raw[:nl].decode("utf-8"))
    assert header["format"] == "qhmhd-checkpoint"
    assert header["n"] == 8
    assert header["time"] == 0.5
    assert header["fields"] == ["f"]
    assert header["dtype"] == "<f8"
    body = np.frombuffer(raw[nl + 1:], dtype="<f8")
    # row-major, y fastest: sample (ix, iy) at offset ix*n + iy
    assert body.shape == (64,)
    assert abs(body[1 * 8 + 3] - samples[1, 3]) < 1e-12
    assert np.abs(body.reshape(8, 8) - samples).max() < 1e-12


def test_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk.qhc"
    path.write_bytes(b'{"format": "something-else"}\n')
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_rejects_truncated(tmp_path, grid64, rng):
    path = tmp_path / "trunc.qhc"
    save_checkpoint(path, grid64, 0.0, {"f": random_field(grid64, rng)})
    raw = path.read_bytes()
    path.write_bytes(raw[:-100])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)
