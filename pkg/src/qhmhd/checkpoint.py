"""Checkpoint container: JSON header plus flat little-endian sample arrays.

Byte layout (documented contract, see also README):

    [ UTF-8 JSON header, one line ] [ 0x0A ] [ field 0 bytes ] [ field 1 bytes ] ...

The header carries {"format": "qhmhd-checkpoint", "version": 1, "n": ...,
"time": ..., "fields": [names...], "dtype": "<f8"}.  Each field block is
the n x n real-space samples as little-endian float64, row-major with the
y index fastest (C order of samples[ix, iy]).
"""

from __future__ import annotations

import json

import numpy as np

from .grid import FourierGrid, SpectralField, make_grid

FORMAT_NAME = "qhmhd-checkpoint"


class CheckpointError(ValueError):
    """Malformed checkpoint container."""


def save_checkpoint(path, grid: FourierGrid, time: float,
                    fields: dict[str, SpectralField]) -> None:
    header = {
        "format": FORMAT_NAME,
        "version": 1,
        "n": grid.n,
        "time": float(time),
        "fields": list(fields.keys()),
        "dtype": "<f8",
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8"))
        fh.write(b"\n")
        for name, field in fields.items():
            data = np.ascontiguousarray(field.values, dtype="<f8")
            fh.write(data.tobytes())


def load_checkpoint(path):
    """Returns (grid, time, {name: SpectralField})."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise CheckpointError(f"unreadable header: {err}") from err
        if header.get("format") != FORMAT_NAME:
            raise CheckpointError(f"not a {FORMAT_NAME} file")
        n = int(header["n"])
        grid = make_grid(n)
        out = {}
        count = n * n
        for name in header["fields"]:
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise CheckpointError(f"truncated field block {name!r}")
            samples = np.frombuffer(raw, dtype="<f8").reshape(n, n)
            out[name] = SpectralField.from_values(grid, samples)
        return grid, float(header["time"]), out
