# -*- coding: utf-8 -*-
# Licensed under the Apache License 2.0 License
# SPDX-License-Identifier: Apache-2.0

#
# The contents of this file are licensed under the Apache License, Version 2.0
# (the "License"); you may not use this file except in compliance with the
# License. You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

"""
Binary field snapshots and run checkpoints.

Layout (little endian)::

    magic   4 bytes  b"V2DF"
    version u32
    N       u32
    count   u32
    count x (N+1)^2 complex128 as (re, im) f64 pairs, k slow, l fast,
            wavenumbers -N/2..N/2 stored at index k + N/2

Each Nyquist coefficient is split evenly over its symmetric positions of the
box, one half on an edge and one quarter at a corner. A checkpoint holds two
fields followed by the step index (u64) and the run manifest (u32 length,
utf-8 text).
"""
import logging
import os

import numpy as np

from ns2d_bdf2.exceptions import CheckpointError, CorruptCheckpointError
from ns2d_bdf2.norms import StatePair
from ns2d_bdf2.spectral import Grid, SpectralField

log = logging.getLogger(__file__)

MAGIC = b"V2DF"
VERSION = 1
HEADER = np.dtype([("magic", "S4"), ("version", "<u4"), ("N", "<u4"), ("count", "<u4")])
TRAILER = np.dtype([("step", "<u8"), ("manifest_len", "<u4")])
COEFF = np.dtype("<c16")


def _box_weights(N):
    k = np.arange(-N // 2, N // 2 + 1)
    edge = np.where(np.abs(k) == N // 2, 0.5, 1.0)
    return edge.reshape(-1, 1) * edge.reshape(1, -1)


def field_to_box(field):
    N = field.grid.N
    idx = np.arange(-N // 2, N // 2 + 1) % N
    return field.coeffs[np.ix_(idx, idx)] * _box_weights(N)


def box_to_field(box, grid):
    N = grid.N
    multiplicity = 1.0 / _box_weights(N)[:N, :N]
    idx = np.arange(-N // 2, N // 2) % N
    coeffs = np.zeros((N, N), dtype=np.complex128)
    coeffs[np.ix_(idx, idx)] = box[:N, :N] * multiplicity
    return SpectralField(grid, coeffs, zero_mean=False, copy=False)


def _encode(fields):
    grid = fields[0].grid
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["N"] = grid.N
    header["count"] = len(fields)
    chunks = [header.tobytes()]
    for field in fields:
        if field.grid != grid:
            raise CheckpointError("all fields of a snapshot must share one grid")
        chunks.append(np.ascontiguousarray(field_to_box(field), dtype=COEFF).tobytes())
    return b"".join(chunks)


def _decode(data, grid=None, path="<bytes>"):
    """Fields plus the unread tail of ``data``."""
    if len(data) < HEADER.itemsize:
        raise CorruptCheckpointError("{}: truncated header".format(path))
    header = np.frombuffer(data, dtype=HEADER, count=1)[0]
    if header["magic"] != MAGIC:
        raise CorruptCheckpointError("{}: bad magic {!r}".format(path, header["magic"]))
    if header["version"] != VERSION:
        raise CheckpointError(
            "{}: version {} is not supported (expected {})".format(path, header["version"], VERSION)
        )
    N = int(header["N"])
    count = int(header["count"])
    if N < 4 or N % 2:
        raise CorruptCheckpointError("{}: invalid grid size {}".format(path, N))
    if grid is not None and grid.N != N:
        raise CheckpointError("{}: file has N={}, run has N={}".format(path, N, grid.N))
    grid = grid if grid is not None else Grid(N)
    box_bytes = (N + 1) ** 2 * COEFF.itemsize
    end = HEADER.itemsize + count * box_bytes
    if len(data) < end:
        raise CorruptCheckpointError(
            "{}: truncated, {} of {} field bytes".format(path, len(data) - HEADER.itemsize, end - HEADER.itemsize)
        )
    fields = []
    for i in range(count):
        offset = HEADER.itemsize + i * box_bytes
        box = np.frombuffer(data, dtype=COEFF, count=(N + 1) ** 2, offset=offset)
        fields.append(box_to_field(box.reshape(N + 1, N + 1), grid))
    return fields, data[end:]


def _write_atomic(path, data):
    tmp = "{}.tmp".format(path)
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_fields(path, fields):
    _write_atomic(path, _encode(list(fields)))


def read_fields(path, grid=None):
    with open(path, "rb") as fh:
        data = fh.read()
    fields, _ = _decode(data, grid, path)
    return fields


class Checkpoint(object):
    """State pair, its step index and the manifest of the run that wrote it."""

    __slots__ = ("pair", "step", "manifest_text", "path")

    def __init__(self, pair, step, manifest_text="", path=None):
        self.pair = pair
        self.step = step
        self.manifest_text = manifest_text
        self.path = path

    def __repr__(self):
        return "Checkpoint(step={}, path={!r})".format(self.step, self.path)


def checkpoint_write(path, pair, step, manifest_text=""):
    manifest = manifest_text.encode("utf-8")
    trailer = np.zeros(1, dtype=TRAILER)
    trailer["step"] = step
    trailer["manifest_len"] = len(manifest)
    _write_atomic(path, _encode([pair.older, pair.newer]) + trailer.tobytes() + manifest)
    log.info("checkpoint at step %d written to %s", step, path)
    return path


def checkpoint_read(path, grid=None):
    with open(path, "rb") as fh:
        data = fh.read()
    fields, tail = _decode(data, grid, path)
    if len(fields) != 2:
        raise CorruptCheckpointError("{}: checkpoint holds {} fields, expected 2".format(path, len(fields)))
    if len(tail) < TRAILER.itemsize:
        raise CorruptCheckpointError("{}: truncated checkpoint trailer".format(path))
    trailer = np.frombuffer(tail, dtype=TRAILER, count=1)[0]
    manifest_len = int(trailer["manifest_len"])
    manifest = tail[TRAILER.itemsize:]
    if len(manifest) != manifest_len:
        raise CorruptCheckpointError("{}: truncated checkpoint manifest".format(path))
    return Checkpoint(
        StatePair(fields[0], fields[1]), int(trailer["step"]), manifest.decode("utf-8"), path
    )
