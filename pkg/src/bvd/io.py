"""Binary checkpoint/snapshot files and machine-readable failure records.

Checkpoint layout (little-endian): magic "BVD1", u64 nx, u64 ny, f64 lx,
f64 ly, f64 t, f64 nu, f64 kappa, then three row-major f64 arrays u, v,
theta.  Snapshots share the layout.  A JSON sidecar (path + ".acc.json")
carries the diagnostics accumulators so a restarted run reproduces running
integrals exactly; the sidecar is optional and the binary layout never
changes.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .spectral import Field, Grid
from .solver import PhysParams, State
from .diagnostics import Accumulators

MAGIC = b"BVD1"
_HEADER = struct.Struct("<QQddddd")


class CheckpointError(ValueError):
    pass


def write_checkpoint(path, state: State) -> None:
    g = state.grid
    header = _HEADER.pack(g.nx, g.ny, g.lx, g.ly, state.t,
                          state.params.nu, state.params.kappa)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(header)
        for field in (state.u, state.v, state.theta):
            fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_checkpoint(path) -> State:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic {raw[:4]!r}")
    nx, ny, lx, ly, t, nu, kappa = _HEADER.unpack_from(raw, 4)
    expect = 4 + _HEADER.size + 3 * 8 * nx * ny
    if len(raw) != expect:
        raise CheckpointError(f"{path}: size {len(raw)} != expected {expect}")
    grid = Grid(int(nx), int(ny), lx, ly)
    offset = 4 + _HEADER.size
    fields = []
    for _ in range(3):
        arr = np.frombuffer(raw, dtype="<f8", count=nx * ny, offset=offset)
        fields.append(Field(grid, arr.reshape(nx, ny).copy()))
        offset += 8 * nx * ny
    return State(u=fields[0], v=fields[1], theta=fields[2], t=t,
                 params=PhysParams(nu=nu, kappa=kappa))


def write_accumulators(path, acc: Accumulators) -> None:
    Path(str(path) + ".acc.json").write_text(json.dumps(acc.as_dict()) + "\n")


def read_accumulators(path) -> Accumulators | None:
    sidecar = Path(str(path) + ".acc.json")
    if not sidecar.exists():
        return None
    return Accumulators.from_dict(json.loads(sidecar.read_text()))


def write_failure(outdir, kind: str, t: float, detail: str) -> str:
    """Single-line JSON failure record, returned and written to FAILED.json."""
    line = json.dumps({"failure": kind, "t": t, "detail": detail})
    if outdir is not None:
        Path(outdir, "FAILED.json").write_text(line + "\n")
    return line
