"""Run driver: advances a state to a target time, sampling diagnostics.

Sample times use a global step index (t = n * dt whenever the start time is
itself a step multiple), so a run restarted from a checkpoint emits byte-
identical diagnostics at shared sample times; the accumulator sidecar
carries the running integrals across the restart.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .diagnostics import (
    Accumulators,
    DiagnosticsRecord,
    QGRID_DEFAULT,
    RGRID_DEFAULT,
    COLUMN_NOTES,
    record,
    record_columns,
    start_accumulators,
)
from .io import write_accumulators, write_checkpoint, write_failure
from .solver import SolverError, State, StepperConfig, step, with_time


@dataclass(frozen=True)
class FailureRecord:
    kind: str
    t: float
    detail: str


@dataclass
class Trajectory:
    records: list[DiagnosticsRecord]
    final_state: State
    accumulators: Accumulators
    failure: FailureRecord | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def _timebase(t0: float, dt: float):
    """t(n) for global step counting; exact when t0 is a step multiple."""
    n0 = round(t0 / dt) if dt > 0 else 0
    if abs(n0 * dt - t0) <= 1e-9 * max(1.0, abs(t0)):
        return lambda n: (n0 + n) * dt
    return lambda n: t0 + n * dt


def run(
    initial: State,
    config: StepperConfig,
    t_end: float,
    hooks=(),
    cadence: int = 10,
    qgrid=QGRID_DEFAULT,
    rgrid=RGRID_DEFAULT,
    accumulators: Accumulators | None = None,
    outdir=None,
    snapshot_every: int = 0,
) -> Trajectory:
    """Advance to t_end, sampling every `cadence` steps (plus first and last).

    Step failures (CFL, blow-up) stop the run; the partial trajectory is
    returned with its failure record, and a FAILED.json marker is written
    when an output directory is given.
    """
    if t_end < initial.t:
        raise ValueError(f"t_end={t_end} precedes initial time {initial.t}")
    if cadence < 1:
        raise ValueError("cadence must be >= 1")
    n_steps = int(round((t_end - initial.t) / config.dt))
    if abs(initial.t + n_steps * config.dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError("t_end - t0 must be an integer number of steps")

    timeof = _timebase(initial.t, config.dt)
    state = with_time(initial, timeof(0))
    acc = accumulators if accumulators is not None else start_accumulators(state)

    out = Path(outdir) if outdir is not None else None
    writer = None
    csv_file = None
    columns = record_columns(qgrid, rgrid)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        _write_manifest(out / "diagnostics_columns.txt", columns)
        csv_file = open(out / "diagnostics.csv", "w", newline="")
        writer = csv.writer(csv_file)
        writer.writerow(columns)

    records: list[DiagnosticsRecord] = []
    failure = None

    def sample(st: State):
        nonlocal acc
        rec, acc = record(st, acc, qgrid, rgrid)
        records.append(rec)
        if writer is not None:
            writer.writerow([repr(float(x)) for x in rec.row(columns)])
        for hook in hooks:
            hook(st, rec)

    try:
        sample(state)
        for n in range(1, n_steps + 1):
            try:
                state = step(state, config)
            except SolverError as err:
                failure = FailureRecord(err.kind, err.t, err.detail)
                if out is not None:
                    write_failure(out, err.kind, err.t, err.detail)
                break
            state = with_time(state, timeof(n))
            if n % cadence == 0 or n == n_steps:
                sample(state)
            if out is not None and snapshot_every and n % snapshot_every == 0 and n != n_steps:
                write_checkpoint(out / f"snapshot_{n:08d}.bvd", state)
    finally:
        if csv_file is not None:
            csv_file.close()

    if out is not None and failure is None:
        final = out / "checkpoint_final.bvd"
        write_checkpoint(final, state)
        write_accumulators(final, acc)

    return Trajectory(records=records, final_state=state, accumulators=acc, failure=failure)


def _write_manifest(path: Path, columns) -> None:
    lines = ["# diagnostics.csv columns, in order", ""]
    for c in columns:
        note = COLUMN_NOTES.get(c)
        if note is None:
            for pat, text in COLUMN_NOTES.items():
                if pat.endswith("*") and c.startswith(pat[:-1]):
                    note = text
                    break
        lines.append(f"{c}: {note or ''}")
    path.write_text("\n".join(lines) + "\n")
