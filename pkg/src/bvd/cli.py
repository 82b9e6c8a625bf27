"""Command-line entry points: run, verify, report.

Exit codes: 0 success, 2 config error, 3 run failure (CFL violation or
suspected blow-up; a FAILED.json record is left in the output directory),
4 hard invariant failure in verify, 5 missing/corrupt report input.

The BVD_OUTPUT_DIR environment variable overrides the configured output
directory of run and verify.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN_FAILED = 3
EXIT_INVARIANT = 4
EXIT_REPORT = 5


def _outdir(configured: str) -> str:
    return os.environ.get("BVD_OUTPUT_DIR", configured)


def cmd_run(config_path: str) -> int:
    from .config import ConfigError, RunConfig
    from .io import read_accumulators, read_checkpoint
    from .presets import random_state, shear_state, stratified_state
    from .solver import PhysParams, StepperConfig
    from .spectral import Grid
    from .trajectory import run

    try:
        cfg = RunConfig.from_file(config_path)
    except ConfigError as err:
        print(err, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"config error:\n  - cannot read {config_path}: {err}", file=sys.stderr)
        return EXIT_CONFIG

    params = PhysParams(cfg.nu, cfg.kappa)
    accumulators = None
    if cfg.preset == "checkpoint":
        initial = read_checkpoint(cfg.checkpoint)
        accumulators = read_accumulators(cfg.checkpoint)
    else:
        grid = Grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly)
        if cfg.preset == "shear":
            amp = 1.0 if cfg.amplitude is None else cfg.amplitude
            initial = shear_state(grid, params, amp)
        elif cfg.preset == "stratified":
            kwargs = {} if cfg.amplitude is None else {"amplitude": cfg.amplitude}
            initial = stratified_state(grid, params, cfg.seed, **kwargs)
        else:
            amp = 0.1 if cfg.amplitude is None else cfg.amplitude
            initial = random_state(grid, params, cfg.seed, amp, cfg.spectrum_slope)

    outdir = _outdir(cfg.outdir)
    stepper = StepperConfig(dt=cfg.dt, cfl_limit=cfg.cfl_limit, dealias=cfg.dealias)
    traj = run(
        initial,
        stepper,
        cfg.t_end,
        cadence=cfg.cadence,
        qgrid=cfg.qgrid,
        rgrid=cfg.rgrid,
        accumulators=accumulators,
        outdir=outdir,
        snapshot_every=cfg.snapshot_every,
    )
    if not traj.ok:
        f = traj.failure
        print(f"run failed: {f.kind} at t={f.t:.6g}: {f.detail}", file=sys.stderr)
        return EXIT_RUN_FAILED
    print(f"run complete: t={traj.final_state.t:.6g}, "
          f"{len(traj.records)} diagnostic samples, output in {outdir}")
    if cfg.preset == "shear":
        import numpy as np

        final = traj.final_state
        _, Y = final.grid.mesh()
        amp = 1.0 if cfg.amplitude is None else cfg.amplitude
        exact = amp * np.cos(Y) * np.exp(-cfg.nu * final.t)
        err = float(np.abs(final.u.values - exact).max())
        print(f"shear solution max-norm error: {err:.3e}")
        (Path(outdir) / "shear_error.txt").write_text(repr(err) + "\n")
    return EXIT_OK


def cmd_verify(config_path: str) -> int:
    from .config import ConfigError, VerifyConfig
    from .verify import run_verify, write_reports

    try:
        cfg = VerifyConfig.from_file(config_path)
    except ConfigError as err:
        print(err, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"config error:\n  - cannot read {config_path}: {err}", file=sys.stderr)
        return EXIT_CONFIG

    outcome = run_verify(
        lemmas=cfg.lemmas,
        ensemble=cfg.ensemble,
        grid_sizes=cfg.grid_sizes,
        boxes=cfg.boxes,
        qs=cfg.qs,
        rgrid=cfg.rgrid,
        radii=cfg.radii,
        s_values=cfg.s_values,
        seed=cfg.seed,
        workers=cfg.workers,
        lowhigh_grid=cfg.lowhigh_grid,
    )
    outdir = _outdir(cfg.outdir)
    write_reports(outcome, outdir)
    print(f"verify complete: {len(outcome.trials)} trials, reports in {outdir}")
    if not outcome.ok:
        for msg in outcome.hard_failures:
            print(f"hard invariant failure: {msg}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_report(run_dir: str) -> int:
    from .report import ReportError, write_report

    try:
        out = write_report(run_dir)
    except ReportError as err:
        print(f"report error: {err}", file=sys.stderr)
        return EXIT_REPORT
    print(f"report written to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bvd",
        description="Pseudo-spectral 2D Boussinesq solver (vertical dissipation) "
                    "with an a priori estimate verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a configured initial-value problem")
    p_run.add_argument("config", help="flat key-value run configuration file")

    p_verify = sub.add_parser("verify", help="run invariant checks and inequality ensembles")
    p_verify.add_argument("config", help="flat key-value verify configuration file")

    p_report = sub.add_parser("report", help="summarize a run directory (tables + figures)")
    p_report.add_argument("run_dir", help="directory containing diagnostics.csv")

    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "verify":
        return cmd_verify(args.config)
    return cmd_report(args.run_dir)


if __name__ == "__main__":
    sys.exit(main())
