"""Verification driver: hard invariants plus inequality ensembles.

Hard invariants (transform round trip, shell reconstruction, projection
idempotence, Poisson identity) are exact contracts and fail the run when
violated.  Inequality ensembles only report empirical constants; their
magnitudes never fail a run.

Trials are independent, so the driver can farm them out to worker threads;
results are gathered in task order and written by a single writer, which
keeps report bytes identical for a fixed seed no matter the worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .spectral import (
    Field,
    Grid,
    SpectralField,
    dealias,
    derivative,
    leray_project,
    poisson_solve,
    to_physical,
    to_spectral,
)
from .lp import decompose, split_low_high
from .synth import random_band_field, solenoidal_noise
from .lemmas import (
    LemmaTrial,
    bernstein_sweep,
    ensemble_stats,
    interpolation_ensemble,
    lowhigh_ensemble,
    oscillation_sweep,
    triple_degradation,
    triple_ensemble,
)

LEMMA_NAMES = ("invariants", "interpolation", "triple_product", "low_high", "bernstein")


@dataclass
class VerifyOutcome:
    hard_failures: list[str] = field(default_factory=list)
    trials: list[tuple[str, float, LemmaTrial]] = field(default_factory=list)
    summary_lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.hard_failures


def _laplacian(f: Field) -> Field:
    F = to_spectral(f)
    c = derivative(F, "x", 2).coeffs + derivative(F, "y", 2).coeffs
    return to_physical(SpectralField(F.grid, c))


def hard_invariant_failures(grid: Grid, seed: int, n_fields: int = 5) -> list[str]:
    """Exact contracts checked on random fields; returns failure messages."""
    rng = np.random.default_rng(seed)
    fails = []

    def check(name, value, tol):
        if not value <= tol:
            fails.append(f"{grid.nx}x{grid.ny}: {name} residual {value:.3e} > {tol:.1e}")

    for _ in range(n_fields):
        f = Field(grid, rng.standard_normal(grid.shape))
        scale = float(np.abs(f.values).max())

        rt = to_physical(to_spectral(f))
        check("transform round trip", np.abs(rt.values - f.values).max() / scale, 1e-12)

        for flavor in ("homogeneous", "inhomogeneous"):
            rec = decompose(f, flavor).reconstruct()
            check(f"{flavor} reconstruction", np.abs(rec.values - f.values).max() / scale, 1e-10)

        low, high = split_low_high(f, grid.kmax / 3.0)
        check("split complement", np.abs(low.values + high.values - f.values).max() / scale, 1e-14)

        F = to_spectral(f)
        d1 = dealias(F)
        check("dealias idempotence", float(np.abs(dealias(d1).coeffs - d1.coeffs).max()), 0.0)

        u, v = solenoidal_noise(grid, rng, 1.0, grid.kmax / 4.0, -1.0)
        pu, pv = leray_project(u, v)
        pu2, pv2 = leray_project(pu, pv)
        ref = max(np.abs(pu.values).max(), np.abs(pv.values).max())
        check(
            "projection idempotence",
            max(np.abs(pu2.values - pu.values).max(), np.abs(pv2.values - pv.values).max()) / ref,
            1e-12,
        )

        src = random_band_field(grid, rng, 1.0, grid.kmax / 4.0, -1.0)
        lap = _laplacian(poisson_solve(src))
        mean = src.values.mean()
        check(
            "poisson identity",
            np.abs(lap.values - (src.values - mean)).max() / np.abs(src.values).max(),
            1e-10,
        )
    return fails


def _stats_line(trials) -> str:
    s = ensemble_stats(trials)
    return f"n={s['n']} maxC={s['max']!r} p95C={s['p95']!r}"


def lowhigh_cell_maxima(trials) -> dict[tuple[str, float | None], dict[float, float]]:
    """Ensemble max of the empirical constant per (lemma, q) and radius."""
    cells: dict[tuple[str, float | None], dict[float, float]] = {}
    for t in trials:
        key = (t.lemma, t.params.get("q"))
        per_r = cells.setdefault(key, {})
        radius = t.params["R"]
        per_r[radius] = max(per_r.get(radius, 0.0), t.empirical_c)
    return cells


def lowhigh_spread_lines(trials) -> list[str]:
    lines = []
    for (lemma, q), per_r in sorted(
        lowhigh_cell_maxima(trials).items(), key=lambda kv: (kv[0][0], kv[0][1] or 0.0)
    ):
        vals = [per_r[r] for r in sorted(per_r)]
        lo = min(vals)
        spread = max(vals) / lo if lo > 0 else float("inf")
        qtxt = f" q={q:g}" if q is not None else ""
        lines.append(
            f"  {lemma}{qtxt}: spread={spread!r} maxima="
            + "[" + ", ".join(repr(v) for v in vals) + "]"
        )
    return lines


def run_verify(
    lemmas,
    ensemble: int,
    grid_sizes=(128,),
    boxes=(2 * np.pi,),
    qs=(2.0, 4.0, 8.0, 16.0),
    rgrid=(2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0),
    radii=(4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0),
    s_values=(2.0,),
    seed: int = 0,
    workers: int = 1,
    lowhigh_grid: int = 768,
) -> VerifyOutcome:
    """Execute the selected checks; see LEMMA_NAMES for the vocabulary.

    The low/high sweep runs on its own (larger) grid so that the radius
    sweep stays clear of the spectral corner; everything else sweeps over
    grid_sizes and boxes.
    """
    unknown = set(lemmas) - set(LEMMA_NAMES)
    if unknown:
        raise ValueError(f"unknown lemma selection {sorted(unknown)}; have {LEMMA_NAMES}")

    tasks = []  # callables returning (kind, box, trials, lines, failures)

    for box in sorted(boxes):
        for n in sorted(grid_sizes):
            grid = Grid(int(n), int(n), box, box)
            if "invariants" in lemmas:
                def _inv(g=grid, b=box):
                    fails = hard_invariant_failures(g, seed)
                    line = f"invariants {g.nx}x{g.ny} box={b:.6g}: " + (
                        "ok" if not fails else f"{len(fails)} FAILURES"
                    )
                    return ("invariants", b, [], [line], fails)
                tasks.append(_inv)
            if "interpolation" in lemmas:
                def _interp(g=grid, b=box):
                    trials, rescaled = interpolation_ensemble(g, ensemble, s_values[0], seed, rgrid)
                    trials += oscillation_sweep(g, s_values[0], rgrid)
                    lines = [
                        f"interpolation {g.nx}x{g.ny} box={b:.6g}: {_stats_line(trials)}, "
                        f"rescaled_to_floor={rescaled}"
                    ]
                    return ("interpolation", b, trials, lines, [])
                tasks.append(_interp)
            if "triple_product" in lemmas:
                def _triple(g=grid, b=box):
                    trials = triple_ensemble(g, max(1, ensemble // 4), qs=(2.0, 3.0, 4.0, 8.0), seed=seed)
                    deg = triple_degradation(g, (0.05, 0.1, 0.2, 0.35), 3.0, seed)
                    lines = [f"triple_product {g.nx}x{g.ny} box={b:.6g}: {_stats_line(trials)}"]
                    lines += [
                        f"  degradation width={t.params['width']}: C={t.empirical_c!r}" for t in deg
                    ]
                    return ("triple_product", b, trials + deg, lines, [])
                tasks.append(_triple)
            if "bernstein" in lemmas:
                def _bern(g=grid, b=box):
                    trials = bernstein_sweep(g, max(1, ensemble // 2), seed=seed)
                    lines = [f"bernstein {g.nx}x{g.ny} box={b:.6g}: {_stats_line(trials)}"]
                    return ("bernstein", b, trials, lines, [])
                tasks.append(_bern)

    if "low_high" in lemmas:
        for box in sorted(boxes):
            grid = Grid(lowhigh_grid, lowhigh_grid, box, box)

            def _lh(g=grid, b=box):
                trials = lowhigh_ensemble(g, ensemble, radii, qs, seed)
                lines = [f"low_high {g.nx}x{g.ny} box={b:.6g}: {_stats_line(trials)}"]
                lines += lowhigh_spread_lines(trials)
                return ("low_high", b, trials, lines, [])
            tasks.append(_lh)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda fn: fn(), tasks))
    else:
        results = [fn() for fn in tasks]

    out = VerifyOutcome()
    for kind, box, trials, lines, failures in results:
        out.hard_failures.extend(failures)
        out.summary_lines.extend(lines)
        out.trials.extend((kind, box, t) for t in trials)
    return out


def write_reports(outcome: VerifyOutcome, outdir) -> None:
    """lemma_trials.csv plus verify_summary.txt, byte-deterministic."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "lemma_trials.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lemma", "box", "params", "lhs", "rhs_factor", "empirical_c"])
        for _, box, t in outcome.trials:
            w.writerow([
                t.lemma,
                repr(float(box)),
                t.params_str(),
                repr(float(t.lhs)),
                repr(float(t.rhs_factor)),
                repr(float(t.empirical_c)),
            ])
    lines = ["verification summary", ""]
    lines.append(f"hard invariant failures: {len(outcome.hard_failures)}")
    lines += [f"  {m}" for m in outcome.hard_failures]
    lines += outcome.summary_lines
    (out / "verify_summary.txt").write_text("\n".join(lines) + "\n")
