"""Post-run reporting: summary tables, CSV, and figures from diagnostics.

Reads the diagnostics.csv a run produced and emits, into <run_dir>/report/,
a plain-text summary, a machine-readable summary.csv, and PNG figures for
the growth envelope, the regularity energy, the pressure bounds, and the
temperature norms.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class ReportError(ValueError):
    pass


def load_diagnostics(run_dir) -> tuple[list[str], np.ndarray]:
    """Header and float matrix of a run's diagnostics.csv."""
    path = Path(run_dir) / "diagnostics.csv"
    if not path.exists():
        raise ReportError(f"no diagnostics found in {run_dir}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ReportError(f"{path}: no data rows")
    header = rows[0]
    try:
        data = np.array([[float(x) for x in row] for row in rows[1:]])
    except ValueError as err:
        raise ReportError(f"{path}: corrupt data ({err})")
    if data.shape[1] != len(header):
        raise ReportError(f"{path}: ragged rows")
    return header, data


def _col(header, data, name) -> np.ndarray:
    try:
        return data[:, header.index(name)]
    except ValueError:
        raise ReportError(f"diagnostics.csv lacks column {name!r}")


def growth_envelope(header, data) -> tuple[np.ndarray, np.ndarray]:
    """Empirical B(t): max_r (||v(t)||_2r - ||v0||_2r)/sqrt(r log r)."""
    names = [h for h in header if h.startswith("v_l2r_")]
    if not names:
        raise ReportError("diagnostics.csv lacks v_l2r_* columns")
    rs = [float(h.split("_")[-1].replace("p", ".")) / 2.0 for h in names]
    cols = np.stack([_col(header, data, h) for h in names], axis=1)
    weights = np.sqrt([r * np.log(r) for r in rs])
    b = ((cols - cols[0]) / weights).max(axis=1)
    return b, np.maximum.accumulate(b)


def summarize(header, data) -> tuple[list[str], list[tuple[str, float]]]:
    """Text lines and (name, value) pairs for the summary files."""
    t = _col(header, data, "t")
    pairs: list[tuple[str, float]] = [("t_first", t[0]), ("t_last", t[-1]),
                                      ("samples", float(len(t)))]
    lines = [f"run diagnostics: {len(t)} samples over t in [{t[0]:.6g}, {t[-1]:.6g}]", ""]

    lines.append("bound quantities (max over the run):")
    for name in ("l4_uv", "v8", "uy2", "p2", "p4", "sup_ratio", "vinf"):
        val = float(_col(header, data, name).max())
        pairs.append((f"max_{name}", val))
        lines.append(f"  max {name:10s} = {val:.8g}")
    for name in ("gradp2_int", "grady_uv_int"):
        val = float(_col(header, data, name)[-1])
        pairs.append((f"final_{name}", val))
        lines.append(f"  final {name:10s} = {val:.8g}")
    lines.append("")

    b, env = growth_envelope(header, data)
    pairs.append(("growth_envelope_max", float(env[-1])))
    pairs.append(("growth_envelope_finite", float(np.isfinite(b).all())))
    lines.append(f"growth envelope: max B = {env[-1]:.8g}, finite = {bool(np.isfinite(b).all())}")

    y = _col(header, data, "regularity_energy")
    pairs.append(("regularity_energy_max", float(y.max())))
    pairs.append(("regularity_energy_final", float(y[-1])))
    lines.append(f"regularity energy: max = {y.max():.8g}, final = {y[-1]:.8g}")

    gap = _col(header, data, "energy_gap")
    pairs.append(("energy_gap_min", float(gap.min())))
    # the budget is an exact equality on dissipation-only runs, so allow the
    # same relative tolerance the trajectory checks use
    uv0 = _col(header, data, "l2_uv")[0]
    th0 = _col(header, data, "theta_lq_2")[0]
    budget_last = (uv0 + t[-1] * th0) ** 2
    if gap.min() >= 0:
        verdict = "nonnegative"
    elif gap.min() >= -1e-6 * budget_last:
        verdict = "zero within tolerance"
    else:
        verdict = "NEGATIVE"
    pairs.append(("energy_gap_ok", float(gap.min() >= -1e-6 * budget_last)))
    lines.append(f"energy budget gap: min = {gap.min():.8g} ({verdict})")

    mono_ok = True
    for name in [h for h in header if h.startswith("theta_lq_")] + ["theta_linf"]:
        col = _col(header, data, name)
        worst = float((col[1:] - col[:-1]).max(initial=0.0))
        if worst > 1e-9 * max(col[0], 1e-300):
            mono_ok = False
    pairs.append(("theta_norms_nonincreasing", float(mono_ok)))
    lines.append(f"theta norms nonincreasing: {mono_ok}")

    integ_ok = True
    for name in ("gradp2_int", "grady_uv_int", "theta_diss2_int", "theta_diss4_int"):
        col = _col(header, data, name)
        if np.any(np.diff(col) < 0):
            integ_ok = False
    pairs.append(("running_integrals_nondecreasing", float(integ_ok)))
    lines.append(f"running integrals nondecreasing: {integ_ok}")

    div = _col(header, data, "div_ratio")
    pairs.append(("div_ratio_max", float(div.max())))
    lines.append(f"incompressibility: max div ratio = {div.max():.3e}")
    return lines, pairs


def _figure_growth(header, data, path) -> None:
    t = _col(header, data, "t")
    b, env = growth_envelope(header, data)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, b, label="B(t)")
    ax.plot(t, env, "--", label="running max")
    ax.set_xlabel("t")
    ax.set_ylabel("growth envelope")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _figure_regularity(header, data, path) -> None:
    t = _col(header, data, "t")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(t, np.maximum(_col(header, data, "regularity_energy"), 1e-300), label="regularity energy")
    ax2 = ax.twinx()
    ax2.plot(t, _col(header, data, "vinf"), color="tab:orange", label="||v||_inf")
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax2.set_ylabel("||v||_inf")
    h1, l1 = ax.get_legend_handles_labels()
    h2, l2 = ax2.get_legend_handles_labels()
    ax.legend(h1 + h2, l1 + l2, loc="best")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _figure_pressure(header, data, path) -> None:
    t = _col(header, data, "t")
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in ("p2", "p4", "gradp2_int"):
        ax.plot(t, _col(header, data, name), label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("pressure bounds")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _figure_theta(header, data, path) -> None:
    t = _col(header, data, "t")
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in [h for h in header if h.startswith("theta_lq_")] + ["theta_linf"]:
        ax.plot(t, _col(header, data, name), label=name.replace("theta_lq_", "q="))
    ax.set_xlabel("t")
    ax.set_ylabel("||theta||_q")
    ax.legend(ncol=2, fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(run_dir, outdir=None) -> Path:
    """Emit summary.txt, summary.csv and PNG figures; returns the directory."""
    header, data = load_diagnostics(run_dir)
    out = Path(outdir) if outdir is not None else Path(run_dir) / "report"
    out.mkdir(parents=True, exist_ok=True)

    lines, pairs = summarize(header, data)
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "value"])
        for name, value in pairs:
            w.writerow([name, repr(float(value))])

    _figure_growth(header, data, out / "growth_envelope.png")
    _figure_regularity(header, data, out / "regularity_energy.png")
    _figure_pressure(header, data, out / "pressure_bounds.png")
    _figure_theta(header, data, out / "theta_norms.png")
    return out
