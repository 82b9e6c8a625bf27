"""Flat key-value configuration files for the command-line tools.

Format: one "section.key = value" per line, "#" starts a comment, blank
lines ignored.  Lists are comma-separated.  Parsing collects every problem
(unknown key, missing required key, bad value) and reports them all at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * np.pi


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("config error:\n" + "\n".join(f"  - {p}" for p in problems))


def parse_kv(text: str) -> tuple[dict[str, str], list[str]]:
    pairs: dict[str, str] = {}
    problems: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            problems.append(f"line {lineno}: empty key")
            continue
        if key in pairs:
            problems.append(f"line {lineno}: duplicate key {key!r}")
            continue
        pairs[key] = value
    return pairs, problems


class _Reader:
    """Typed access over parsed pairs, accumulating problems."""

    def __init__(self, pairs: dict[str, str]):
        self.pairs = dict(pairs)
        self.problems: list[str] = []

    def _take(self, key: str, required: bool):
        if key in self.pairs:
            return self.pairs.pop(key)
        if required:
            self.problems.append(f"missing required key {key!r}")
        return None

    def str_(self, key: str, default: str | None = None, required: bool = False, choices=None):
        raw = self._take(key, required)
        if raw is None:
            return default
        if choices is not None and raw not in choices:
            self.problems.append(f"{key}: {raw!r} not one of {sorted(choices)}")
            return default
        return raw

    def float_(self, key: str, default=None, required: bool = False):
        raw = self._take(key, required)
        if raw is None:
            return default
        try:
            val = float(raw)
        except ValueError:
            self.problems.append(f"{key}: {raw!r} is not a number")
            return default
        if not np.isfinite(val):
            self.problems.append(f"{key}: {raw!r} is not finite")
            return default
        return val

    def int_(self, key: str, default=None, required: bool = False):
        raw = self._take(key, required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            self.problems.append(f"{key}: {raw!r} is not an integer")
            return default

    def bool_(self, key: str, default=None):
        raw = self._take(key, False)
        if raw is None:
            return default
        lowered = raw.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        self.problems.append(f"{key}: {raw!r} is not a boolean (true/false)")
        return default

    def float_list(self, key: str, default=None, required: bool = False):
        raw = self._take(key, required)
        if raw is None:
            return default
        out = []
        bad = False
        for item in raw.split(","):
            item = item.strip()
            if not item:
                continue
            try:
                out.append(float(item))
            except ValueError:
                self.problems.append(f"{key}: list item {item!r} is not a number")
                bad = True
        if not out and not bad:
            self.problems.append(f"{key}: list must be nonempty")
        return tuple(out) if out else default

    def int_list(self, key: str, default=None, required: bool = False):
        vals = self.float_list(key, None, required)
        if vals is None:
            return default
        out = []
        for v in vals:
            if v != int(v):
                self.problems.append(f"{key}: {v!r} is not an integer")
            else:
                out.append(int(v))
        return tuple(out)

    def str_list(self, key: str, default=None, required: bool = False):
        raw = self._take(key, required)
        if raw is None:
            return default
        items = tuple(s.strip() for s in raw.split(",") if s.strip())
        if not items:
            self.problems.append(f"{key}: list must be nonempty")
        return items

    def finish(self, what: str):
        for key in sorted(self.pairs):
            self.problems.append(f"unknown key {key!r} for {what}")
        if self.problems:
            raise ConfigError(self.problems)


@dataclass(frozen=True)
class RunConfig:
    nx: int
    ny: int
    lx: float
    ly: float
    nu: float
    kappa: float
    dt: float
    cfl_limit: float
    dealias: bool
    preset: str
    checkpoint: str | None
    amplitude: float | None  # None = use the preset's own default
    spectrum_slope: float
    seed: int
    t_end: float
    cadence: int
    outdir: str
    snapshot_every: int
    qgrid: tuple[float, ...]
    rgrid: tuple[float, ...]

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        pairs, problems = parse_kv(text)
        r = _Reader(pairs)
        r.problems.extend(problems)
        cfg = cls(
            nx=r.int_("grid.nx", required=True),
            ny=r.int_("grid.ny", required=True),
            lx=r.float_("grid.lx", TWO_PI),
            ly=r.float_("grid.ly", TWO_PI),
            nu=r.float_("params.nu", required=True),
            kappa=r.float_("params.kappa", required=True),
            dt=r.float_("stepper.dt", required=True),
            cfl_limit=r.float_("stepper.cfl_limit", 0.8),
            dealias=r.bool_("stepper.dealias", True),
            preset=r.str_("init.preset", required=True,
                          choices=("shear", "stratified", "random", "checkpoint")),
            checkpoint=r.str_("init.checkpoint", None),
            amplitude=r.float_("init.amplitude", None),
            spectrum_slope=r.float_("init.spectrum_slope", -2.0),
            seed=r.int_("init.seed", 0),
            t_end=r.float_("t_end", required=True),
            cadence=r.int_("diagnostics.cadence", 10),
            outdir=r.str_("output.dir", "run_output"),
            snapshot_every=r.int_("output.snapshot_every", 0),
            qgrid=r.float_list("diagnostics.qgrid", (2.0, 4.0, 8.0, 16.0, 32.0, 64.0)),
            rgrid=r.float_list("diagnostics.rgrid",
                               (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)),
        )
        if cfg.preset == "checkpoint" and not cfg.checkpoint:
            r.problems.append("init.checkpoint required when init.preset = checkpoint")
        if cfg.t_end is not None and cfg.t_end <= 0:
            r.problems.append(f"t_end must be positive, got {cfg.t_end}")
        for name, val in (("params.nu", cfg.nu), ("params.kappa", cfg.kappa)):
            if val is not None and val < 0:
                r.problems.append(f"{name} must be >= 0, got {val}")
        if cfg.cadence is not None and cfg.cadence < 1:
            r.problems.append("diagnostics.cadence must be >= 1")
        r.finish("run config")
        return cfg

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls.from_text(Path(path).read_text())


@dataclass(frozen=True)
class VerifyConfig:
    lemmas: tuple[str, ...]
    ensemble: int
    grid_sizes: tuple[int, ...]
    boxes: tuple[float, ...]
    qs: tuple[float, ...]
    rgrid: tuple[float, ...]
    radii: tuple[float, ...]
    s_values: tuple[float, ...]
    seed: int
    workers: int
    lowhigh_grid: int
    outdir: str

    @classmethod
    def from_text(cls, text: str) -> "VerifyConfig":
        from .verify import LEMMA_NAMES

        pairs, problems = parse_kv(text)
        r = _Reader(pairs)
        r.problems.extend(problems)
        lemmas = r.str_list("lemmas", required=True) or ()
        if "all" in lemmas:
            lemmas = LEMMA_NAMES
        cfg = cls(
            lemmas=lemmas,
            ensemble=r.int_("ensemble", required=True),
            grid_sizes=r.int_list("grid.sizes", (128,)),
            boxes=r.float_list("box.sizes", (TWO_PI,)),
            qs=r.float_list("sweep.q", (2.0, 4.0, 8.0, 16.0)),
            rgrid=r.float_list("sweep.r", (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)),
            radii=r.float_list("sweep.R", (4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)),
            s_values=r.float_list("sweep.s", (2.0,)),
            seed=r.int_("seed", 0),
            workers=r.int_("workers", 1),
            lowhigh_grid=r.int_("lowhigh.grid", 768),
            outdir=r.str_("output.dir", "verify_output"),
        )
        unknown = set(cfg.lemmas) - set(LEMMA_NAMES)
        if unknown:
            r.problems.append(
                f"lemmas: unknown selections {sorted(unknown)}; have {sorted(LEMMA_NAMES)} or 'all'"
            )
        if cfg.ensemble is not None and cfg.ensemble < 1:
            r.problems.append("ensemble must be >= 1")
        for key, seq in (("sweep.q", cfg.qs), ("sweep.r", cfg.rgrid),
                         ("sweep.R", cfg.radii), ("sweep.s", cfg.s_values)):
            if seq is not None and len(seq) == 0:
                r.problems.append(f"{key} must be nonempty")
        r.finish("verify config")
        return cfg

    @classmethod
    def from_file(cls, path) -> "VerifyConfig":
        return cls.from_text(Path(path).read_text())
