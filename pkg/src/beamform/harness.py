"""Monte-Carlo experiment driver: seeded trials, sweeps, CSV emission.

Every trial draws one channel from a seed derived only from (master seed,
trial id), runs every configured scheme and SNR point on that same channel,
and emits one CSV row per (trial, scheme, SNR). Results are byte-identical
for any worker count and unchanged for existing trials when more are added.
"""

from __future__ import annotations

import dataclasses
import hashlib
import io
import math
from dataclasses import dataclass

import joblib
import numpy as np

from .channel import ArrayGeometry, SystemDims, assemble_channel, draw_paths
from .codebook import CodebookSpec
from .exceptions import BudgetExceededError
from .full_search import DEFAULT_EVAL_CEILING, fs_complexity, full_search
from .metric import EvalCounter, LinkBudget
from .turbo import TurboParams, turbo_search

__all__ = [
    "CASE_PRESETS",
    "KNOWN_SCHEMES",
    "SWEEP_AXES",
    "ExperimentConfig",
    "TrialRecord",
    "SweepPoint",
    "parse_snr_spec",
    "load_config_file",
    "build_config",
    "derive_trial_seed",
    "run_experiment",
    "parameter_sweep",
    "emit_csv",
    "emit_sweep_csv",
]

KNOWN_SCHEMES = ("fs", "turbo_ts")
SWEEP_AXES = ("max_iter", "max_len", "m_restarts", "k_iterations")

# Search controls tied to codebook resolution: finer grids get longer walks
# and more restarts.
CASE_PRESETS = {
    4: {"max_iter": 500, "max_len": 100, "m_restarts": 1},
    5: {"max_iter": 1000, "max_len": 200, "m_restarts": 2},
    6: {"max_iter": 3000, "max_len": 600, "m_restarts": 5},
}

CSV_HEADER = "trial_id,scheme,snr_db,nt,nr,nrf,bits_t,bits_r,rate_bps_hz,evals,message_rounds,seed"


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat description of one experiment; config-file keys match field names."""

    nt: int = 64
    nr: int = 16
    n_rf: int = 2
    bits_t: int = 4
    bits_r: int = 4
    l_paths: int = 3
    snr_db_list: tuple = (0.0,)
    trials: int = 500
    seed: int = 1
    schemes: tuple = KNOWN_SCHEMES
    max_iter: int = 500
    max_len: int = 100
    m_restarts: int = 1
    k_iterations: int = 4
    warm_start: bool = True
    fs_ceiling: int = DEFAULT_EVAL_CEILING
    workers: int = 1
    spacing: float = 0.5

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.snr_db_list) < 1:
            raise ValueError("snr_db_list must not be empty")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        for s in self.schemes:
            if s not in KNOWN_SCHEMES:
                raise ValueError(f"unknown scheme {s!r}, expected one of {KNOWN_SCHEMES}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def dims(self) -> SystemDims:
        return SystemDims.symmetric(self.nt, self.nr, self.n_rf)

    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(spacing_over_wavelength=self.spacing)

    def spec_t(self) -> CodebookSpec:
        return CodebookSpec(self.nt, self.n_rf, self.bits_t, self.geometry())

    def spec_r(self) -> CodebookSpec:
        return CodebookSpec(self.nr, self.n_rf, self.bits_r, self.geometry())

    def turbo_params(self) -> TurboParams:
        return TurboParams.shared(
            max_iter=self.max_iter,
            max_len=self.max_len,
            m_restarts=self.m_restarts,
            k_iterations=self.k_iterations,
            warm_start=self.warm_start,
        )


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row: one scheme at one SNR on one trial's channel."""

    trial_id: int
    scheme: str
    snr_db: float
    nt: int
    nr: int
    n_rf: int
    bits_t: int
    bits_r: int
    rate: float
    evals: int
    message_rounds: int
    seed_used: int


@dataclass(frozen=True)
class SweepPoint:
    """Mean rate of one scheme at one swept parameter value."""

    axis: str
    value: int
    scheme: str
    mean_rate: float
    trials: int


# ----------------------------------------------------------------------------
# configuration parsing
# ----------------------------------------------------------------------------


def parse_snr_spec(text: str) -> tuple:
    """Parse an SNR list: '0', '-5,0,5', or inclusive 'start:step:stop'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"SNR step must be positive, got {step}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ValueError(f"empty SNR range {text!r}")
        return tuple(start + i * step for i in range(n))
    if "," in text:
        vals = tuple(float(p) for p in text.split(",") if p.strip())
        if not vals:
            raise ValueError(f"no SNR values in {text!r}")
        return vals
    return (float(text),)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


_FIELD_PARSERS = {
    "snr_db_list": parse_snr_spec,
    "schemes": lambda s: tuple(p.strip() for p in s.split(",") if p.strip()),
    "warm_start": _parse_bool,
    "spacing": float,
}


def load_config_file(path: str) -> dict:
    """Read a flat key=value file ('#' starts a comment) into a string map."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge config sources into an ExperimentConfig.

    Precedence: overrides (already typed, e.g. from the CLI) > file values >
    per-bits presets for unset search controls > dataclass defaults.
    """
    field_types = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    merged: dict = {}
    for key, text in (file_values or {}).items():
        if key not in field_types:
            raise ValueError(f"unknown configuration key {key!r}")
        parser = _FIELD_PARSERS.get(key, int)
        merged[key] = parser(text)
    for key, val in (overrides or {}).items():
        if key not in field_types:
            raise ValueError(f"unknown configuration key {key!r}")
        merged[key] = val

    bits_t = merged.get("bits_t", ExperimentConfig.bits_t)
    bits_r = merged.get("bits_r", ExperimentConfig.bits_r)
    if bits_t == bits_r and bits_t in CASE_PRESETS:
        for key, val in CASE_PRESETS[bits_t].items():
            merged.setdefault(key, val)
    return ExperimentConfig(**merged)


# ----------------------------------------------------------------------------
# execution
# ----------------------------------------------------------------------------


def derive_trial_seed(master_seed: int, trial_id: int) -> int:
    """Stable per-trial seed: first 8 bytes of sha256('master:trial').

    Platform and library independent, so trial t's channel never changes when
    the trial count grows or work is split across processes.
    """
    digest = hashlib.sha256(f"{master_seed}:{trial_id}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def _run_single_trial(config: ExperimentConfig, trial_id: int) -> list:
    seed_used = derive_trial_seed(config.seed, trial_id)
    rng = np.random.default_rng(seed_used)
    paths = draw_paths(config.l_paths, rng)
    h = assemble_channel(config.dims(), paths, config.geometry())
    spec_t, spec_r = config.spec_t(), config.spec_r()
    records = []
    for snr_db in config.snr_db_list:
        budget = LinkBudget.from_snr_db(snr_db)
        for scheme in config.schemes:
            if scheme == "fs":
                counter = EvalCounter()
                res = full_search(
                    h, spec_t, spec_r, budget,
                    eval_ceiling=config.fs_ceiling, counter=counter,
                )
                rate_val, evals, rounds = res.rate, counter.count, 0
            else:
                res = turbo_search(h, spec_t, spec_r, budget, config.turbo_params())
                rate_val, evals, rounds = res.rate, res.evals_total, res.message_rounds
            records.append(
                TrialRecord(
                    trial_id=trial_id,
                    scheme=scheme,
                    snr_db=float(snr_db),
                    nt=config.nt,
                    nr=config.nr,
                    n_rf=config.n_rf,
                    bits_t=config.bits_t,
                    bits_r=config.bits_r,
                    rate=rate_val,
                    evals=evals,
                    message_rounds=rounds,
                    seed_used=seed_used,
                )
            )
    return records


def run_experiment(config: ExperimentConfig) -> list:
    """Run all trials and return records sorted by (trial_id, scheme, snr_db)."""
    if "fs" in config.schemes:
        needed = fs_complexity(config.spec_t(), config.spec_r())
        if needed > config.fs_ceiling:
            raise BudgetExceededError(
                f"exhaustive scheme needs {needed} evaluations per trial/SNR, "
                f"ceiling is {config.fs_ceiling}; raise fs_ceiling to allow it"
            )
    # Validate search/codebook parameters once up front, not per worker.
    config.dims()
    config.turbo_params()
    if config.workers > 1:
        batches = joblib.Parallel(n_jobs=config.workers)(
            joblib.delayed(_run_single_trial)(config, t) for t in range(config.trials)
        )
    else:
        batches = [_run_single_trial(config, t) for t in range(config.trials)]
    records = [rec for batch in batches for rec in batch]
    records.sort(key=lambda r: (r.trial_id, r.scheme, r.snr_db))
    return records


def parameter_sweep(config: ExperimentConfig, axis: str, values) -> list:
    """Re-run the experiment for each value of one search control.

    Returns one SweepPoint per (value, scheme), mean rate over all trials and
    SNR points. Sweeping max_iter clamps max_len down to it so degenerate
    caps (e.g. a single step) stay constructible.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")
    values = [int(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one value")
    points = []
    for value in values:
        over = {axis: value}
        if axis == "max_iter":
            over["max_len"] = min(config.max_len, value)
        cfg = dataclasses.replace(config, **over)
        records = run_experiment(cfg)
        for scheme in cfg.schemes:
            rates = [r.rate for r in records if r.scheme == scheme]
            points.append(
                SweepPoint(
                    axis=axis,
                    value=value,
                    scheme=scheme,
                    mean_rate=sum(rates) / len(rates),
                    trials=cfg.trials,
                )
            )
    return points


# ----------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------


def emit_csv(records) -> str:
    """Render trial records as CSV text, sorted, rates to 6 significant digits."""
    if not records:
        raise ValueError("no records to emit")
    rows = sorted(records, key=lambda r: (r.trial_id, r.scheme, r.snr_db))
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in rows:
        out.write(
            f"{r.trial_id},{r.scheme},{r.snr_db:g},{r.nt},{r.nr},{r.n_rf},"
            f"{r.bits_t},{r.bits_r},{r.rate:.6g},{r.evals},{r.message_rounds},{r.seed_used}\n"
        )
    return out.getvalue()


def emit_sweep_csv(points) -> str:
    """Render sweep points as CSV text."""
    if not points:
        raise ValueError("no sweep points to emit")
    out = io.StringIO()
    out.write("axis,value,scheme,mean_rate_bps_hz,trials\n")
    for p in points:
        out.write(f"{p.axis},{p.value},{p.scheme},{p.mean_rate:.6g},{p.trials}\n")
    return out.getvalue()
