"""Seeded experiment sweeps and CSV emission.

Every trial seed derives from (master_seed, sweep point index, trial index,
method) through ``numpy.random.SeedSequence``, whose hashing is documented
stable, so any CSV row can be replayed in isolation.  The test matrix is
fixed per sweep point (only the sampling seed varies across trials) unless
``regenerate_matrix_per_trial`` is set.

Breakdowns never abort a sweep: they become rows with breakdown=true and
empty metric cells.
"""

import csv
import json
import math
import time
from dataclasses import dataclass, field, fields
from typing import List, Optional

import numpy as np

from .algorithms import cholesky_qr, cholesky_qr2, preconditioned_cholesky_qr, rp_cholesky_qr
from .bounds import U, ortho_estimate
from .errors import CholeskyBreakdown, RankDeficientSampleError
from .genmat import haar_rotated, worst_coherence_stack
from .kernels import householder_qr
from .metrics import TrialRecord, cond2, eta, ortho_deviation, rel_residual

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "experiment",
    "matrix_kind",
    "m",
    "n",
    "c",
    "kappa_target",
    "trial",
    "seed",
    "method",
    "breakdown",
    "deviation",
    "residual",
    "kappa_A1",
    "eta",
    "estimate_5_2",
    "wall_time_s",
]

_METHOD_CODES = {"basic": 0, "cqr2": 1, "precond": 2, "rp": 3}
_MATRIX_KINDS = ("worst_coherence", "haar_rotated")
_EXPERIMENTS = ("single", "sweep_c", "sweep_n", "compare_cqr2")
_MATRIX_TAG = 0xA117  # reserved tag for matrix-generation seeds


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    matrix_kind: str = "worst_coherence"
    m: int = 2000
    n: Optional[int] = None
    n_list: Optional[List[int]] = None
    c: Optional[int] = None
    c_list: Optional[List[int]] = None
    kappa: float = 1e15
    method: str = "rp"
    trials: int = 10
    master_seed: int = 0
    retry_on_rank_deficient: int = 3
    regenerate_matrix_per_trial: bool = False
    output_path: Optional[str] = None

    def validate(self):
        if self.experiment not in _EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.matrix_kind not in _MATRIX_KINDS:
            raise ConfigError(f"unknown matrix_kind {self.matrix_kind!r}")
        if self.method not in _METHOD_CODES:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        needs_n = self.experiment in ("single", "sweep_c") or (
            self.experiment == "compare_cqr2" and self.n_list is None
        )
        if needs_n:
            if self.n is None:
                raise ConfigError("n is required")
            if self.n > self.m:
                raise ConfigError("n must be <= m")
        if self.experiment == "sweep_c":
            if not self.c_list:
                raise ConfigError("c_list is required for sweep_c")
            if any(c < self.n for c in self.c_list):
                raise ConfigError("every c in c_list must be >= n")
        if self.experiment == "sweep_n":
            if not self.n_list:
                raise ConfigError("n_list is required for sweep_n")
            if any(n > self.m for n in self.n_list):
                raise ConfigError("every n in n_list must be <= m")
        if self.experiment == "compare_cqr2":
            if self.matrix_kind != "haar_rotated":
                raise ConfigError("compare_cqr2 requires matrix_kind=haar_rotated")
            if self.c_list is None and self.n_list is None and self.c is None:
                raise ConfigError("compare_cqr2 needs c, c_list or n_list")
        return self


def load_config(path):
    """Load an ExperimentConfig from a JSON key-value file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid config syntax: {exc}") from exc
    if raw.pop("schema_version", None) != SCHEMA_VERSION:
        raise ConfigError(f"{path}: missing or unsupported schema_version")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    try:
        return ExperimentConfig(**raw).validate()
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def derive_seed(master_seed, point_index, trial_index, method):
    """Stable per-trial seed; distinct (point, trial, method) never collide."""
    ss = np.random.SeedSequence(
        [int(master_seed), int(point_index), int(trial_index),
         _METHOD_CODES[method]]
    )
    return int(ss.generate_state(1, np.uint64)[0])


def derive_matrix_seed(master_seed, point_index, trial_index=None):
    entropy = [int(master_seed), int(point_index), _MATRIX_TAG]
    if trial_index is not None:
        entropy.append(int(trial_index))
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint64)[0])


def generate_matrix(kind, m, n, kappa, seed):
    if kind == "worst_coherence":
        return worst_coherence_stack(m, n, kappa, seed)
    if kind == "haar_rotated":
        return haar_rotated(m, n, kappa, seed)
    raise ConfigError(f"unknown matrix_kind {kind!r}")


def _run_method(A, method, c, seed, retries):
    """Run one factorization; returns (factors, A1_or_None, R_s_or_None)."""
    if method == "basic":
        return cholesky_qr(A), None, None
    if method == "cqr2":
        return cholesky_qr2(A), None, None
    if method == "precond":
        # Ideal-preconditioner baseline: exact triangular factor of A.
        R_s = householder_qr(A).R
        f, A1 = preconditioned_cholesky_qr(A, R_s)
        return f, A1, R_s
    if method == "rp":
        attempt_seed = seed
        for attempt in range(retries + 1):
            try:
                f, info, A1 = rp_cholesky_qr(A, c, attempt_seed)
                return f, A1, info.R_s
            except RankDeficientSampleError:
                if attempt == retries:
                    raise
                ss = np.random.SeedSequence([int(seed), attempt + 1])
                attempt_seed = int(ss.generate_state(1, np.uint64)[0])
    raise ConfigError(f"unknown method {method!r}")


def run_trial(A, method, m, n, c, kappa_target, seed, retries=3):
    """One factorization plus metrics; breakdowns recorded, not raised."""
    t0 = time.perf_counter()
    try:
        f, A1, R_s = _run_method(A, method, c, seed, retries)
        broke = False
    except (CholeskyBreakdown, RankDeficientSampleError):
        f, A1, R_s = None, None, None
        broke = True
    wall = time.perf_counter() - t0
    uses_c = method == "rp"
    if broke:
        return TrialRecord(
            method=method, m=m, n=n, c=c if uses_c else None, seed=seed,
            deviation=None, residual=None, kappa_A1=None,
            kappa_target=kappa_target, eta=None, breakdown=True,
            wall_time=wall,
        )
    deviation = ortho_deviation(f.Q)
    residual = rel_residual(A, f)
    kappa_A1 = eta_val = None
    if A1 is not None:
        kappa_A1 = cond2(A1)
        eta_val = eta(A, A1, R_s)
    return TrialRecord(
        method=method, m=m, n=n, c=c if uses_c else None, seed=seed,
        deviation=deviation, residual=residual, kappa_A1=kappa_A1,
        kappa_target=kappa_target, eta=eta_val, breakdown=False,
        wall_time=wall,
    )


def run_single(config):
    """Run the one-trial experiment described by ``config``."""
    config.validate()
    c = config.c
    if c is None and config.method == "rp":
        c = 3 * config.n
    mseed = derive_matrix_seed(config.master_seed, 0)
    A = generate_matrix(config.matrix_kind, config.m, config.n, config.kappa,
                        mseed)
    seed = derive_seed(config.master_seed, 0, 0, config.method)
    return run_trial(A, config.method, config.m, config.n, c, config.kappa,
                     seed, retries=config.retry_on_rank_deficient)


def _point_records(config, point_index, n, c, methods):
    records = []
    for trial in range(config.trials):
        mtrial = trial if config.regenerate_matrix_per_trial else None
        mseed = derive_matrix_seed(config.master_seed, point_index, mtrial)
        A = generate_matrix(config.matrix_kind, config.m, n, config.kappa,
                            mseed)
        for method in methods:
            seed = derive_seed(config.master_seed, point_index, trial, method)
            rec = run_trial(A, method, config.m, n, c, config.kappa, seed,
                            retries=config.retry_on_rank_deficient)
            records.append((point_index, trial, rec))
    return records


@dataclass
class SweepPointSummary:
    """Min/arith-mean/geo-mean/max statistics for one sweep point+method."""

    n: int
    c: Optional[int]
    method: str
    trials: int
    breakdown_count: int
    stats: dict = field(default_factory=dict)  # metric -> (min, max, mean, gmean)


def _stat_tuple(values):
    vals = [v for v in values if v is not None and math.isfinite(v)]
    if not vals:
        return None
    gmean = math.exp(sum(math.log(v) for v in vals) / len(vals)) \
        if all(v > 0 for v in vals) else None
    return (min(vals), max(vals), sum(vals) / len(vals), gmean)


def summarize_point(records, n, c, method):
    recs = [r for r in records if r.method == method]
    ok = [r for r in recs if not r.breakdown]
    stats = {}
    for name in ("deviation", "residual", "kappa_A1"):
        stats[name] = _stat_tuple([getattr(r, name) for r in ok])
    stats["estimate_5_2"] = _stat_tuple(
        [ortho_estimate(r.kappa_A1) for r in ok if r.kappa_A1 is not None]
    )
    return SweepPointSummary(
        n=n, c=c, method=method, trials=len(recs),
        breakdown_count=sum(r.breakdown for r in recs), stats=stats,
    )


def _run_sweep(config, points, methods):
    """points: list of (n, c).  Returns (rows, summaries)."""
    rows = []
    summaries = []
    for point_index, (n, c) in enumerate(points):
        recs = _point_records(config, point_index, n, c, methods)
        for _, trial, rec in recs:
            rows.append(_csv_row(config, trial, rec))
        for method in methods:
            summaries.append(
                summarize_point([r for _, _, r in recs], n, c, method)
            )
    return rows, summaries


def sweep_c(config):
    """Trials at each sampling amount in c_list; matrix fixed per point."""
    config.validate()
    points = [(config.n, c) for c in config.c_list]
    return _run_sweep(config, points, [config.method])


def sweep_n(config):
    """Trials at each column count in n_list, with c = 3n samples."""
    config.validate()
    points = [(n, 3 * n) for n in config.n_list]
    return _run_sweep(config, points, [config.method])


def compare_cqr2(config):
    """Randomized preconditioning vs the two-stage baseline, same matrices."""
    config.validate()
    if config.n_list:
        points = [(n, 3 * n) for n in config.n_list]
    elif config.c_list:
        points = [(config.n, c) for c in config.c_list]
    else:
        points = [(config.n, config.c)]
    return _run_sweep(config, points, ["rp", "cqr2"])


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_row(config, trial, rec):
    estimate = None
    if rec.kappa_A1 is not None:
        estimate = ortho_estimate(rec.kappa_A1)
    return {
        "experiment": config.experiment,
        "matrix_kind": config.matrix_kind,
        "m": rec.m,
        "n": rec.n,
        "c": rec.c,
        "kappa_target": float(rec.kappa_target),
        "trial": trial,
        "seed": rec.seed,
        "method": rec.method,
        "breakdown": rec.breakdown,
        "deviation": rec.deviation,
        "residual": rec.residual,
        "kappa_A1": rec.kappa_A1,
        "eta": rec.eta,
        "estimate_5_2": estimate,
        "wall_time_s": rec.wall_time,
    }


def single_rows(config, record):
    return [_csv_row(config, 0, record)]


def emit_csv(rows, path):
    """Write the trial table; floats as shortest round-trip decimals."""
    if not rows:
        raise ValueError("refusing to write an empty table")
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow([_fmt(row[col]) for col in CSV_COLUMNS])
    except OSError as exc:
        raise OSError(f"{path}: cannot write CSV: {exc}") from exc


def format_summary(summaries):
    """Human-readable per-point summary table (printed by the CLI)."""
    lines = [
        f"{'n':>6} {'c':>6} {'method':>8} {'broke':>5} "
        f"{'dev(gmean)':>12} {'res(gmean)':>12} {'kA1(mean)':>12} "
        f"{'est(gmean)':>12}"
    ]
    for s in summaries:
        def pick(name, idx):
            t = s.stats.get(name)
            if t is None or t[idx] is None:
                return "-"
            return f"{t[idx]:.3e}"

        lines.append(
            f"{s.n:>6} {s.c if s.c is not None else '-':>6} {s.method:>8} "
            f"{s.breakdown_count:>5} {pick('deviation', 3):>12} "
            f"{pick('residual', 3):>12} {pick('kappa_A1', 2):>12} "
            f"{pick('estimate_5_2', 3):>12}"
        )
    return "\n".join(lines)
