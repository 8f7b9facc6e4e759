"""MA(2) grid experiment comparing Durbin's method with restricted OLS.

Every kept grid point gets ``reps`` simulated series. Both estimators see the
same series in each replication. Seeds depend only on (base_seed, row,
column, rep), so results do not depend on scheduling or worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .core import MAModel, MarecError
from .estimators import fit_ar_ols, stage2_durbin, stage2_restricted
from .roots import Invertibility, classify_invertibility
from .simulate import simulate_ma

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ESTIMATORS = ("durbin", "restricted")
REGIONS = ("invertible", "noninvertible")
NONINVERTIBLE_MIN_MODULUS = 0.8

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 output function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(base_seed: int, row: int, col: int, rep: int) -> int:
    """Replication seed: SplitMix64 folded over base_seed, row, column and rep."""
    h = splitmix64(int(base_seed) & _MASK64)
    for v in (row, col, rep):
        h = splitmix64(h ^ (int(v) & _MASK64))
    return h


@dataclass(frozen=True)
class GridSpec:
    psi1_range: tuple = (-2.2, 2.2)
    psi2_range: tuple = (-2.2, 2.2)
    points_per_axis: int = 23
    region: str = "invertible"
    T: int = 400
    l: int = 100
    reps: int = 500
    base_seed: int = 0
    durbin_unit_lag: bool = False

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise ValueError("points_per_axis must be >= 2")
        if self.region not in REGIONS:
            raise ValueError(f"region must be one of {REGIONS}, got {self.region!r}")
        if not self.T - self.l > self.l:
            raise ValueError(f"need T - l > l, got T={self.T}, l={self.l}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        for lo, hi in (self.psi1_range, self.psi2_range):
            if not lo <= hi:
                raise ValueError("ranges must be increasing")

    def axis(self, which: int) -> np.ndarray:
        lo, hi = (self.psi1_range, self.psi2_range)[which]
        return np.round(np.linspace(lo, hi, self.points_per_axis), 12) + 0.0

    def points(self):
        """(row, col, psi1, psi2) for every grid point, row-major."""
        a1, a2 = self.axis(0), self.axis(1)
        for i, p1 in enumerate(a1):
            for j, p2 in enumerate(a2):
                yield i, j, float(p1), float(p2)


@dataclass
class EstimatorStats:
    mse: Optional[float]
    mse_per_param: Optional[tuple]
    n_ok: int
    n_fail: int


@dataclass
class PointRecord:
    row: int
    col: int
    psi1: float
    psi2: float
    classification: str
    min_modulus: float
    stats: dict = field(default_factory=dict)  # estimator name -> EstimatorStats
    reps: int = 0


@dataclass
class GridResult:
    spec: GridSpec
    records: list
    schema: int = SCHEMA_VERSION


def skip_rule(point, region: str) -> bool:
    """True when the point is kept for the given region."""
    psi1, psi2 = point
    cls = classify_invertibility(MAModel([psi1, psi2]))
    if region == "invertible":
        return cls.status is Invertibility.INVERTIBLE
    if region == "noninvertible":
        return (
            cls.status is Invertibility.NONINVERTIBLE
            and cls.min_inside_modulus >= NONINVERTIBLE_MIN_MODULUS
        )
    raise ValueError(f"unknown region {region!r}")


def _one_rep(y, q: int, l: int, unit_lag: bool = False):
    """Both estimates for one series; None marks a failed estimator."""
    try:
        stage1 = fit_ar_ols(y, l)
    except (MarecError, np.linalg.LinAlgError):
        return None, None
    out = []
    for fn in (
        lambda: stage2_durbin(stage1.model.phi, q, unit_lag)[0],
        lambda: stage2_restricted(stage1.model.phi, stage1.cov_diag[0], q)[0],
    ):
        try:
            est = fn()
            out.append(est if np.all(np.isfinite(est)) else None)
        except (MarecError, np.linalg.LinAlgError):
            out.append(None)
    return tuple(out)


def run_point(point, spec: GridSpec, index=(0, 0), reps: Optional[int] = None) -> PointRecord:
    """Replicate both estimators at one parameter point; per-rep failures are counted."""
    psi1, psi2 = point
    truth = np.array([psi1, psi2])
    model = MAModel(truth)
    cls = classify_invertibility(model)
    reps = spec.reps if reps is None else reps
    sq = {name: np.zeros(2) for name in ESTIMATORS}
    ok = dict.fromkeys(ESTIMATORS, 0)
    for r in range(reps):
        y = simulate_ma(model, spec.T, seed=mix_seed(spec.base_seed, index[0], index[1], r))
        for name, est in zip(ESTIMATORS, _one_rep(y, 2, spec.l, spec.durbin_unit_lag)):
            if est is None:
                continue
            sq[name] += (est - truth) ** 2
            ok[name] += 1
    stats = {}
    for name in ESTIMATORS:
        n = ok[name]
        if n:
            per = sq[name] / n
            stats[name] = EstimatorStats(float(per.mean()), tuple(float(v) for v in per), n, reps - n)
        else:
            stats[name] = EstimatorStats(None, None, 0, reps)
    return PointRecord(
        index[0], index[1], psi1, psi2, cls.status.value, cls.min_modulus, stats, reps
    )


def _run_point_task(args):
    i, j, p1, p2, spec = args
    return run_point((p1, p2), spec, (i, j))


def run_grid(spec: GridSpec, workers: int = 1) -> GridResult:
    tasks = [(i, j, p1, p2, spec) for i, j, p1, p2 in spec.points() if skip_rule((p1, p2), spec.region)]
    log.info("running %d kept points of %d", len(tasks), spec.points_per_axis**2)
    if workers <= 1 or len(tasks) <= 1:
        records = [_run_point_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_point_task, tasks, chunksize=1))
    records.sort(key=lambda rec: (rec.row, rec.col))
    return GridResult(spec, records)


def with_overrides(spec: GridSpec, **kw) -> GridSpec:
    return replace(spec, **{k: v for k, v in kw.items() if v is not None})
