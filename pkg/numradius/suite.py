"""Batch verification: generated instances x properties x parameter grids."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from . import constants
from .errors import ClassMismatch, NumRadiusError
from .generators import GeneratorSpec, generate
from .properties import (
    PropertyId,
    PropertyParams,
    evaluate_property,
    is_asserted,
)
from .range_radius import numerical_radius

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteConfig:
    templates: Tuple[GeneratorSpec, ...]  # n and seed are drawn per sample
    pids: Tuple[PropertyId, ...]
    samples: int = 100
    t_grid: Tuple[float, ...] = constants.DEFAULT_T_GRID
    k_set: Tuple[int, ...] = constants.DEFAULT_K_SET
    theta_set: Tuple[float, ...] = constants.DEFAULT_THETA_SET
    s_set: Tuple[float, ...] = constants.DEFAULT_S_SET
    n_min: int = 1
    n_max: int = 8
    tol: float = constants.VIOLATION_TOL
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(self.templates))
        object.__setattr__(
            self, "pids", tuple(PropertyId(p) for p in self.pids)
        )
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if any(not 0.0 < t < 1.0 for t in self.t_grid):
            raise ValueError("t-grid values must lie in (0, 1)")
        if any(k < 1 for k in self.k_set):
            raise ValueError("k values must be >= 1")
        if self.tol < 0 or self.jobs < 1:
            raise ValueError("tol must be >= 0 and jobs >= 1")

    def to_dict(self) -> Dict[str, object]:
        return {
            "classes": [
                {
                    "kind": s.kind.value,
                    "alpha": s.alpha,
                    "eig_floor": s.eig_floor,
                    "root": s.root,
                }
                for s in self.templates
            ],
            "pids": [p.value for p in self.pids],
            "samples": self.samples,
            "t_grid": list(self.t_grid),
            "k_set": list(self.k_set),
            "theta_set": list(self.theta_set),
            "s_set": list(self.s_set),
            "n_min": self.n_min,
            "n_max": self.n_max,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class PidSummary:
    samples: int
    violations: int
    worst_margin: Optional[float]
    worst_digest: Optional[str]
    worst_params: Dict[str, float] = field(default_factory=dict)
    skipped: int = 0
    errors: int = 0
    unasserted: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "worst_digest": self.worst_digest,
            "worst_params": self.worst_params,
            "skipped": self.skipped,
            "errors": self.errors,
            "unasserted": self.unasserted,
        }


@dataclass(frozen=True)
class VerificationReport:
    summaries: Dict[str, PidSummary]
    config: SuiteConfig
    wall_time: float
    records: pd.DataFrame = field(repr=False, compare=False)

    @property
    def total_violations(self) -> int:
        return sum(s.violations for s in self.summaries.values())

    @property
    def total_samples(self) -> int:
        return sum(s.samples for s in self.summaries.values())

    def tolerance(self, pid: PropertyId) -> float:
        return pid_tolerance(pid, self.config.tol)

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            pid: summary.to_dict() for pid, summary in self.summaries.items()
        }
        out["config_echo"] = self.config.to_dict()
        out["seed"] = self.config.seed
        # every instance seed derives from (seed, class index, sample index)
        out["seed_range"] = {
            "master": self.config.seed,
            "classes": len(self.config.templates),
            "samples": self.config.samples,
        }
        out["tolerance"] = self.config.tol
        out["metadata"] = {
            "wall_time_s": self.wall_time,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        return out


def pid_tolerance(pid: PropertyId, tol: float) -> float:
    if pid is PropertyId.P6:
        return max(tol, constants.P6_TOL)
    return tol


def parameter_grid(pid: PropertyId, config: SuiteConfig) -> List[PropertyParams]:
    t_axis = [PropertyParams(t=t) for t in config.t_grid]
    if pid in (PropertyId.P1, PropertyId.P2):
        return [PropertyParams(k=k) for k in config.k_set]
    if pid is PropertyId.P4:
        return [p for p in t_axis if p.t < 0.5]
    if pid in (
        PropertyId.P3,
        PropertyId.P5,
        PropertyId.P6,
        PropertyId.P7,
        PropertyId.P9,
        PropertyId.P14,
        PropertyId.P16,
    ):
        return t_axis
    if pid is PropertyId.P11:
        return [
            PropertyParams(t=t, theta=theta)
            for t in config.t_grid
            for theta in config.theta_set
        ]
    if pid is PropertyId.P13:
        return [
            PropertyParams(k=k, m=float(m))
            for k in config.k_set
            if k >= 2
            for m in range(2, k + 1)
        ]
    if pid is PropertyId.P18:
        return [PropertyParams(s=s) for s in config.s_set]
    return [PropertyParams()]


def instance_seed(master: int, class_index: int, sample: int) -> Tuple[int, int]:
    """(dimension draw, generator seed) for one work item."""
    state = np.random.SeedSequence([master, class_index, sample]).generate_state(
        2, dtype=np.uint64
    )
    return int(state[0]), int(state[1])


def _record(pid, params, status, **values) -> Dict[str, object]:
    row = {
        "pid": pid.value,
        "params": params.to_dict(),
        "status": status,
        "margin": math.nan,
        "normalized": math.nan,
        "digest": "",
        "asserted": is_asserted(pid, params),
        "detail": "",
    }
    row.update(values)
    return row


def _run_item(item) -> List[Dict[str, object]]:
    class_index, sample, spec, config = item
    draw, seed = instance_seed(config.seed, class_index, sample)
    n = config.n_min + draw % (config.n_max - config.n_min + 1)
    spec = spec.with_instance(n=n, seed=seed)
    grids = [(pid, parameter_grid(pid, config)) for pid in config.pids]
    rows: List[Dict[str, object]] = []
    try:
        A = generate(spec)
        radius = numerical_radius(A)
    except NumRadiusError as e:
        for pid, grid in grids:
            rows += [_record(pid, p, "error", detail=str(e)) for p in grid]
        return rows
    for pid, grid in grids:
        for params in grid:
            try:
                pm = evaluate_property(pid, A, params, radius=radius)
            except ClassMismatch as e:
                rows.append(_record(pid, params, "skipped", detail=str(e)))
                continue
            except NumRadiusError as e:
                logger.warning("%s on %s: %s", pid.value, spec.kind.value, e)
                rows.append(_record(pid, params, "error", detail=str(e)))
                continue
            rows.append(
                _record(
                    pid,
                    params,
                    "ok",
                    margin=pm.margin,
                    normalized=pm.normalized,
                    digest=pm.instance_digest,
                    asserted=pm.asserted,
                    detail=pm.detail,
                )
            )
    for row in rows:
        row["class_index"] = class_index
        row["sample"] = sample
    return rows


def _summarize(
    df: pd.DataFrame, pid: PropertyId, tol: float
) -> PidSummary:
    if df.empty:
        return PidSummary(0, 0, None, None)
    sub = df[df["pid"] == pid.value]
    ok = sub[sub["status"] == "ok"]
    asserted = ok[ok["asserted"].astype(bool)]
    violations = int((asserted["normalized"] < -tol).sum())
    worst_margin = worst_digest = None
    worst_params: Dict[str, float] = {}
    if not ok.empty:
        # ties broken by digest so the result does not depend on order
        worst = ok.sort_values(
            ["normalized", "digest"], kind="mergesort"
        ).iloc[0]
        worst_margin = float(worst["normalized"])
        worst_digest = str(worst["digest"])
        worst_params = dict(worst["params"])
    return PidSummary(
        samples=int(len(ok)),
        violations=violations,
        worst_margin=worst_margin,
        worst_digest=worst_digest,
        worst_params=worst_params,
        skipped=int((sub["status"] == "skipped").sum()),
        errors=int((sub["status"] == "error").sum()),
        unasserted=int(len(ok) - len(asserted)),
    )


def run_suite(config: SuiteConfig) -> VerificationReport:
    start = time.perf_counter()
    items = [
        (ci, i, spec, config)
        for ci, spec in enumerate(config.templates)
        for i in range(config.samples)
    ]
    rows: List[Dict[str, object]] = []
    if config.pids and items:
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                for chunk in pool.map(_run_item, items, chunksize=4):
                    rows += chunk
        else:
            for done, item in enumerate(items, 1):
                rows += _run_item(item)
                if done % 100 == 0:
                    logger.info("evaluated %d/%d instances", done, len(items))
    df = pd.DataFrame(rows)
    summaries = {
        pid.value: _summarize(df, pid, pid_tolerance(pid, config.tol))
        for pid in config.pids
    }
    for pid, summary in summaries.items():
        logger.info(
            "%s: %d samples, %d violations, worst %s",
            pid,
            summary.samples,
            summary.violations,
            summary.worst_margin,
        )
    return VerificationReport(
        summaries=summaries,
        config=config,
        wall_time=time.perf_counter() - start,
        records=df,
    )
