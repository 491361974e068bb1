"""Greedy search for accretive A with omega(A^t) < omega^t(A).

Restarts draw a fresh accretive matrix; each restart hill-climbs by
Hermitian Gaussian steps on Re(A), Im(A) and t, accepting only strict
decreases of the margin.  Restart bests below -flag_threshold are
re-evaluated at higher accuracy before they are called counterexamples.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import constants
from .errors import BranchCut, Defective, NumRadiusError
from .frac_power import (
    QuadratureOptions,
    fractional_power,
    power_quadrature,
    power_spectral,
)
from .generators import GeneratorKind, GeneratorSpec, generate, random_hermitian
from .matrix_core import (
    cartesian_parts,
    hermitian_spectrum,
    is_positive_definite,
    matrix_digest,
    matrix_to_json,
    spectral_norm,
)
from .range_radius import numerical_radius, radius_oracle

logger = logging.getLogger(__name__)

_KINDS = (GeneratorKind.ACCRETIVE, GeneratorKind.ACCRETIVE_DISSIPATIVE)


@dataclass(frozen=True)
class HuntConfig:
    n_min: int = 2
    n_max: int = 6
    t_min: float = 0.5
    t_max: float = 0.95
    budget: int = 10_000
    seed: int = 1
    perturb_scale: float = 0.1
    kind: GeneratorKind = GeneratorKind.ACCRETIVE
    flag_threshold: float = constants.HUNT_FLAG_THRESHOLD
    eig_floor: float = constants.EIG_FLOOR
    halve_after: int = constants.HUNT_HALVE_AFTER
    restart_after: int = constants.HUNT_RESTART_AFTER
    grid: int = constants.THETA_GRID

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.kind not in _KINDS:
            raise ValueError("hunt class must be accretive or ad")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if not 0.0 <= self.t_min < self.t_max <= 1.0:
            raise ValueError("t range must satisfy 0 <= t_min < t_max <= 1")
        if self.perturb_scale <= 0:
            raise ValueError("perturb_scale must be positive")
        if self.grid < 16:
            raise ValueError("grid must be >= 16")
        if self.flag_threshold <= 0:
            raise ValueError("flag_threshold must be positive")

    def to_dict(self) -> Dict[str, object]:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "budget": self.budget,
            "perturb_scale": self.perturb_scale,
            "kind": self.kind.value,
            "flag_threshold": self.flag_threshold,
            "grid": self.grid,
        }


@dataclass(frozen=True)
class Candidate:
    restart: int
    t: float
    margin: float
    recheck_margin: float
    discrepancy: Optional[float]
    confirmed: bool
    digest: str
    note: str

    def to_dict(self) -> Dict[str, object]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class HuntReport:
    best_margin: float
    best_instance: np.ndarray
    best_t: float
    iterations: int
    restarts: int
    config: HuntConfig
    trace: List[Dict[str, object]] = field(default_factory=list)
    candidates: List[Candidate] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def counterexample(self) -> bool:
        return any(c.confirmed for c in self.candidates)

    def to_dict(self) -> Dict[str, object]:
        return {
            "best_margin": self.best_margin,
            "best_t": self.best_t,
            "best_instance": matrix_to_json(self.best_instance),
            "best_digest": matrix_digest(self.best_instance),
            "iterations": self.iterations,
            "restarts": self.restarts,
            "counterexample": self.counterexample,
            "candidates": [c.to_dict() for c in self.candidates],
            "trace": self.trace,
            "config_echo": self.config.to_dict(),
            "seed": self.config.seed,
            "metadata": {
                "wall_time_s": self.wall_time,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
        }


def conjecture_margin(
    A: np.ndarray, t: float, grid: int = constants.THETA_GRID
) -> float:
    """omega(A^t) - omega^t(A) at the given theta grid."""
    try:
        At = power_spectral(A, t)
    except (Defective, BranchCut):
        At = fractional_power(A, t).value
    return (
        numerical_radius(At, grid=grid).omega
        - numerical_radius(A, grid=grid).omega ** t
    )


def _clamp_floor(H: np.ndarray, floor: float) -> np.ndarray:
    spec = hermitian_spectrum(H)
    V = spec.eigenvectors
    out = (V * np.maximum(spec.eigenvalues, floor)) @ V.conj().T
    return (out + out.conj().T) / 2


def recheck(
    A: np.ndarray, t: float, seed: int
) -> Tuple[float, Optional[float]]:
    """Margin at tightened accuracy and the spectral/quadrature gap."""
    opts = QuadratureOptions(target_tol=constants.HUNT_RECHECK_TOL)
    At = power_quadrature(A, t, opts)
    discrepancy = None
    try:
        discrepancy = spectral_norm(power_spectral(A, t) - At)
    except (Defective, BranchCut):
        pass
    grid = constants.HUNT_RECHECK_GRID
    omega_t = max(
        numerical_radius(At, grid=grid).omega, radius_oracle(At, seed=seed)
    )
    omega = max(
        numerical_radius(A, grid=grid).omega, radius_oracle(A, seed=seed + 1)
    )
    return omega_t - omega**t, discrepancy


class _Climber:
    def __init__(self, config: HuntConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        lo = config.t_min + constants.HUNT_T_EDGE
        hi = config.t_max - constants.HUNT_T_EDGE
        self.t_bounds = (lo, max(lo, hi))
        self.iterations = 0

    def _clip_t(self, t: float) -> float:
        return float(np.clip(t, *self.t_bounds))

    def _evaluate(self, H, K, t) -> float:
        self.iterations += 1
        try:
            return conjecture_margin(H + 1j * K, t, grid=self.config.grid)
        except NumRadiusError as e:
            logger.debug("step rejected: %s", e)
            return math.inf

    def _project(self, H, K):
        floor = self.config.eig_floor
        H = _clamp_floor(H, floor)
        if self.config.kind is GeneratorKind.ACCRETIVE_DISSIPATIVE:
            K = _clamp_floor(K, floor)
        return H, K

    def climb(self, budget: int):
        cfg = self.config
        rng = self.rng
        n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        spec = GeneratorSpec(
            kind=cfg.kind,
            n=n,
            seed=int(rng.integers(0, 2**63)),
            eig_floor=cfg.eig_floor,
        )
        pair = cartesian_parts(generate(spec))
        H, K = pair.H, pair.K
        t = self._clip_t(float(rng.uniform(cfg.t_min, cfg.t_max)))
        margin = self._evaluate(H, K, t)
        start_margin = margin
        scale = cfg.perturb_scale
        rejected = stale = 0
        t_span = cfg.t_max - cfg.t_min
        while self.iterations < budget and stale < cfg.restart_after:
            Hn, Kn = self._project(
                H + scale * random_hermitian(rng, n),
                K + scale * random_hermitian(rng, n),
            )
            tn = self._clip_t(t + scale * t_span * rng.standard_normal())
            m = self._evaluate(Hn, Kn, tn)
            if m < margin:
                H, K, t, margin = Hn, Kn, tn, m
                rejected = stale = 0
                continue
            rejected += 1
            stale += 1
            if rejected >= cfg.halve_after:
                scale /= 2.0
                rejected = 0
        return H + 1j * K, t, margin, start_margin, n


def hunt_counterexample(config: HuntConfig) -> HuntReport:
    start = time.perf_counter()
    climber = _Climber(config)
    best_margin = math.inf
    best_A: Optional[np.ndarray] = None
    best_t = config.t_min
    trace: List[Dict[str, object]] = []
    candidates: List[Candidate] = []
    restarts = 0
    while climber.iterations < config.budget:
        restarts += 1
        A, t, margin, start_margin, n = climber.climb(config.budget)
        trace.append(
            {
                "restart": restarts,
                "n": n,
                "t": t,
                "start_margin": start_margin,
                "end_margin": margin,
                "iterations": climber.iterations,
            }
        )
        if not math.isfinite(margin):
            continue
        if margin < best_margin:
            best_margin, best_A, best_t = margin, A, t
            logger.info(
                "restart %d: best margin %.3e (n=%d, t=%.4f)",
                restarts,
                margin,
                n,
                t,
            )
        if margin < -config.flag_threshold:
            candidates.append(_judge(A, t, margin, restarts, config))

    if best_A is None:
        raise NumRadiusError("hunt evaluated no instance successfully")
    if not is_positive_definite(cartesian_parts(best_A).H):
        raise NumRadiusError("best instance lost accretivity")
    return HuntReport(
        best_margin=best_margin,
        best_instance=best_A,
        best_t=best_t,
        iterations=climber.iterations,
        restarts=restarts,
        config=config,
        trace=trace,
        candidates=candidates,
        wall_time=time.perf_counter() - start,
    )


def _judge(A, t, margin, restart, config: HuntConfig) -> Candidate:
    try:
        again, discrepancy = recheck(A, t, seed=config.seed + restart)
    except NumRadiusError as e:
        logger.warning("recheck of restart %d failed: %s", restart, e)
        again, discrepancy = math.nan, None
    scale = max(1.0, spectral_norm(A) ** t)
    agrees = discrepancy is None or discrepancy <= 1e-8 * scale
    confirmed = bool(again < -config.flag_threshold and agrees)
    note = "COUNTEREXAMPLE" if confirmed else "attributed to numerical error"
    logger.warning(
        "candidate at restart %d: margin %.3e, recheck %.3e -> %s",
        restart,
        margin,
        again,
        note,
    )
    return Candidate(
        restart=restart,
        t=t,
        margin=margin,
        recheck_margin=again,
        discrepancy=discrepancy,
        confirmed=confirmed,
        digest=matrix_digest(A),
        note=note,
    )
