"""Principal fractional powers A^t, 0 < t <= 1.

Two independent routes:

  spectral    A^t = V diag(lambda^t) V^{-1}, guarded against defective
              eigenvector bases and eigenvalues on the branch cut;
  quadrature  A^t = sin(t pi)/pi * int_R e^{tu} A (e^u I + A)^{-1} du,
              composite Gauss-Legendre with panel doubling and analytic
              tail bounds.

fractional_power() runs whichever applies and records the gap when both do.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from . import constants
from .errors import (
    BranchCut,
    Defective,
    NotAccretive,
    NumRadiusError,
    QuadratureNotConverged,
    Singular,
    TailNotConverged,
    Unsupported,
)
from .matrix_core import as_matrix, spectral_norm
from .range_radius import axis_clearance

logger = logging.getLogger(__name__)

_CHUNK = 4096


class PowerMethod(str, Enum):
    SPECTRAL = "spectral"
    QUADRATURE = "quadrature"
    BOTH = "both"


@dataclass(frozen=True)
class QuadratureOptions:
    nodes_per_panel: int = constants.QUAD_NODES
    panels: int = constants.QUAD_PANELS  # minimum panels over the core
    window: Optional[float] = None  # overrides both automatic half-widths
    target_tol: float = constants.QUAD_TARGET_TOL
    panel_width: float = constants.QUAD_PANEL_WIDTH
    max_doublings: int = constants.QUAD_MAX_DOUBLINGS

    def __post_init__(self):
        if self.nodes_per_panel < 1 or self.panels < 1:
            raise ValueError("nodes_per_panel and panels must be positive")
        if self.window is not None and self.window <= 0:
            raise ValueError("window must be positive")
        if self.target_tol < constants.QUAD_MIN_TOL:
            raise ValueError(
                f"target_tol must be >= {constants.QUAD_MIN_TOL:g}"
            )
        if self.panel_width <= 0 or self.max_doublings < 1:
            raise ValueError("panel_width and max_doublings must be positive")


@dataclass(frozen=True)
class PowerResult:
    value: np.ndarray
    t: float
    method: PowerMethod
    discrepancy: Optional[float] = None
    quad_nodes: int = 0
    truncation: Optional[float] = None

    def to_dict(self):
        return {
            "t": self.t,
            "method": self.method.value,
            "discrepancy": self.discrepancy,
            "quad_nodes": self.quad_nodes,
            "truncation": self.truncation,
        }


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 < t <= 1.0:
        raise ValueError(f"exponent t must lie in (0, 1], got {t}")
    return t


def power_spectral(A: np.ndarray, t: float) -> np.ndarray:
    A = as_matrix(A)
    t = _check_t(t)
    if t == 1.0:
        return A.copy()
    lam, V = np.linalg.eig(A)
    kappa = float(np.linalg.cond(V))
    if not math.isfinite(kappa) or kappa > constants.DEFECTIVE_COND:
        raise Defective(
            "eigenvector basis is too ill-conditioned",
            cond=kappa,
            limit=constants.DEFECTIVE_COND,
        )
    norm = spectral_norm(A)
    dist = np.where(lam.real >= 0.0, np.abs(lam), np.abs(lam.imag))
    worst = float(np.min(dist))
    if worst <= constants.BRANCH_TOL * norm:
        raise BranchCut(
            "an eigenvalue lies on the closed negative real axis",
            distance=worst,
        )
    p = np.power(lam, t)  # principal branch, Arg in (-pi, pi]
    return np.linalg.solve(V.T, (V * p).T).T


def _panel_edges(
    lo: float, hi: float, core_lo: float, core_hi: float, opts
) -> np.ndarray:
    count = max(opts.panels, math.ceil((core_hi - core_lo) / opts.panel_width))
    core = np.linspace(core_lo, core_hi, count + 1)
    width = (core_hi - core_lo) / count
    right = [core_hi]
    w = width
    while right[-1] < hi:
        w *= 2.0
        right.append(min(hi, right[-1] + w))
    left = [core_lo]
    w = width
    while left[-1] > lo:
        w *= 2.0
        left.append(max(lo, left[-1] - w))
    return np.concatenate([left[:0:-1], core, right[1:]])


def _split(edges: np.ndarray) -> np.ndarray:
    mids = (edges[:-1] + edges[1:]) / 2
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def _integrand(A: np.ndarray, t: float, u: np.ndarray) -> np.ndarray:
    """e^{tu} A (e^u I + A)^{-1}, rescaled for u > 0 to avoid overflow."""
    n = A.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    out = np.empty((len(u), n, n), dtype=np.complex128)
    neg = u <= 0.0
    pos = ~neg
    try:
        if np.any(neg):
            un = u[neg]
            M = np.exp(un)[:, None, None] * eye + A
            X = np.linalg.solve(M, np.broadcast_to(A, M.shape))
            out[neg] = np.exp(t * un)[:, None, None] * X
        if np.any(pos):
            up = u[pos]
            M = eye + np.exp(-up)[:, None, None] * A
            X = np.linalg.solve(M, np.broadcast_to(A, M.shape))
            out[pos] = np.exp((t - 1.0) * up)[:, None, None] * X
    except np.linalg.LinAlgError as e:
        raise Singular("resolvent solve failed") from e
    return out


def _apply_rule(
    A: np.ndarray, t: float, edges: np.ndarray, x: np.ndarray, w: np.ndarray
) -> Tuple[np.ndarray, int]:
    a, b = edges[:-1, None], edges[1:, None]
    nodes = ((a + b) / 2 + (b - a) / 2 * x).ravel()
    weights = ((b - a) / 2 * w).ravel()
    total = np.zeros(A.shape, dtype=np.complex128)
    for start in range(0, len(nodes), _CHUNK):
        stop = start + _CHUNK
        F = _integrand(A, t, nodes[start:stop])
        total += np.einsum("k,kij->ij", weights[start:stop], F)
    return total, len(nodes)


def _quadrature(
    A: np.ndarray, t: float, opts: QuadratureOptions
) -> Tuple[np.ndarray, int, float]:
    if not constants.QUAD_T_MIN <= t <= constants.QUAD_T_MAX:
        raise Unsupported(
            "quadrature exponent must lie in [%g, %g]"
            % (constants.QUAD_T_MIN, constants.QUAD_T_MAX),
            t=t,
        )
    sv = np.linalg.svd(A, compute_uv=False)
    smax, smin = float(sv[0]), float(sv[-1])
    _, mu = axis_clearance(A)
    if mu <= constants.PD_TOL * max(1.0, smax) or smin == 0.0:
        raise NotAccretive(
            "quadrature needs W(A) to miss (-inf, 0]", clearance=mu
        )
    pref = math.sin(t * math.pi) / math.pi
    budget = opts.target_tol * smax**t
    # each automatic tail lands at budget/8, well inside the budget/2 cap
    eps = budget / 8.0
    if opts.window is None:
        u_left = max(0.0, math.log(pref * smax / (t * mu * eps)) / t)
        u_right = max(
            math.log(2.0 * smax),
            math.log(pref * 2.0 * smax / ((1.0 - t) * eps)) / (1.0 - t),
        )
    else:
        u_left = u_right = float(opts.window)
    tail = pref * smax * math.exp(-t * u_left) / (t * mu)
    if math.exp(u_right) >= 2.0 * smax:
        tail += pref * 2.0 * smax * math.exp((t - 1.0) * u_right) / (1.0 - t)
    else:
        tail = math.inf
    if tail > budget / 2.0:
        raise TailNotConverged(
            "tail bound exceeds the target tolerance",
            tail=tail,
            window=max(u_left, u_right),
        )

    core_lo = math.log(smin) - 1.0
    core_hi = math.log(smax) + 1.0
    edges = _panel_edges(
        min(-u_left, core_lo), max(u_right, core_hi), core_lo, core_hi, opts
    )
    x, w = np.polynomial.legendre.leggauss(opts.nodes_per_panel)
    previous, nodes = _apply_rule(A, t, edges, x, w)
    for _ in range(opts.max_doublings):
        edges = _split(edges)
        current, count = _apply_rule(A, t, edges, x, w)
        nodes += count
        gap = pref * spectral_norm(current - previous)
        logger.debug(
            "quadrature t=%g panels=%d gap=%.3e tail=%.3e",
            t,
            len(edges) - 1,
            gap,
            tail,
        )
        if gap + tail <= budget:
            return pref * current, nodes, max(u_left, u_right)
        previous = current
    raise QuadratureNotConverged(
        "panel doubling did not converge", gap=gap, budget=budget
    )


def power_quadrature(
    A: np.ndarray, t: float, opts: Optional[QuadratureOptions] = None
) -> np.ndarray:
    A = as_matrix(A)
    t = _check_t(t)
    value, _, _ = _quadrature(A, t, opts or QuadratureOptions())
    return value


_QUAD_FAILURES = (
    NotAccretive,
    TailNotConverged,
    QuadratureNotConverged,
    Singular,
    Unsupported,
)


def fractional_power(
    A: np.ndarray,
    t: float,
    opts: Optional[QuadratureOptions] = None,
    method: str = "auto",
) -> PowerResult:
    A = as_matrix(A)
    t = _check_t(t)
    if method not in ("auto", "spectral", "quadrature", "both"):
        raise ValueError(f"unknown method {method!r}")
    if t == 1.0:
        return PowerResult(value=A.copy(), t=t, method=PowerMethod.SPECTRAL)

    opts = opts or QuadratureOptions()
    failures: List[NumRadiusError] = []
    spectral = quadrature = None
    nodes, truncation = 0, None

    if method in ("auto", "spectral", "both"):
        try:
            spectral = power_spectral(A, t)
        except (Defective, BranchCut) as e:
            if method != "auto":
                raise
            logger.debug("spectral route rejected: %s", e)
            failures.append(e)

    if method in ("auto", "quadrature", "both"):
        try:
            quadrature, nodes, truncation = _quadrature(A, t, opts)
        except _QUAD_FAILURES as e:
            if method != "auto":
                raise
            if spectral is None:
                logger.warning("quadrature route rejected: %s", e)
            failures.append(e)

    if spectral is not None and quadrature is not None:
        return PowerResult(
            value=spectral,
            t=t,
            method=PowerMethod.BOTH,
            discrepancy=spectral_norm(spectral - quadrature),
            quad_nodes=nodes,
            truncation=truncation,
        )
    if spectral is not None:
        return PowerResult(value=spectral, t=t, method=PowerMethod.SPECTRAL)
    if quadrature is not None:
        return PowerResult(
            value=quadrature,
            t=t,
            method=PowerMethod.QUADRATURE,
            quad_nodes=nodes,
            truncation=truncation,
        )
    raise Unsupported(
        "no fractional power method applies: "
        + "; ".join(str(e) for e in failures)
    ) from failures[-1]


def matrix_power_int(A: np.ndarray, k: int) -> np.ndarray:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"integer power needs k >= 1, got {k}")
    return np.linalg.matrix_power(as_matrix(A), int(k))
