"""Numerical range, numerical radius and sector geometry.

All angle sweeps go through the same kernel: the Hermitian pencil
Re(e^{i theta} A) = cos(theta) H - sin(theta) K, diagonalised in one
batched call per grid.
"""

from __future__ import annotations

import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.optimize
from scipy.spatial import ConvexHull, QhullError

from . import constants
from .errors import NotAccretive, ZeroInRange
from .matrix_core import (
    CartesianPair,
    as_matrix,
    cartesian_parts,
    hermitian_spectrum,
    is_positive_definite,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RadiusReport:
    omega: float
    gamma: float  # Arg <A x0, x0>, in (-pi, pi]
    witness: np.ndarray
    theta_star: float  # maximiser of lambda_max(Re(e^{i theta} A))
    grid_size: int
    refinement_iters: int

    def to_dict(self):
        return {
            "omega": self.omega,
            "gamma": self.gamma,
            "theta_star": self.theta_star,
            "witness_re": [float(x) for x in self.witness.real],
            "witness_im": [float(x) for x in self.witness.imag],
            "grid_size": self.grid_size,
            "refinement_iters": self.refinement_iters,
        }


@dataclass(frozen=True)
class SectorReport:
    accretive: bool
    dissipative: bool
    accretive_dissipative: bool
    alpha: Optional[float]
    min_re: float
    min_im: float
    zero_in_range: bool
    zero_inconclusive: bool
    crosses_negative_axis: bool

    def to_dict(self):
        return {
            "accretive": self.accretive,
            "dissipative": self.dissipative,
            "accretive_dissipative": self.accretive_dissipative,
            "alpha": self.alpha,
            "min_re": self.min_re,
            "min_im": self.min_im,
            "zero_in_range": self.zero_in_range,
            "zero_inconclusive": self.zero_inconclusive,
            "crosses_negative_axis": self.crosses_negative_axis,
        }


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    z: complex


def principal_arg(z: complex) -> float:
    g = math.atan2(z.imag, z.real)
    return math.pi if g <= -math.pi else g


def _pencil(pair: CartesianPair, thetas: np.ndarray) -> np.ndarray:
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    return c * pair.H[None, :, :] - s * pair.K[None, :, :]


def _pencil_eigvals(pair: CartesianPair, thetas) -> np.ndarray:
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    return np.linalg.eigvalsh(_pencil(pair, thetas))


def support_values(A: np.ndarray, thetas) -> np.ndarray:
    """lambda_max(Re(e^{i theta} A)) for every theta."""
    return _pencil_eigvals(cartesian_parts(A), thetas)[:, -1]


def rotated_norms(A: np.ndarray, thetas) -> np.ndarray:
    """||Re(e^{i theta} A)|| for every theta."""
    w = _pencil_eigvals(cartesian_parts(A), thetas)
    return np.maximum(np.abs(w[:, 0]), np.abs(w[:, -1]))


def range_boundary(A: np.ndarray, m: int) -> List[BoundaryPoint]:
    if m < 4:
        raise ValueError(f"boundary needs at least 4 points, got {m}")
    A = as_matrix(A)
    pair = cartesian_parts(A)
    thetas = TWO_PI * np.arange(m) / m
    # Re(e^{-i theta} A) has its top eigenvector at the support point in
    # direction e^{i theta}.
    _, vecs = np.linalg.eigh(_pencil(pair, -thetas))
    X = vecs[:, :, -1]
    z = np.einsum("ki,ij,kj->k", X.conj(), A, X)
    return [BoundaryPoint(float(t), complex(v)) for t, v in zip(thetas, z)]


def _grid_peaks(values: np.ndarray, count: int) -> np.ndarray:
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    peaks = np.flatnonzero((values >= left) & (values >= right))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(values))])
    order = np.argsort(-values[peaks], kind="stable")
    return peaks[order][:count]


def _refine_max(f, lo: float, hi: float) -> Tuple[float, float, int]:
    res = scipy.optimize.minimize_scalar(
        lambda th: -f(th),
        bounds=(lo, hi),
        method="bounded",
        options={
            "xatol": constants.REFINE_XATOL,
            "maxiter": constants.REFINE_ITERS,
        },
    )
    return float(res.x), float(-res.fun), int(res.nfev)


def _sweep_max(
    f_grid, f_point, thetas: np.ndarray, step: float
) -> Tuple[float, float, int]:
    values = f_grid(thetas)
    i = int(np.argmax(values))
    best_theta, best_val = float(thetas[i]), float(values[i])
    iters = 0
    for j in _grid_peaks(values, constants.REFINE_BRACKETS):
        center = float(thetas[j])
        theta, val, nfev = _refine_max(f_point, center - step, center + step)
        iters += nfev
        logger.debug("bracket %.6f refined to %.12f (%.16g)", center, theta, val)
        if val > best_val:
            best_theta, best_val = theta, val
    return best_theta, best_val, iters


def numerical_radius(
    A: np.ndarray, grid: int = constants.THETA_GRID
) -> RadiusReport:
    A = as_matrix(A)
    pair = cartesian_parts(A)
    thetas = TWO_PI * np.arange(grid) / grid

    def top(th):
        return _pencil_eigvals(pair, th)[:, -1]

    theta, value, iters = _sweep_max(
        top, lambda th: float(top(th)[0]), thetas, TWO_PI / grid
    )
    theta = theta % TWO_PI
    c, s = math.cos(theta), math.sin(theta)
    x0 = hermitian_spectrum(c * pair.H - s * pair.K).top_vector()
    z0 = complex(np.vdot(x0, A @ x0))
    omega = max(0.0, value, abs(z0))
    gamma = principal_arg(z0) if abs(z0) > 0.0 else 0.0
    return RadiusReport(
        omega=omega,
        gamma=gamma,
        witness=x0,
        theta_star=theta,
        grid_size=grid,
        refinement_iters=iters,
    )


def sector_tangents(A: np.ndarray) -> Tuple[float, float]:
    """(tan alpha_plus, tan alpha_minus) of the tightest sector around W(A).

    arg z ranges over [-alpha_minus, alpha_plus] on W(A); the extremes are
    the eigenvalues of the pencil K v = mu H v.
    """
    pair = cartesian_parts(A)
    if not is_positive_definite(pair.H):
        raise NotAccretive("sector needs an accretive matrix")
    mu = scipy.linalg.eigh(pair.K, pair.H, eigvals_only=True)
    return float(mu[-1]), float(-mu[0])


def sector_angle(A: np.ndarray, m: int = constants.SECTOR_POINTS) -> float:
    A = as_matrix(A)
    pair = cartesian_parts(A)
    spec = hermitian_spectrum(pair.H)
    if not is_positive_definite(pair.H):
        raise NotAccretive(
            "sector angle needs Re(A) > 0", lambda_min=spec.lambda_min
        )
    z = np.array([p.z for p in range_boundary(A, m)])
    swept = float(np.max(np.arctan2(np.abs(z.imag), z.real)))
    upper, lower = sector_tangents(A)
    exact = math.atan(max(abs(upper), abs(lower)))
    return min(max(swept, exact), math.nextafter(math.pi / 2, 0.0))


def _points(boundary: Sequence[BoundaryPoint]) -> np.ndarray:
    return np.array([[p.z.real, p.z.imag] for p in boundary])


def _hull_vertices(points: np.ndarray, tol: float) -> np.ndarray:
    centered = points - points.mean(axis=0)
    rms = np.linalg.svd(centered, compute_uv=False) / math.sqrt(len(points))
    if rms[0] <= tol:
        return points[:1]
    if rms[1] > tol:
        try:
            return points[ConvexHull(points).vertices]
        except QhullError:
            pass
    direction = np.linalg.svd(centered)[2][0]
    proj = centered @ direction
    return points[[int(np.argmin(proj)), int(np.argmax(proj))]]


def _zero_location(vertices: np.ndarray, tol: float) -> Tuple[bool, bool]:
    if len(vertices) < 3:
        a, b = vertices[0], vertices[-1]
        ab = b - a
        denom = float(ab @ ab)
        s = 0.0 if denom == 0.0 else float(np.clip(-a @ ab / denom, 0, 1))
        return bool(np.linalg.norm(a + s * ab) <= tol), False
    edges = np.roll(vertices, -1, axis=0) - vertices
    lengths = np.linalg.norm(edges, axis=1)
    # signed distance of the origin to each edge line, positive inside
    dist = (edges[:, 0] * -vertices[:, 1] - edges[:, 1] * -vertices[:, 0]) / (
        lengths
    )
    d = float(np.min(dist))
    return d >= -tol, abs(d) <= tol


def _meets_negative_axis(vertices: np.ndarray, tol: float) -> bool:
    loop = np.vstack([vertices, vertices[:1]])
    for p, q in zip(loop[:-1], loop[1:]):
        lo, hi = min(p[1], q[1]), max(p[1], q[1])
        if lo > tol or hi < -tol:
            continue
        if hi - lo <= tol:
            xs = [p[0], q[0]]
        else:
            s = float(np.clip(-p[1] / (q[1] - p[1]), 0.0, 1.0))
            xs = [p[0] + s * (q[0] - p[0])]
        if min(xs) <= tol:
            return True
    return False


def classify(A: np.ndarray, m: int = constants.CLASSIFY_POINTS) -> SectorReport:
    A = as_matrix(A)
    pair = cartesian_parts(A)
    min_re = hermitian_spectrum(pair.H).lambda_min
    min_im = hermitian_spectrum(pair.K).lambda_min
    accretive = is_positive_definite(pair.H)
    dissipative = is_positive_definite(pair.K)
    points = _points(range_boundary(A, m))
    tol = constants.HULL_TOL * max(1.0, float(np.max(np.abs(points))))
    vertices = _hull_vertices(points, tol)
    inside, inconclusive = _zero_location(vertices, tol)
    return SectorReport(
        accretive=accretive,
        dissipative=dissipative,
        accretive_dissipative=accretive and dissipative,
        alpha=sector_angle(A) if accretive else None,
        min_re=min_re,
        min_im=min_im,
        zero_in_range=inside,
        zero_inconclusive=inconclusive,
        crosses_negative_axis=_meets_negative_axis(vertices, tol),
    )


def _clearance_sweep(
    pair: CartesianPair, lo: float, hi: float, grid: int
) -> Tuple[float, float]:
    def bottom(th):
        return _pencil_eigvals(pair, th)[:, 0]

    thetas = lo + (hi - lo) * np.arange(grid) / grid
    theta, value, _ = _sweep_max(
        bottom, lambda th: float(bottom(th)[0]), thetas, (hi - lo) / grid
    )
    return theta, value


def axis_clearance(
    A: np.ndarray, grid: int = constants.THETA_GRID
) -> Tuple[float, float]:
    """Best (theta, lambda_min(Re(e^{i theta} A))) with |theta| <= pi/2.

    A positive value certifies that W(A) misses (-inf, 0].
    """
    pair = cartesian_parts(A)
    half = math.pi / 2
    theta, value = _clearance_sweep(pair, -half, half, grid // 2)
    endpoint = float(_pencil_eigvals(pair, half)[0, 0])
    if endpoint > value:
        theta, value = half, endpoint
    theta = min(max(theta, -half), half)
    c, s = math.cos(theta), math.sin(theta)
    return theta, hermitian_spectrum(c * pair.H - s * pair.K).lambda_min


def accretive_rotation(
    A: np.ndarray, grid: int = constants.THETA_GRID
) -> float:
    A = as_matrix(A)
    pair = cartesian_parts(A)
    theta, _ = _clearance_sweep(pair, 0.0, TWO_PI, grid)
    theta = principal_arg(complex(math.cos(theta), math.sin(theta)))
    rotated = math.cos(theta) * pair.H - math.sin(theta) * pair.K
    if not is_positive_definite(rotated):
        raise ZeroInRange(
            "no rotation makes W(A) accretive; 0 is in or on W(A)",
            best_theta=theta,
            lambda_min=hermitian_spectrum(rotated).lambda_min,
        )
    return theta


def radius_oracle(
    A: np.ndarray,
    samples: int = constants.ORACLE_SAMPLES,
    restarts: int = constants.ORACLE_RESTARTS,
    iters: int = constants.ORACLE_ITERS,
    seed: int = 0,
) -> float:
    """Lower bound of omega(A) from random unit vectors and sphere ascent."""
    A = as_matrix(A)
    n = A.shape[0]
    AH = A.conj().T
    rng = np.random.default_rng(seed)

    def unit(X):
        return X / np.linalg.norm(X, axis=-1, keepdims=True)

    best = 0.0
    best_x = None
    for start in range(0, samples, constants.ORACLE_BATCH):
        b = min(constants.ORACLE_BATCH, samples - start)
        X = unit(rng.standard_normal((b, n)) + 1j * rng.standard_normal((b, n)))
        z = np.abs(np.einsum("ki,ij,kj->k", X.conj(), A, X))
        i = int(np.argmax(z))
        if z[i] > best:
            best, best_x = float(z[i]), X[i]

    starts = [] if best_x is None else [best_x]
    while len(starts) < max(1, restarts):
        starts.append(
            unit(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        )

    for x in starts:
        z = complex(np.vdot(x, A @ x))
        step = 0.5
        for _ in range(iters):
            g = z * (AH @ x) + z.conjugate() * (A @ x)
            g = g - np.vdot(x, g).real * x
            gn = np.linalg.norm(g)
            if gn < 1e-15:
                break
            while step > 1e-12:
                y = unit(x + step * g / gn)
                zy = complex(np.vdot(y, A @ y))
                if abs(zy) > abs(z):
                    x, z = y, zy
                    step = min(1.0, 2.0 * step)
                    break
                step /= 2.0
            else:
                break
        best = max(best, abs(z))
    return best


def export_boundary_csv(points: Sequence[BoundaryPoint], path: str) -> None:
    df = pd.DataFrame(
        {
            "theta": [p.theta for p in points],
            "re": [p.z.real for p in points],
            "im": [p.z.imag for p in points],
        }
    )
    if path == "-":
        target = sys.stdout
    else:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        target = path
    df.to_csv(target, index=False, float_format="%.17g")
