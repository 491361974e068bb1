"""Seeded random matrices for each class the inequalities are stated on."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import constants
from .errors import SectorUnreachable
from .frac_power import power_spectral
from .matrix_core import spectral_norm
from .range_radius import sector_angle, sector_tangents

logger = logging.getLogger(__name__)


class GeneratorKind(str, Enum):
    HPD = "hpd"
    ACCRETIVE = "accretive"
    DISSIPATIVE = "dissipative"
    ACCRETIVE_DISSIPATIVE = "accretive_dissipative"
    SECTORIAL = "sectorial"
    GENERIC = "generic"
    ACCRETIVE_ROOT = "accretive_root"


# CLI spellings
KIND_ALIASES = {
    "hpd": GeneratorKind.HPD,
    "accretive": GeneratorKind.ACCRETIVE,
    "dissipative": GeneratorKind.DISSIPATIVE,
    "ad": GeneratorKind.ACCRETIVE_DISSIPATIVE,
    "accretive_dissipative": GeneratorKind.ACCRETIVE_DISSIPATIVE,
    "sectorial": GeneratorKind.SECTORIAL,
    "generic": GeneratorKind.GENERIC,
    "root": GeneratorKind.ACCRETIVE_ROOT,
    "accretive_root": GeneratorKind.ACCRETIVE_ROOT,
}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: GeneratorKind
    n: int
    seed: int = 0
    alpha: Optional[float] = None  # sectorial only
    eig_floor: float = constants.EIG_FLOOR
    root: int = 2  # accretive_root only

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.alpha is not None and not 0.0 < self.alpha < math.pi / 2:
            raise ValueError("alpha must lie in (0, pi/2)")
        if self.kind is GeneratorKind.SECTORIAL and self.alpha is None:
            raise ValueError("sectorial generator needs alpha")
        if self.eig_floor <= 0:
            raise ValueError("eig_floor must be positive")
        if self.root < 2:
            raise ValueError("root must be >= 2")

    def with_instance(self, n: int, seed: int) -> "GeneratorSpec":
        return replace(self, n=n, seed=seed)


def _gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    return (
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    ) / math.sqrt(2.0)


def random_hpd(rng: np.random.Generator, n: int, floor: float) -> np.ndarray:
    G = _gaussian(rng, n) / math.sqrt(n)
    H = G.conj().T @ G + floor * np.eye(n)
    return (H + H.conj().T) / 2


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    M = _gaussian(rng, n) / math.sqrt(n)
    return (M + M.conj().T) / 2


def _sectorial(rng, spec: GeneratorSpec) -> np.ndarray:
    H = random_hpd(rng, spec.n, spec.eig_floor)
    K = random_hermitian(rng, spec.n)
    upper, lower = sector_tangents(H + 1j * K)
    slope = max(abs(upper), abs(lower))
    if slope == 0.0:
        return H.astype(np.complex128)

    # tan(alpha(H + icK)) is linear in c, so the bracket [0, hi] is exact
    target = math.tan(spec.alpha)
    lo, hi = 0.0, target / slope
    for _ in range(constants.SECTOR_BISECT_ITERS):
        c = (lo + hi) / 2
        angle = sector_angle(H + 1j * c * K)
        if angle > spec.alpha:
            hi = c
        elif angle < constants.SECTOR_LOW_FRACTION * spec.alpha:
            lo = c
        else:
            return H + 1j * c * K
    A = H + 1j * lo * K
    if sector_angle(A) > spec.alpha:
        raise SectorUnreachable(
            "bisection did not meet the sector angle", alpha=spec.alpha
        )
    return A


def _accretive_root(rng, spec: GeneratorSpec) -> np.ndarray:
    B = random_hpd(rng, spec.n, spec.eig_floor) + 1j * random_hermitian(
        rng, spec.n
    )
    alpha = sector_angle(B)
    # e^{i phi} B^{1/k} keeps both A and A^k = e^{ik phi} B accretive
    limit = 0.9 * (math.pi / 2 - alpha) / spec.root
    phi = float(rng.uniform(-limit, limit))
    return np.exp(1j * phi) * power_spectral(B, 1.0 / spec.root)


def generate(spec: GeneratorSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    n, floor = spec.n, spec.eig_floor
    kind = spec.kind
    if kind is GeneratorKind.HPD:
        A = random_hpd(rng, n, floor).astype(np.complex128)
    elif kind is GeneratorKind.ACCRETIVE:
        A = random_hpd(rng, n, floor) + 1j * random_hermitian(rng, n)
    elif kind is GeneratorKind.ACCRETIVE_DISSIPATIVE:
        A = random_hpd(rng, n, floor) + 1j * random_hpd(rng, n, floor)
    elif kind is GeneratorKind.DISSIPATIVE:
        A = 1j * (random_hpd(rng, n, floor) + 1j * random_hermitian(rng, n))
    elif kind is GeneratorKind.SECTORIAL:
        A = _sectorial(rng, spec)
    elif kind is GeneratorKind.ACCRETIVE_ROOT:
        A = _accretive_root(rng, spec)
    else:
        A = _gaussian(rng, n)
    logger.debug(
        "generated %s n=%d seed=%d norm=%.3g",
        kind.value,
        n,
        spec.seed,
        spectral_norm(A),
    )
    return A
