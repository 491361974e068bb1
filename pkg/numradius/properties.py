"""Signed margins of the numerical radius inequalities.

Each property maps one claim onto a real number that is >= 0 exactly when
the claim held on the instance.  The class a claim is stated for is
re-certified on every call; a matrix outside it raises ClassMismatch.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from . import constants
from .errors import ClassMismatch
from .frac_power import fractional_power, matrix_power_int
from .generators import GeneratorKind
from .matrix_core import (
    as_matrix,
    cartesian_parts,
    condition_number,
    hermitian_power,
    inverse,
    is_positive_definite,
    lambda_max,
    lambda_min,
    matrix_digest,
    spectral_norm,
)
from .range_radius import (
    RadiusReport,
    numerical_radius,
    rotated_norms,
    sector_angle,
)

logger = logging.getLogger(__name__)

_PROBE_OFFSET = (math.sqrt(5.0) - 1.0) / 2.0


class PropertyId(str, Enum):
    P1 = "P1"  # omega(A^k) <= omega^k(A)
    P2 = "P2"  # omega(A^{1/k}) >= omega^{1/k}(A), accretive
    P3 = "P3"  # omega(A^t) >= omega^t(A), accretive-dissipative
    P4 = "P4"  # same, accretive and t < 1/2
    P5 = "P5"  # Re^t(A) <= Re(A^t)
    P6 = "P6"  # W(A^t) in S_{t alpha}
    P7 = "P7"  # A^t accretive-dissipative
    P8 = "P8"  # inverse of an accretive-dissipative matrix
    P9 = "P9"  # omega(A^t) = ||A^t|| = ||A||^t = omega^t(A), A > O
    P10 = "P10"  # omega(A) = ||Re(e^{-i gamma} A)||
    P11 = "P11"  # (e^{i theta} A)^t = e^{i t theta} A^t
    P12 = "P12"  # omega(A) = sup ||Re(e^{i theta} A)||
    P13 = "P13"  # omega(A^m) <= omega^m(A) when A^k is accretive
    P14 = "P14"  # conjecture, accretive and any t
    P15 = "P15"  # omega(Re A) <= omega(A)
    P16 = "P16"  # A^t accretive
    P17 = "P17"  # e^{i pi/4} A^{1/2} accretive-dissipative
    P18 = "P18"  # Im(A (sI + A)^{-1}) > 0, accretive-dissipative


# class each claim is stated for, used as the default suite generator
NATURAL_CLASS: Dict[PropertyId, GeneratorKind] = {
    PropertyId.P1: GeneratorKind.GENERIC,
    PropertyId.P2: GeneratorKind.ACCRETIVE,
    PropertyId.P3: GeneratorKind.ACCRETIVE_DISSIPATIVE,
    PropertyId.P4: GeneratorKind.ACCRETIVE,
    PropertyId.P5: GeneratorKind.ACCRETIVE,
    PropertyId.P6: GeneratorKind.ACCRETIVE,
    PropertyId.P7: GeneratorKind.ACCRETIVE_DISSIPATIVE,
    PropertyId.P8: GeneratorKind.ACCRETIVE_DISSIPATIVE,
    PropertyId.P9: GeneratorKind.HPD,
    PropertyId.P10: GeneratorKind.GENERIC,
    PropertyId.P11: GeneratorKind.ACCRETIVE,
    PropertyId.P12: GeneratorKind.GENERIC,
    PropertyId.P13: GeneratorKind.ACCRETIVE_ROOT,
    PropertyId.P14: GeneratorKind.ACCRETIVE,
    PropertyId.P15: GeneratorKind.GENERIC,
    PropertyId.P16: GeneratorKind.ACCRETIVE,
    PropertyId.P17: GeneratorKind.ACCRETIVE,
    PropertyId.P18: GeneratorKind.ACCRETIVE_DISSIPATIVE,
}


@dataclass(frozen=True)
class PropertyParams:
    t: Optional[float] = None
    k: Optional[int] = None
    m: Optional[float] = None
    theta: Optional[float] = None
    s: Optional[float] = None

    def to_dict(self) -> Dict[str, float]:
        return {
            name: value
            for name, value in (
                ("t", self.t),
                ("k", self.k),
                ("m", self.m),
                ("theta", self.theta),
                ("s", self.s),
            )
            if value is not None
        }


@dataclass(frozen=True)
class PropertyMargin:
    pid: PropertyId
    margin: float
    params: PropertyParams
    instance_digest: str
    detail: str = ""
    scale: float = 1.0  # max(1, omega(A)), normaliser of the violation rule
    asserted: bool = True

    @property
    def normalized(self) -> float:
        return self.margin / self.scale


@dataclass
class _Instance:
    A: np.ndarray
    radius: RadiusReport
    params: PropertyParams
    _pair: object = field(default=None, repr=False)

    @property
    def omega(self) -> float:
        return self.radius.omega

    @property
    def pair(self):
        if self._pair is None:
            self._pair = cartesian_parts(self.A)
        return self._pair


def _omega(A: np.ndarray) -> float:
    return numerical_radius(A).omega


def _t(params: PropertyParams, default: float = 0.5) -> float:
    t = default if params.t is None else float(params.t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"exponent t must lie in (0, 1), got {t}")
    return t


def _k(params: PropertyParams) -> int:
    k = 2 if params.k is None else params.k
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return int(k)


def _require_accretive(inst: _Instance) -> None:
    if not is_positive_definite(inst.pair.H):
        raise ClassMismatch(
            "claim needs an accretive matrix",
            min_re=lambda_min(inst.pair.H),
        )


def _require_ad(inst: _Instance) -> None:
    _require_accretive(inst)
    if not is_positive_definite(inst.pair.K):
        raise ClassMismatch(
            "claim needs an accretive-dissipative matrix",
            min_im=lambda_min(inst.pair.K),
        )


def _require_hpd(inst: _Instance) -> None:
    limit = constants.HERMITIAN_TOL * max(
        1.0, float(np.linalg.norm(inst.A, np.inf))
    )
    skew = float(np.linalg.norm(inst.pair.K, np.inf))
    if skew > limit or not is_positive_definite(inst.pair.H):
        raise ClassMismatch("claim needs A > O", skew=skew)


def _power(A: np.ndarray, t: float) -> np.ndarray:
    return fractional_power(A, t).value


def _fractional_gap(inst: _Instance, t: float):
    omega_t = _omega(_power(inst.A, t))
    return omega_t - inst.omega**t, f"omega(A^t)={omega_t:.17g}"


def _p1(inst):
    k = _k(inst.params)
    omega_k = _omega(matrix_power_int(inst.A, k))
    return inst.omega**k - omega_k, f"omega(A^k)={omega_k:.17g}"


def _p2(inst):
    _require_accretive(inst)
    return _fractional_gap(inst, 1.0 / _k(inst.params))


def _p3(inst):
    _require_ad(inst)
    return _fractional_gap(inst, _t(inst.params))


def _p4(inst):
    _require_accretive(inst)
    t = _t(inst.params, 0.25)
    if t >= 0.5:
        raise ValueError(f"P4 needs t < 1/2, got {t}")
    return _fractional_gap(inst, t)


def _p5(inst):
    _require_accretive(inst)
    t = _t(inst.params)
    re_power = cartesian_parts(_power(inst.A, t)).H
    gap = re_power - hermitian_power(inst.pair.H, t)
    return lambda_min((gap + gap.conj().T) / 2), ""


def _p6(inst):
    _require_accretive(inst)
    t = _t(inst.params)
    alpha = sector_angle(inst.A)
    alpha_t = sector_angle(_power(inst.A, t))
    return t * alpha - alpha_t, f"alpha={alpha:.17g} alpha_t={alpha_t:.17g}"


def _p7(inst):
    _require_ad(inst)
    parts = cartesian_parts(_power(inst.A, _t(inst.params)))
    re_min, im_min = lambda_min(parts.H), lambda_min(parts.K)
    return min(re_min, im_min), f"min_re={re_min:.6g} min_im={im_min:.6g}"


def _p8(inst):
    _require_ad(inst)
    H, K = inst.pair.H, inst.pair.K
    E = inverse(H + K @ inverse(H) @ K)
    F = -inverse(K + H @ inverse(K) @ H)
    parts = cartesian_parts(inverse(inst.A))
    match = constants.P8_MATCH_TOL * condition_number(inst.A)
    gap_e = spectral_norm(parts.H - E)
    gap_f = spectral_norm(parts.K - F)
    re_min, im_max = lambda_min(parts.H), lambda_max(parts.K)
    margin = min(match - gap_e, match - gap_f, re_min, -im_max)
    return margin, (
        f"gap_E={gap_e:.3e} gap_F={gap_f:.3e} match={match:.3e} "
        f"min_re={re_min:.6g} max_im={im_max:.6g}"
    )


def _p9(inst):
    _require_hpd(inst)
    t = _t(inst.params)
    At = _power(inst.A, t)
    chain = [
        _omega(At),
        spectral_norm(At),
        spectral_norm(inst.A) ** t,
        inst.omega**t,
    ]
    gaps = [abs(a - b) for a, b in zip(chain, chain[1:])]
    return -max(gaps), "chain=" + ",".join(f"{q:.17g}" for q in chain)


def _p10(inst):
    norm = float(rotated_norms(inst.A, [-inst.radius.gamma])[0])
    return -abs(inst.omega - norm), f"gamma={inst.radius.gamma:.17g}"


def _p11(inst):
    _require_accretive(inst)
    t = _t(inst.params)
    theta = math.pi / 4 if inst.params.theta is None else inst.params.theta
    if not -math.pi / 2 < theta < math.pi / 2:
        raise ValueError(f"theta must lie in (-pi/2, pi/2), got {theta}")
    rotated = _power(cmath.exp(1j * theta) * inst.A, t)
    expected = cmath.exp(1j * t * theta) * _power(inst.A, t)
    return -spectral_norm(rotated - expected), ""


def _p12(inst):
    count = constants.PROBE_GRID
    thetas = 2.0 * math.pi * (np.arange(count) + _PROBE_OFFSET) / count
    excess = float(np.max(rotated_norms(inst.A, thetas) - inst.omega))
    return -excess, f"probes={count}"


def _p13(inst):
    _require_accretive(inst)
    k = _k(inst.params)
    m = 2.0 if inst.params.m is None else float(inst.params.m)
    if k < 2 or not 2.0 <= m <= k:
        raise ValueError(f"P13 needs 2 <= m <= k, got m={m} k={k}")
    Ak = matrix_power_int(inst.A, k)
    if not is_positive_definite(cartesian_parts(Ak).H):
        raise ClassMismatch("claim needs A^k accretive", k=k)
    detail = ""
    if m == int(m):
        Am = matrix_power_int(inst.A, int(m))
        if m < k:
            routed = _power(Ak, m / k)
            detail = f"route_gap={spectral_norm(Am - routed):.3e}"
    else:
        Am = _power(Ak, m / k)
    omega_m = _omega(Am)
    return inst.omega**m - omega_m, f"omega(A^m)={omega_m:.17g} {detail}"


def _p14(inst):
    _require_accretive(inst)
    return _fractional_gap(inst, _t(inst.params))


def _p15(inst):
    re_norm = spectral_norm(inst.pair.H)
    return inst.omega - re_norm, f"norm_re={re_norm:.17g}"


def _p16(inst):
    _require_accretive(inst)
    return lambda_min(cartesian_parts(_power(inst.A, _t(inst.params))).H), ""


def _p17(inst):
    _require_accretive(inst)
    B = cmath.exp(1j * math.pi / 4) * _power(inst.A, 0.5)
    parts = cartesian_parts(B)
    return min(lambda_min(parts.H), lambda_min(parts.K)), ""


def _p18(inst):
    _require_ad(inst)
    s = 1.0 if inst.params.s is None else float(inst.params.s)
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    n = inst.A.shape[0]
    X = inst.A @ inverse(s * np.eye(n) + inst.A)
    return lambda_min(cartesian_parts(X).K), ""


_EVALUATORS: Dict[PropertyId, Callable] = {
    PropertyId.P1: _p1,
    PropertyId.P2: _p2,
    PropertyId.P3: _p3,
    PropertyId.P4: _p4,
    PropertyId.P5: _p5,
    PropertyId.P6: _p6,
    PropertyId.P7: _p7,
    PropertyId.P8: _p8,
    PropertyId.P9: _p9,
    PropertyId.P10: _p10,
    PropertyId.P11: _p11,
    PropertyId.P12: _p12,
    PropertyId.P13: _p13,
    PropertyId.P14: _p14,
    PropertyId.P15: _p15,
    PropertyId.P16: _p16,
    PropertyId.P17: _p17,
    PropertyId.P18: _p18,
}


def is_asserted(pid: PropertyId, params: PropertyParams) -> bool:
    """Only the open conjecture region is recorded without assertion."""
    if pid is PropertyId.P14:
        return params.t is not None and params.t < 0.5
    return True


def evaluate_property(
    pid,
    A: np.ndarray,
    params: Optional[PropertyParams] = None,
    radius: Optional[RadiusReport] = None,
) -> PropertyMargin:
    """Margin of one catalogue entry.

    ``radius`` may carry a report for ``A`` already computed by the caller.
    """
    pid = PropertyId(pid)
    params = params or PropertyParams()
    A = as_matrix(A)
    if radius is None:
        radius = numerical_radius(A)
    inst = _Instance(A=A, radius=radius, params=params)
    margin, detail = _EVALUATORS[pid](inst)
    if not math.isfinite(margin):
        raise ValueError(f"{pid.value} produced a non-finite margin")
    logger.debug("%s %s margin=%.3e", pid.value, params.to_dict(), margin)
    return PropertyMargin(
        pid=pid,
        margin=float(margin),
        params=params,
        instance_digest=matrix_digest(A),
        detail=detail.strip(),
        scale=max(1.0, inst.omega),
        asserted=is_asserted(pid, params),
    )
