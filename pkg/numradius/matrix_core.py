"""Dense complex matrix primitives.

Matrices are plain complex128 numpy arrays; as_matrix() is the single
gate that validates shape and finiteness.  Everything Hermitian goes
through hermitian_spectrum() so eigenvector choices are reproducible.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import warnings
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
import scipy.linalg

from . import constants
from .errors import (
    InvalidMatrix,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CartesianPair:
    H: np.ndarray  # Re(A)
    K: np.ndarray  # Im(A)

    def combine(self) -> np.ndarray:
        return self.H + 1j * self.K


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # unitary, columns

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def top_vector(self) -> np.ndarray:
        return self.eigenvectors[:, -1]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_matrix(obj) -> np.ndarray:
    try:
        A = np.array(obj, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix("matrix entries are not numbers") from e
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidMatrix("matrix must be square", shape=str(A.shape))
    if not np.all(np.isfinite(A)):
        raise InvalidMatrix("matrix has non-finite entries")
    return A


def adjoint(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def spectral_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, 2))


def _inf_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, np.inf))


def hermitize(H: np.ndarray) -> np.ndarray:
    """Check H against the hermitize tolerance and return (H + H*)/2."""
    H = as_matrix(H)
    gap = _inf_norm(H - adjoint(H))
    limit = constants.HERMITIAN_TOL * max(1.0, _inf_norm(H))
    if gap > limit:
        raise NotHermitian("matrix is not Hermitian", gap=gap, limit=limit)
    return (H + adjoint(H)) / 2


def cartesian_parts(A: np.ndarray) -> CartesianPair:
    A = as_matrix(A)
    H = (A + adjoint(A)) / 2
    K = (A - adjoint(A)) / 2j
    return CartesianPair(
        H=(H + adjoint(H)) / 2,
        K=(K + adjoint(K)) / 2,
    )


def _canonical_basis(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(Q) from pivoted Gram-Schmidt on P e_j."""
    d = Q.shape[1]
    W = (Q @ adjoint(Q)).copy()  # columns P e_j
    basis: List[np.ndarray] = []
    for _ in range(d):
        j = int(np.argmax(np.linalg.norm(W, axis=0)))
        b = W[:, j] / np.linalg.norm(W[:, j])
        b = _fix_phase(b)
        basis.append(b)
        W = W - np.outer(b, adjoint(b) @ W)
    return np.stack(basis, axis=1)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(v)))
    return v * (abs(v[j]) / v[j])


def hermitian_spectrum(H: np.ndarray) -> HermitianSpectrum:
    H = hermitize(H)
    w, V = np.linalg.eigh(H)
    scale = max(1.0, float(np.max(np.abs(w))))
    V = V.copy()
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= constants.CLUSTER_TOL * scale:
            stop += 1
        if stop - start == 1:
            V[:, start] = _fix_phase(V[:, start])
        else:
            V[:, start:stop] = _canonical_basis(V[:, start:stop])
        start = stop
    return HermitianSpectrum(eigenvalues=w, eigenvectors=V)


def lambda_min(H: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(H))[0])


def lambda_max(H: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(H))[-1])


def is_positive_definite(H: np.ndarray, tol: float = constants.PD_TOL) -> bool:
    H = hermitize(H)
    w = np.linalg.eigvalsh(H)
    return bool(w[0] > tol * max(1.0, float(np.max(np.abs(w)))))


def hermitian_power(H: np.ndarray, t: float) -> np.ndarray:
    """Principal power of a positive definite Hermitian matrix."""
    spec = hermitian_spectrum(H)
    if spec.lambda_min <= 0.0:
        raise NotPositiveDefinite(
            "fractional power needs a positive definite matrix",
            lambda_min=spec.lambda_min,
        )
    V = spec.eigenvectors
    out = (V * spec.eigenvalues**t) @ adjoint(V)
    return (out + adjoint(out)) / 2


def inverse(A: np.ndarray) -> np.ndarray:
    A = as_matrix(A)
    norm = spectral_norm(A)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivot = float(np.min(np.abs(np.diag(lu))))
    if norm == 0.0 or pivot < constants.SINGULAR_PIVOT * norm:
        raise Singular("matrix is singular", pivot=pivot, norm=norm)
    return scipy.linalg.lu_solve(
        (lu, piv), np.eye(A.shape[0], dtype=np.complex128), check_finite=False
    )


def condition_number(A: np.ndarray) -> float:
    return float(np.linalg.cond(as_matrix(A), 2))


def matrix_digest(A: np.ndarray) -> str:
    data = np.ascontiguousarray(as_matrix(A)).tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


# Matrix JSON: {"n": int, "re": [[...]], "im": [[...]]}


def matrix_to_json(A: np.ndarray) -> Dict[str, object]:
    A = as_matrix(A)
    return {
        "n": int(A.shape[0]),
        "re": [[float(x) for x in row] for row in A.real],
        "im": [[float(x) for x in row] for row in A.imag],
    }


def _parse_rows(rows, n: int, name: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidMatrix(f"'{name}' must have {n} rows")
    out = np.empty((n, n), dtype=np.float64)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidMatrix(f"'{name}' row {i} must have {n} entries")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InvalidMatrix(f"'{name}'[{i}][{j}] is not a number")
            out[i, j] = x
    if not np.all(np.isfinite(out)):
        raise InvalidMatrix(f"'{name}' has non-finite entries")
    return out


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidMatrix("matrix JSON must be an object")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidMatrix("'n' must be a positive integer")
    re = _parse_rows(obj.get("re"), n, "re")
    im = _parse_rows(obj.get("im"), n, "im")
    return re + 1j * im


def load_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidMatrix(f"{path}: not valid JSON ({e.msg})") from e
    return matrix_from_json(obj)


def save_matrix(A: np.ndarray, path: str, **extra) -> None:
    doc = matrix_to_json(A)
    doc.update(extra)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
