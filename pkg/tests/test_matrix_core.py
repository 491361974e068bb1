import json

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make
from numradius.errors import (
    InvalidMatrix,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
)
from numradius.matrix_core import (
    as_matrix,
    cartesian_parts,
    hermitian_power,
    hermitian_spectrum,
    hermitize,
    inverse,
    is_positive_definite,
    load_matrix,
    matrix_digest,
    matrix_from_json,
    matrix_to_json,
    save_matrix,
)

entries = st.floats(min_value=-10, max_value=10, allow_nan=False)


def test_as_matrix_scalar_is_one_by_one():
    A = as_matrix(3.0)
    assert A.shape == (1, 1)
    assert A.dtype == np.complex128


@pytest.mark.parametrize(
    "bad",
    [
        [[1, 2, 3], [4, 5, 6]],
        [1, 2],
        [[1, np.nan], [0, 1]],
        [[np.inf]],
        np.zeros((0, 0)),
    ],
)
def test_as_matrix_rejects(bad):
    with pytest.raises(InvalidMatrix):
        as_matrix(bad)


def test_hermitize_rejects_nilpotent():
    with pytest.raises(NotHermitian):
        hermitize([[0, 1], [0, 0]])


def test_hermitize_symmetrises_rounding_noise():
    H = np.array([[2, 1 + 1e-14j], [1, 3]])
    out = hermitize(H)
    assert np.array_equal(out, out.conj().T)


@seed(3)
@given(
    re=arrays(np.float64, (4, 4), elements=entries),
    im=arrays(np.float64, (4, 4), elements=entries),
)
def test_cartesian_parts_recombine(re, im):
    A = re + 1j * im
    pair = cartesian_parts(A)
    assert np.allclose(pair.H, pair.H.conj().T, atol=0)
    assert np.allclose(pair.K, pair.K.conj().T, atol=0)
    assert np.allclose(pair.combine(), A, atol=1e-12)


@seed(4)
@given(
    re=arrays(np.float64, (5, 5), elements=entries),
    im=arrays(np.float64, (5, 5), elements=entries),
)
def test_spectrum_reconstructs(re, im):
    M = re + 1j * im
    H = (M + M.conj().T) / 2
    spec = hermitian_spectrum(H)
    V = spec.eigenvectors
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert np.allclose(V.conj().T @ V, np.eye(5), atol=1e-10)
    scale = max(1.0, np.abs(H).max())
    assert np.allclose(spec.reconstruct(), H, atol=1e-8 * scale)


def test_spectrum_phase_is_canonical(rng):
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    spec = hermitian_spectrum(M + M.conj().T)
    for v in spec.eigenvectors.T:
        j = int(np.argmax(np.abs(v)))
        assert abs(v[j].imag) < 1e-12
        assert v[j].real > 0


def test_repeated_eigenvalue_basis_is_reproducible():
    spec = hermitian_spectrum(np.eye(3))
    assert np.allclose(spec.eigenvectors, np.eye(3))


def test_hermitian_power_diagonal():
    out = hermitian_power(np.diag([4.0, 9.0]), 0.5)
    assert np.allclose(out, np.diag([2.0, 3.0]), atol=1e-12)


def test_hermitian_power_needs_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        hermitian_power(np.diag([1.0, -1.0]), 0.5)


def test_is_positive_definite():
    assert is_positive_definite(np.eye(2))
    assert not is_positive_definite(np.diag([1.0, 0.0]))
    assert not is_positive_definite(np.diag([1.0, -1.0]))


def test_inverse():
    A = np.array([[1, 2], [3, 4j]])
    assert np.allclose(inverse(A) @ A, np.eye(2), atol=1e-12)


def test_positive_definite_matches_leading_minors(rng):
    checked = 0
    for _ in range(200):
        n = int(rng.integers(2, 4))
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = (B + B.conj().T) / 2 + rng.uniform(-2.0, 4.0) * np.eye(n)
        minors = [np.linalg.det(H[:k, :k]).real for k in range(1, n + 1)]
        if min(abs(m) for m in minors) < 1e-6:
            continue
        if np.min(np.abs(np.linalg.eigvalsh(H))) < 1e-6:
            continue
        checked += 1
        assert is_positive_definite(H) == all(m > 0 for m in minors)
    assert checked > 100


@pytest.mark.parametrize("s", range(8))
def test_inverse_is_an_involution(s):
    A = make("accretive", n=4, seed=s)
    tol = 1e-12 * np.linalg.cond(A) ** 2 * np.linalg.norm(A, 2)
    assert np.linalg.norm(inverse(inverse(A)) - A, 2) <= tol


def test_inverse_singular():
    with pytest.raises(Singular):
        inverse([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(Singular):
        inverse(np.zeros((2, 2)))


def test_digest_is_stable_and_short():
    A = np.array([[1, 2j], [3, 4]])
    d = matrix_digest(A)
    assert d == matrix_digest(A.copy())
    assert len(d) == 16
    assert d != matrix_digest(A.T)


def test_json_round_trip_is_exact(tmp_path):
    A = np.array([[0.1, 1 / 3 + 2j], [-1e-300, np.pi * 1j]])
    path = tmp_path / "sub" / "a.json"
    save_matrix(A, str(path), note="x")
    doc = json.loads(path.read_text())
    assert doc["n"] == 2 and doc["note"] == "x"
    assert np.array_equal(load_matrix(str(path)), A)
    assert np.array_equal(matrix_from_json(matrix_to_json(A)), A)


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"n": 2, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]},
        {"n": 1, "re": [[True]], "im": [[0]]},
        {"n": 1, "re": [["1"]], "im": [[0]]},
        {"n": 0, "re": [], "im": []},
        {"n": 1, "re": [[1]]},
    ],
)
def test_json_rejects(doc):
    with pytest.raises(InvalidMatrix):
        matrix_from_json(doc)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(InvalidMatrix):
        load_matrix(str(path))
