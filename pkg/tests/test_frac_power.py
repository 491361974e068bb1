import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from conftest import make
from numradius.errors import (
    BranchCut,
    Defective,
    NotAccretive,
    Unsupported,
)
from numradius.frac_power import (
    PowerMethod,
    QuadratureOptions,
    fractional_power,
    matrix_power_int,
    power_quadrature,
    power_spectral,
)

D49 = np.diag([4.0, 9.0]).astype(complex)
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)


def test_spectral_square_root_of_diagonal():
    assert np.allclose(power_spectral(D49, 0.5), np.diag([2, 3]), atol=1e-12)


def test_quadrature_square_root_of_diagonal():
    out = power_quadrature(D49, 0.5)
    assert np.allclose(out, np.diag([2, 3]), atol=1e-9)


def test_t_one_is_identity_map():
    A = make("generic", n=3, seed=4)
    res = fractional_power(A, 1.0)
    assert np.array_equal(res.value, A)
    assert res.value is not A


@pytest.mark.parametrize("t", [0.0, -0.5, 1.5])
def test_exponent_range(t):
    with pytest.raises(ValueError):
        fractional_power(D49, t)


def test_branch_cut_is_rejected():
    A = np.diag([-1.0, 1.0]).astype(complex)
    with pytest.raises(BranchCut):
        power_spectral(A, 0.5)
    with pytest.raises(NotAccretive):
        power_quadrature(A, 0.5)
    with pytest.raises(Unsupported):
        fractional_power(A, 0.5)


def test_defective_matrix_falls_back_to_quadrature():
    with pytest.raises(Defective):
        power_spectral(JORDAN, 0.5)
    res = fractional_power(JORDAN, 0.5)
    assert res.method is PowerMethod.QUADRATURE
    expected = np.array([[1.0, 0.5], [0.0, 1.0]])
    assert np.allclose(res.value, expected, atol=1e-8)
    assert res.quad_nodes > 0
    assert res.truncation > 0


def test_explicit_method_reraises():
    with pytest.raises(Defective):
        fractional_power(JORDAN, 0.5, method="spectral")
    with pytest.raises(ValueError):
        fractional_power(JORDAN, 0.5, method="newton")


def test_rotated_range_off_the_axis_uses_quadrature():
    # W(A) = {-1 + i}: not accretive, but clear of (-inf, 0]
    A = (-1 + 1j) * np.eye(2)
    out = power_quadrature(A, 0.5)
    assert np.allclose(out, np.sqrt(-1 + 1j) * np.eye(2), atol=1e-8)


def test_quadrature_exponent_window():
    with pytest.raises(Unsupported):
        power_quadrature(D49, 0.9999)


@seed(21)
@given(s=st.integers(min_value=0, max_value=2**32), t=st.sampled_from([0.2, 0.5, 0.8]))
def test_methods_agree_on_accretive(s, t):
    A = make("accretive", n=4, seed=s)
    res = fractional_power(A, t)
    assert res.method is PowerMethod.BOTH
    scale = max(1.0, np.linalg.norm(A, 2) ** t)
    assert res.discrepancy <= 1e-8 * scale


@seed(22)
@given(s=st.integers(min_value=0, max_value=2**32))
def test_square_root_squares_back(s):
    A = make("accretive", n=3, seed=s)
    R = fractional_power(A, 0.5).value
    assert np.allclose(R @ R, A, atol=1e-9 * np.linalg.norm(A, 2))


def test_powers_commute_with_scalar():
    A = make("accretive", n=3, seed=8)
    assert np.allclose(
        power_spectral(4 * A, 0.5), 2 * power_spectral(A, 0.5), atol=1e-10
    )


@pytest.mark.parametrize(
    "kw",
    [
        {"nodes_per_panel": 0},
        {"panels": 0},
        {"window": -1.0},
        {"target_tol": 1e-20},
        {"max_doublings": 0},
    ],
)
def test_quadrature_options_validate(kw):
    with pytest.raises(ValueError):
        QuadratureOptions(**kw)


def test_window_override_too_small_is_reported():
    from numradius.errors import TailNotConverged

    with pytest.raises(TailNotConverged):
        power_quadrature(D49, 0.5, QuadratureOptions(window=1.0))


def test_integer_power():
    A = make("generic", n=3, seed=1)
    assert np.allclose(matrix_power_int(A, 3), A @ A @ A)
    for k in (0, 1.5, True):
        with pytest.raises(ValueError):
            matrix_power_int(A, k)


@pytest.mark.parametrize("t", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_quadrature_tail_fits_budget_across_seeds(t):
    for s in range(40):
        A = make("accretive", n=2 + s % 5, seed=s)
        scale = max(1.0, np.linalg.norm(A, 2) ** t)
        out = power_quadrature(A, t)
        assert np.linalg.norm(out - power_spectral(A, t), 2) <= 1e-8 * scale


@pytest.mark.parametrize("t", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_jordan_block_power(t):
    out = power_quadrature(JORDAN, t)
    assert np.allclose(out, [[1.0, t], [0.0, 1.0]], atol=1e-8)


def test_quadrature_of_identity():
    assert np.allclose(power_quadrature(np.eye(2), 0.3), np.eye(2), atol=1e-10)


def test_auto_runs_both_methods_off_the_real_axis():
    A = np.diag([1 + 1j, 2.0])
    res = fractional_power(A, 0.25)
    assert res.method is PowerMethod.BOTH
    expected = np.diag([(1 + 1j) ** 0.25, 2.0**0.25])
    assert np.allclose(res.value, expected, atol=1e-10)
