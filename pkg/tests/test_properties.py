import math

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from conftest import NILPOTENT, make
from numradius.errors import ClassMismatch
from numradius.properties import (
    NATURAL_CLASS,
    PropertyId,
    PropertyParams,
    evaluate_property,
    is_asserted,
)
from numradius.range_radius import numerical_radius

TOL = 1e-8
seeds = st.integers(min_value=0, max_value=2**32)


def holds(pid, A, tol=TOL, **params):
    pm = evaluate_property(pid, A, PropertyParams(**params))
    assert pm.normalized >= -tol, (pid, params, pm.margin, pm.detail)
    return pm


def test_every_property_has_a_class():
    assert set(NATURAL_CLASS) == set(PropertyId)


def test_power_inequality_on_nilpotent():
    pm = holds("P1", NILPOTENT, k=2)
    assert pm.margin == pytest.approx(0.25, abs=1e-9)
    assert pm.scale == 1.0


def test_positive_chain_is_tight():
    pm = holds(PropertyId.P9, np.diag([4.0, 9.0]), tol=1e-10, t=0.5)
    assert pm.margin <= 0.0
    assert "chain=" in pm.detail


def test_inverse_of_accretive_dissipative():
    A = make("accretive_dissipative", n=4, seed=3)
    pm = holds("P8", A)
    assert pm.margin > 0.0


@seed(41)
@given(s=seeds, t=st.sampled_from([0.1, 0.5, 0.9]))
def test_accretive_dissipative_claims(s, t):
    A = make("accretive_dissipative", n=4, seed=s)
    holds("P3", A, t=t)
    holds("P7", A, t=t)
    holds("P18", A, s=0.5)


@seed(42)
@given(s=seeds, t=st.sampled_from([0.2, 0.6]))
def test_accretive_claims(s, t):
    A = make("accretive", n=4, seed=s)
    holds("P2", A, k=3)
    holds("P5", A, t=t)
    holds("P6", A, tol=1e-6, t=t)
    holds("P11", A, t=t, theta=-math.pi / 3)
    holds("P16", A, t=t)
    holds("P17", A)


def test_small_exponent_claim():
    A = make("accretive", n=5, seed=7)
    holds("P4", A, t=0.3)
    with pytest.raises(ValueError):
        evaluate_property("P4", A, PropertyParams(t=0.6))


@seed(43)
@given(s=seeds, n=st.integers(min_value=1, max_value=6))
def test_generic_identities(s, n):
    A = make("generic", n=n, seed=s)
    holds("P1", A, k=3)
    holds("P10", A)
    holds("P12", A)
    holds("P15", A)


@seed(44)
@given(s=seeds, k=st.sampled_from([2, 3, 4]))
def test_root_class_powers(s, k):
    A = make("accretive_root", n=3, seed=s, root=k)
    for m in range(2, k + 1):
        holds("P13", A, k=k, m=float(m))
    if k > 2:
        holds("P13", A, k=k, m=2.5)


def test_p13_parameter_range():
    A = make("accretive_root", n=3, seed=0, root=2)
    with pytest.raises(ValueError):
        evaluate_property("P13", A, PropertyParams(k=2, m=3.0))


@pytest.mark.parametrize(
    "pid", ["P2", "P3", "P5", "P7", "P8", "P9", "P16", "P18"]
)
def test_class_is_recertified(pid):
    with pytest.raises(ClassMismatch):
        evaluate_property(pid, np.diag([1.0, -1.0]), PropertyParams(t=0.5))


def test_positive_chain_needs_hermitian():
    A = make("accretive", n=3, seed=1)
    with pytest.raises(ClassMismatch):
        evaluate_property("P9", A, PropertyParams(t=0.5))


def test_open_region_is_not_asserted():
    assert is_asserted(PropertyId.P14, PropertyParams(t=0.3))
    assert not is_asserted(PropertyId.P14, PropertyParams(t=0.7))
    assert is_asserted(PropertyId.P3, PropertyParams(t=0.7))
    A = make("accretive", n=3, seed=2)
    pm = evaluate_property("P14", A, PropertyParams(t=0.7))
    assert not pm.asserted


def test_margin_is_normalised_by_radius():
    A = 10 * make("generic", n=3, seed=5)
    pm = evaluate_property("P12", A)
    assert pm.scale > 1.0
    assert pm.normalized == pytest.approx(pm.margin / pm.scale)
    assert len(pm.instance_digest) == 16


def test_unknown_pid():
    with pytest.raises(ValueError):
        evaluate_property("P99", np.eye(2))


def test_scalar_fractional_gap_is_zero():
    pm = evaluate_property("P3", [[1 + 1j]], PropertyParams(t=0.3))
    assert pm.margin == pytest.approx(0.0, abs=1e-10)


def test_scalar_real_part_gap():
    pm = evaluate_property("P5", [[1 + 1j]], PropertyParams(t=0.5))
    expected = 2**0.25 * math.cos(math.pi / 8) - 1.0
    assert pm.margin == pytest.approx(expected, abs=1e-10)
    assert pm.margin == pytest.approx(0.0987, abs=1e-4)


def test_precomputed_radius_is_reused():
    A = make("accretive", n=4, seed=7)
    radius = numerical_radius(A)
    cases = [("P1", PropertyParams(k=3)), ("P5", PropertyParams(t=0.4))]
    for pid, params in cases:
        fresh = evaluate_property(pid, A, params)
        reused = evaluate_property(pid, A, params, radius=radius)
        assert reused.margin == fresh.margin
        assert reused.scale == fresh.scale
