import numpy as np
import pytest

from numradius.generators import GeneratorKind
from numradius.hunt import (
    HuntConfig,
    _clamp_floor,
    conjecture_margin,
    hunt_counterexample,
)
from numradius.matrix_core import cartesian_parts, is_positive_definite


def small(**kw):
    kw.setdefault("budget", 40)
    kw.setdefault("n_min", 2)
    kw.setdefault("n_max", 3)
    kw.setdefault("restart_after", 15)
    return HuntConfig(**kw)


def test_budget_is_respected():
    report = hunt_counterexample(small(seed=3))
    assert report.iterations == 40
    assert report.restarts >= 1
    assert len(report.trace) == report.restarts
    assert is_positive_definite(cartesian_parts(report.best_instance).H)
    assert 0.5 < report.best_t < 0.95


def test_margin_is_only_decreased():
    report = hunt_counterexample(small(seed=4))
    for row in report.trace:
        assert row["end_margin"] <= row["start_margin"]
    assert report.best_margin == min(r["end_margin"] for r in report.trace)


def test_scalar_instances_have_zero_margin():
    report = hunt_counterexample(small(n_min=1, n_max=1, budget=20))
    assert abs(report.best_margin) <= 1e-10
    assert not report.counterexample


def test_reproducible():
    a = hunt_counterexample(small(seed=9))
    b = hunt_counterexample(small(seed=9))
    assert a.best_margin == b.best_margin
    assert np.array_equal(a.best_instance, b.best_instance)


def test_accretive_dissipative_walk_stays_in_class():
    report = hunt_counterexample(
        small(kind=GeneratorKind.ACCRETIVE_DISSIPATIVE, seed=2)
    )
    pair = cartesian_parts(report.best_instance)
    assert is_positive_definite(pair.H)
    assert is_positive_definite(pair.K)
    # the proved region: no negative margins beyond rounding
    assert report.best_margin >= -1e-8
    assert not report.candidates


def test_small_exponents_stay_nonnegative():
    report = hunt_counterexample(small(t_min=0.05, t_max=0.45, seed=5))
    assert 0.05 < report.best_t < 0.45
    assert report.best_margin >= -1e-8
    assert not report.candidates


def test_coarse_grid_is_threaded_through(monkeypatch):
    import numradius.hunt as hunt

    grids = []
    real = hunt.conjecture_margin

    def spy(A, t, grid):
        grids.append(grid)
        return real(A, t, grid=grid)

    monkeypatch.setattr(hunt, "conjecture_margin", spy)
    report = hunt_counterexample(small(budget=6, grid=256))
    assert grids and set(grids) == {256}
    assert report.to_dict()["config_echo"]["grid"] == 256


def test_report_layout():
    doc = hunt_counterexample(small(budget=10)).to_dict()
    assert set(doc) >= {
        "best_margin",
        "best_t",
        "best_instance",
        "best_digest",
        "iterations",
        "restarts",
        "counterexample",
        "candidates",
        "trace",
        "config_echo",
        "seed",
        "metadata",
    }
    assert doc["best_instance"]["n"] in (2, 3)
    assert doc["counterexample"] is False


def test_margin_on_positive_matrix_vanishes():
    assert conjecture_margin(np.diag([4.0, 9.0]), 0.7) == pytest.approx(
        0.0, abs=1e-12
    )


def test_clamp_floor():
    H = np.diag([-1.0, 0.5, 2.0])
    out = _clamp_floor(H, 1e-3)
    assert np.allclose(np.linalg.eigvalsh(out), [1e-3, 0.5, 2.0])


@pytest.mark.parametrize(
    "kw",
    [
        {"kind": "hpd"},
        {"budget": 0},
        {"t_min": 0.9, "t_max": 0.6},
        {"t_max": 1.5},
        {"n_min": 3, "n_max": 2},
        {"perturb_scale": 0.0},
        {"grid": 8},
        {"flag_threshold": 0.0},
    ],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        HuntConfig(**kw)
