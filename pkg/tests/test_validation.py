import numpy as np
import pytest

from splitphoton import ModeSpec
from splitphoton.snapshot import reflection_snapshot
from splitphoton.validation import (
    QuadratureError,
    identity_suite,
    integrate,
    locate_jumps,
)
from splitphoton.snapshot import Snapshot


def test_integrate_exact_for_cubics():
    # Simpson is exact for cubics, so the very first refinement must agree.
    res = integrate(lambda x: 3.0 * x**3 - x**2 + 2.0, 0.0, 2.0, tol=1e-12)
    exact = 3.0 / 4.0 * 16.0 - 8.0 / 3.0 + 4.0
    assert res.value == pytest.approx(exact, abs=1e-13)
    assert res.est_error == 0.0


def test_integrate_sin_squared():
    res = integrate(lambda x: np.sin(np.pi * x) ** 2, 0.0, 1.0, tol=1e-12)
    assert abs(res.value - 0.5) < 1e-10


def test_integrate_empty_interval():
    res = integrate(lambda x: x, 1.0, 1.0)
    assert res.value == 0.0 and res.evaluations == 0


def test_integrate_rejects_reversed_limits():
    with pytest.raises(ValueError):
        integrate(lambda x: x, 1.0, 0.0)


def test_integrate_nonconvergence_carries_best_estimate():
    rng_free = lambda x: np.abs(np.sin(50.0 * x)) ** 0.3  # kinky integrand
    with pytest.raises(QuadratureError) as exc:
        integrate(rng_free, 0.0, 1.0, tol=1e-14, max_depth=3)
    assert np.isfinite(exc.value.best.value)


def test_integrate_breakpoints_restore_accuracy():
    f = lambda x: np.abs(x - 0.3)
    res = integrate(f, 0.0, 1.0, tol=1e-12, breakpoints=[0.3])
    exact = 0.045 + 0.245  # triangle areas on either side of the kink
    assert abs(res.value - exact) < 1e-12


def test_locate_jumps_on_reflection_snapshot():
    mode = ModeSpec()
    snap = reflection_snapshot(mode, 0.25, n_points=1024)
    locations = sorted({round(j.location, 2) for j in locate_jumps(snap)})
    assert -0.75 in locations  # far edge
    assert -0.25 in locations  # inner discontinuity


def test_locate_jumps_smooth_interior_finds_nothing():
    x = np.linspace(0.1, 0.9, 512)
    e = np.sin(np.pi * x)
    b = np.cos(np.pi * x)
    snap = Snapshot("t", 0.0, x, e, b, e * e + b * b)
    assert locate_jumps(snap) == []


def test_locate_jumps_grid_too_coarse():
    x = np.linspace(0.0, 1.0, 32)
    y = np.sin(x)
    snap = Snapshot("t", 0.0, x, y, y, 2 * y * y)
    with pytest.raises(ValueError, match="coarse"):
        locate_jumps(snap)


def test_locate_jumps_threshold_robust():
    # the separation between kink and smooth cells spans orders of magnitude,
    # so any multiplier in [10, 100] gives identical results
    mode = ModeSpec()
    snap = reflection_snapshot(mode, 0.3, n_points=1024)
    baseline = [(j.location, j.quantity) for j in locate_jumps(snap, 30.0)]
    for factor in (10.0, 50.0, 100.0):
        assert [(j.location, j.quantity) for j in locate_jumps(snap, factor)] == baseline


@pytest.mark.parametrize("s", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_identity_suite_residuals(s):
    mode = ModeSpec()
    res = identity_suite(mode, [s])
    assert res["sw_partition"] < 1e-12
    assert res["conservation"] < 1e-12
    assert res["ledger_vs_quadrature"] < 1e-8
