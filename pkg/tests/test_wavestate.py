import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitphoton import (
    ModeSpec,
    boundary_check,
    eigenmode,
    mirror_timing,
    nonlocality_range,
    split_state,
)
from splitphoton.validation import integrate

SQRT2 = np.sqrt(2.0)


class TestModeSpec:
    def test_dispersion_is_exact(self):
        mode = ModeSpec(a=2.5, n=3, c=0.7)
        assert mode.omega / mode.c - mode.k == 0.0

    @pytest.mark.parametrize("bad", [dict(a=0.0), dict(n=0), dict(c=-1.0), dict(n=1.5)])
    def test_invalid_parameters(self, bad):
        with pytest.raises(ValueError):
            ModeSpec(**bad)


class TestEigenmode:
    def test_node_at_walls(self):
        mode = ModeSpec()
        assert eigenmode(mode, 0.0, 0.3).E == 0.0
        assert eigenmode(mode, 1.0, 0.3).E == pytest.approx(0.0, abs=1e-15)

    def test_quarter_period_kills_e(self):
        mode = ModeSpec()
        t = 0.5  # omega*t = pi/2
        x = np.linspace(0.0, 1.0, 101)
        e, b = eigenmode(mode, x, t)
        assert np.max(np.abs(e)) < 1e-12
        assert np.allclose(b, mode.amplitude * np.cos(np.pi * x) * 1.0, atol=1e-12)

    def test_amplitude_fixed_by_normalization_oracle(self):
        # quadrature pins the peak value at sqrt(2) for a=1
        mode = ModeSpec()

        def rho(x):
            e, b = eigenmode(mode, x, 0.0)
            return np.asarray(e) ** 2 + np.asarray(b) ** 2

        assert integrate(rho, 0.0, 1.0, tol=1e-12).value == pytest.approx(1.0, abs=1e-10)
        assert eigenmode(mode, 0.5, 0.0).E == pytest.approx(SQRT2, abs=1e-14)

    def test_zero_outside_cavity(self):
        mode = ModeSpec()
        e, b = eigenmode(mode, np.array([-0.5, 1.5]), 0.2)
        assert np.all(e == 0.0) and np.all(b == 0.0)


class TestBoundaryCheck:
    @pytest.mark.parametrize("a,n", [(1.0, 1), (2.5, 3), (1.0, 4)])
    def test_residuals_vanish(self, a, n):
        e_res, b_res = boundary_check(ModeSpec(a=a, n=n))
        assert e_res < 1e-12 and b_res < 1e-11

    def test_against_finite_difference(self):
        # independent check of dB/dx at the walls
        mode = ModeSpec(a=1.0, n=4)
        t = 0.11
        h = 1e-6
        for x0, sign in ((0.0, 1), (1.0, -1)):
            b_in = eigenmode(mode, x0 + sign * h, t).B
            b_at = eigenmode(mode, x0, t).B
            # slope should vanish at the wall; the quadratic Taylor term
            # bounds the one-sided difference by ~A k^2 h / 2
            assert abs((b_in - b_at) / (sign * h)) < 2e-4


class TestSplitState:
    def test_t0_matches_eigenmode(self):
        mode = ModeSpec()
        x = np.linspace(-0.2, 1.2, 301)
        e_split, b_split = split_state(mode, x, 0.0)
        e_mode, b_mode = eigenmode(mode, x, 0.0)
        assert np.max(np.abs(np.asarray(e_split) - np.asarray(e_mode))) < 1e-12
        assert np.max(np.abs(np.asarray(b_split))) == 0.0
        assert np.max(np.abs(np.asarray(b_mode))) == 0.0

    def test_separated_right_mover(self):
        mode = ModeSpec()
        e, b = split_state(mode, 1.5, 1.0)
        assert e == pytest.approx(0.5 * SQRT2 * np.sin(np.pi * 0.5), abs=1e-14)
        assert e == pytest.approx(b, abs=1e-15)  # E = c|B| on the right mover

    def test_pulse_sign_relation_after_separation(self):
        mode = ModeSpec()
        t = 2.0
        x_right = np.linspace(2.0, 3.0, 64)
        x_left = np.linspace(-2.0, -1.0, 64)
        e, b = split_state(mode, x_right, t)
        assert np.array_equal(np.asarray(e), np.asarray(b))
        e, b = split_state(mode, x_left, t)
        assert np.array_equal(np.asarray(e), -np.asarray(b))

    def test_zero_outside_support(self):
        mode = ModeSpec()
        t = 0.7
        for x in (-0.71, 1.71, -5.0, 9.0):
            e, b = split_state(mode, x, t)
            assert e == 0.0 and b == 0.0

    @pytest.mark.parametrize("t", [0.0, 0.2, 5.0])
    def test_normalization(self, t):
        mode = ModeSpec()

        def rho(x):
            e, b = split_state(mode, x, t)
            return np.asarray(e) ** 2 + np.asarray(b) ** 2

        cuts = [-t, 1.0 - t, t, 1.0 + t]
        res = integrate(rho, -t, 1.0 + t, tol=1e-11, breakpoints=cuts)
        assert abs(res.value - 1.0) < 1e-9

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            split_state(ModeSpec(), 0.5, -0.1)

    @settings(max_examples=25, deadline=None)
    @given(t=st.floats(0.0, 4.0), x=st.floats(-6.0, 6.0))
    def test_fields_always_finite(self, t, x):
        e, b = split_state(ModeSpec(), x, t)
        assert np.isfinite(e) and np.isfinite(b)


class TestKinematics:
    def test_range_growth(self):
        assert nonlocality_range(1.0, 1.0, 0.0).S == 1.0
        assert nonlocality_range(1.0, 1.0, 3.0).S == 7.0
        rep = nonlocality_range(0.5, 2.0, 1.0)
        assert rep.S == 4.5 and rep.centers_gap == 4.0

    def test_range_matches_field_support(self):
        # measure the support of the sampled state directly
        mode = ModeSpec(a=0.5, c=2.0)
        t = 1.0
        x = np.linspace(-3.0, 3.5, 20001)
        e, b = split_state(mode, x, t)
        occupied = x[(np.asarray(e) != 0.0) | (np.asarray(b) != 0.0)]
        measured = occupied.max() - occupied.min()
        assert measured == pytest.approx(nonlocality_range(0.5, 2.0, t).S, abs=1e-3)

    def test_mirror_timing_values(self):
        assert mirror_timing(1.0, 1.0, 5.0) == (11.0, 5.5)
        assert mirror_timing(2.0, 0.5, 4.0) == (10.0, 10.0)
        s_m, _ = mirror_timing(1.0, 1.0, 1.0 + 1e-9)
        assert s_m == pytest.approx(3.0, abs=1e-8)

    def test_mirror_too_close_rejected(self):
        with pytest.raises(ValueError):
            mirror_timing(1.0, 1.0, 0.5)
