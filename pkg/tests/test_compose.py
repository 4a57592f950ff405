"""Power series, local/global composition, and window searches."""

import math

import numpy as np
import pytest

from tfnorms.compose import (
    dilation_difference_norm,
    global_compose,
    glue_local,
    local_compose,
    named_series,
    point_ditkin_window,
    pointwise_oracle,
    reciprocal_on_compact,
    resample_progression,
    series_expm1,
    series_identity,
    series_mobius,
    series_reciprocal,
    series_square,
)
from tfnorms.errors import CoverError, ToleranceNotReachedError
from tfnorms.grid import Grid, NormSpec, SampledSignal
from tfnorms.norms import norm_value, partition_for
from tfnorms.partition import bump_profile
from tfnorms.windows import plateau_window

GRID = Grid(8192, 16.0 * math.pi)
PART = partition_for(GRID)
SPEC = NormSpec.modulation(2.0, 1.0, 0.0)


def gaussian(grid=GRID, width=1.0):
    return SampledSignal.from_function(grid, lambda x: np.exp(-(x**2) / (2.0 * width**2)))


def base_cutoff(grid=GRID):
    return SampledSignal(grid, bump_profile(grid.points(), 1.0, 2.0).astype(complex))


class TestPowerSeries:
    def test_reciprocal_evaluates(self):
        s = series_reciprocal(2.0)
        z = np.array([1.5, 2.0, 2.8], dtype=complex)
        vals = s.evaluate(z, 200)
        assert np.max(np.abs(vals - 1.0 / z)) <= 1e-12

    def test_tail_bound_controls_truncation(self):
        s = series_reciprocal(2.0)
        w = 0.5
        terms = s.choose_truncation(w, 1e-8)
        assert s.tail_bound(w, terms) < 1e-8
        # the bound really dominates the dropped tail
        z = 2.0 + w
        exact = 1.0 / z
        truncated = s.evaluate(np.array([z]), terms)[0]
        assert abs(truncated - exact) <= s.tail_bound(w, terms)

    def test_polynomial_tail_is_zero(self):
        s = series_square(1.0)
        assert s.tail_bound(10.0, 2) == 0.0
        assert s.choose_truncation(3.0) <= 2

    def test_radius_guard(self):
        s = series_reciprocal(1.0)
        with pytest.raises(ToleranceNotReachedError):
            s.choose_truncation(1.5)

    def test_recenter_matches_function(self):
        s = series_mobius(0.0)
        moved = s.recenter(0.5)
        z = np.array([0.3, 0.5, 0.9], dtype=complex)
        vals = moved.evaluate(z, 120)
        oracle = pointwise_oracle("mobius")(z)
        assert np.max(np.abs(vals - oracle)) <= 1e-12
        # conservative recentered radius: original minus the shift
        assert moved.radius == pytest.approx(4.0 - 0.5)

    def test_expm1(self):
        s = series_expm1(0.0)
        z = np.array([0.1, -0.4, 1.2], dtype=complex)
        assert np.max(np.abs(s.evaluate(z, 60) - np.expm1(z))) <= 1e-12

    def test_named_registry(self):
        assert named_series("square", 2.0).constant == 4.0
        with pytest.raises(ValueError):
            named_series("tangent")


class TestResample:
    def test_progression_matches_closed_form(self):
        f = gaussian()
        vals = resample_progression(f, -1.0, 0.0123, 300)
        x = -1.0 + 0.0123 * np.arange(300)
        assert np.max(np.abs(vals - np.exp(-(x**2) / 2.0))) <= 1e-8


class TestDilationDifference:
    def test_constant_signal_is_zero(self):
        f = SampledSignal(GRID, np.full(GRID.n, 1.5 + 0.0j))
        assert dilation_difference_norm(f, 0.0, base_cutoff(), 4.0, SPEC, PART) == 0.0

    def test_gaussian_sweep_decreases(self):
        f = gaussian()
        values = [
            dilation_difference_norm(f, 0.0, base_cutoff(), float(lam), SPEC, PART)
            for lam in (1, 2, 4, 8, 16, 32, 64)
        ]
        for a, b in zip(values, values[1:]):
            assert b <= a * 1.05
        assert values[-1] < values[0] / 100.0

    def test_linear_rate(self):
        # f equals x near the origin: the norm halves per doubling.
        plateau = bump_profile(GRID.points(), 4.0, 8.0)
        f = SampledSignal(GRID, GRID.points() * plateau + 0.0j)
        values = [
            dilation_difference_norm(f, 0.0, base_cutoff(), float(lam), SPEC, PART)
            for lam in (2, 4, 8, 16)
        ]
        for a, b in zip(values, values[1:]):
            assert b / a == pytest.approx(0.5, rel=0.10)

    def test_domain_guard(self):
        f = gaussian()
        with pytest.raises(ValueError, match="domain"):
            dilation_difference_norm(f, GRID.half_width - 1.0, base_cutoff(), 0.01, SPEC, PART)


class TestLocalCompose:
    def test_identity_series(self):
        f = gaussian()
        idx = int(round((0.25 + GRID.half_width) / GRID.dx))
        patch = local_compose(f, 0.25, series_identity(f.samples[idx]), SPEC, 1.0, PART)
        x = GRID.points()
        plateau = np.abs(x - patch.center) <= patch.plateau_radius
        err = np.max(np.abs(patch.values.samples[plateau] - f.samples[plateau]))
        assert err <= 1e-10

    def test_square_series(self):
        f = gaussian()
        idx = GRID.n // 2
        patch = local_compose(f, 0.0, series_square(f.samples[idx]), SPEC, 1.0, PART)
        x = GRID.points()
        plateau = np.abs(x - patch.center) <= patch.plateau_radius
        err = np.max(np.abs(patch.values.samples[plateau] - f.samples[plateau] ** 2))
        assert err <= 1e-8

    def test_reciprocal_series(self):
        f = SampledSignal(GRID, (2.0 + np.sin(GRID.points())).astype(complex))
        idx = GRID.n // 2 + 57
        x0 = float(GRID.points()[idx])
        patch = local_compose(f, x0, series_reciprocal(complex(f.samples[idx])), SPEC, 1.0, PART)
        x = GRID.points()
        plateau = np.abs(x - patch.center) <= patch.plateau_radius
        residual = np.max(np.abs(f.samples[plateau] * patch.values.samples[plateau] - 1.0))
        assert residual <= 1e-6

    def test_center_mismatch_rejected(self):
        f = gaussian()
        with pytest.raises(ValueError, match="centered"):
            local_compose(f, 0.0, series_square(0.123), SPEC, 1.0, PART)


class TestGlue:
    def test_single_patch_covers(self):
        f = gaussian()
        patch = local_compose(f, 0.0, series_square(f.samples[GRID.n // 2]), SPEC, 1.0, PART)
        rho = patch.glue_radius
        glued = glue_local(f, (-rho / 2.0, rho / 2.0), [patch])
        x = GRID.points()
        inside = np.abs(x) <= rho / 2.0
        assert np.max(np.abs(glued.values.samples[inside] - patch.values.samples[inside])) == 0.0

    def test_two_overlapping_patches_square(self):
        f = gaussian()
        idx = GRID.n // 2
        p1 = local_compose(f, 0.0, series_square(f.samples[idx]), SPEC, 1.0, PART)
        x1 = p1.center + p1.glue_radius
        idx1 = int(round((x1 + GRID.half_width) / GRID.dx))
        p2 = local_compose(f, x1, series_square(f.samples[idx1]), SPEC, 1.0, PART)
        interval = (0.0, p2.center + p2.glue_radius)
        glued = glue_local(f, interval, [p1, p2])
        x = GRID.points()
        inside = (x >= interval[0]) & (x <= interval[1])
        err = np.max(np.abs(glued.values.samples[inside] - f.samples[inside] ** 2))
        assert err <= 1e-8
        assert glued.partition_defect <= 1e-10

    def test_cover_gap_detected(self):
        f = gaussian()
        patch = local_compose(f, 0.0, series_square(f.samples[GRID.n // 2]), SPEC, 1.0, PART)
        with pytest.raises(CoverError):
            glue_local(f, (-10.0, 10.0), [patch])


class TestReciprocal:
    def test_constant_two(self):
        f = SampledSignal(GRID, np.full(GRID.n, 2.0 + 0.0j))
        g, glued, _ = reciprocal_on_compact(f, (-5.0, 5.0), SPEC, 1.0, PART)
        inside = np.abs(GRID.points()) <= 5.0
        assert np.max(np.abs(g.samples[inside] - 0.5)) <= 1e-10

    def test_two_plus_sine(self):
        f = SampledSignal(GRID, (2.0 + np.sin(GRID.points())).astype(complex))
        g, glued, _ = reciprocal_on_compact(f, (-5.0, 5.0), SPEC, 1.0, PART)
        inside = np.abs(GRID.points()) <= 5.0
        assert np.max(np.abs(f.samples[inside] * g.samples[inside] - 1.0)) <= 1e-6
        assert glued.partition_defect <= 1e-10

    def test_vanishing_rejected(self):
        f = SampledSignal(GRID, np.sin(GRID.points()).astype(complex))
        with pytest.raises(ValueError, match="vanishes"):
            reciprocal_on_compact(f, (-5.0, 5.0), SPEC, 1.0, PART)


class TestGlobalCompose:
    def test_square_on_gaussian(self):
        f = gaussian()
        g, diag, _ = global_compose(f, series_square(0.0), SPEC, 1.0, PART)
        assert np.max(np.abs(g.samples - f.samples**2)) <= 1e-7

    def test_identity(self):
        f = gaussian()
        g, _, _ = global_compose(f, series_identity(0.0), SPEC, 1.0, PART)
        assert np.max(np.abs(g.samples - f.samples)) <= 1e-9

    def test_mobius_on_gaussian(self):
        f = gaussian()
        g, _, _ = global_compose(f, series_mobius(0.0), SPEC, 1.0, PART)
        oracle = pointwise_oracle("mobius")(f.samples)
        assert np.max(np.abs(g.samples - oracle)) <= 1e-6

    def test_requires_vanishing_constant(self):
        f = gaussian()
        with pytest.raises(ValueError, match="F\\(0\\) = 0"):
            global_compose(f, series_reciprocal(1.0), SPEC, 1.0, PART)


class TestPointDitkin:
    BASE = plateau_window(0.0, 1.0, GRID)

    def test_constant_signal(self):
        f = SampledSignal(GRID, np.full(GRID.n, 3.0 + 0.0j))
        window, lam, residual = point_ditkin_window(
            f, 0.0, NormSpec.modulation(1.0, 1.0, 0.5), 1e-6, self.BASE, PART
        )
        assert residual == 0.0
        assert lam == 1.0

    def test_linear_slope_rate(self):
        plateau = bump_profile(GRID.points(), 4.0, 8.0)
        f = SampledSignal(GRID, GRID.points() * plateau + 0.0j)
        spec = NormSpec.modulation(math.inf, 1.0, 0.0)
        residuals = []
        for lam in (2.0, 4.0, 8.0, 16.0):
            window = _ditkin_window_at(f, lam, self.BASE)
            residuals.append(norm_value(SampledSignal(GRID, (f.samples - 0.0) * window), spec, PART))
        for a, b in zip(residuals, residuals[1:]):
            assert b / a == pytest.approx(0.5, rel=0.15)

    def test_gaussian_search_terminates(self):
        f = gaussian()
        spec = NormSpec.modulation(1.0, 1.0, 0.5)
        window, lam, residual = point_ditkin_window(f, 0.0, spec, 1e-3, self.BASE, PART)
        assert residual < 1e-3
        x = GRID.points()
        plateau = np.abs(x) <= self.BASE.inner_radius / lam
        assert np.max(np.abs(window.samples.real[plateau] - 1.0)) <= 1e-8

    def test_spec_guard(self):
        f = gaussian()
        with pytest.raises(ValueError):
            point_ditkin_window(f, 0.0, NormSpec.modulation(1.0, 2.0, 0.5), 1e-3, self.BASE, PART)


def _ditkin_window_at(f, lam, base):
    from tfnorms.compose import _dilated_window_samples

    return _dilated_window_samples(base, f.grid, 0.0, lam, base.support_radius)
