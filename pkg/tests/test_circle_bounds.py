"""Tests for unitary-commutator bound lines, envelopes, and the lower bound."""

import math

import numpy as np
import pytest

import commbound as cb
from commbound import circle_bounds


def closed_triangle_lower(delta):
    return (4.0 / math.pi) * math.asin(delta / 2.0)


def closed_bump_lower(delta):
    w = 2.0 * math.asin(delta / 2.0)
    if w >= math.pi / 2.0:
        return 1.0
    return math.sqrt(1.0 - (1.0 - 2.0 * w / math.pi) ** 2)


class TestBoundLine:
    def test_value_is_affine(self):
        line = cb.BoundLine(1.5, 0.25, 2.0, "x")
        assert line.value(0.0) == 0.25
        assert line.value(1.0) == 1.75

    def test_negative_slope_rejected(self):
        with pytest.raises(ValueError):
            cb.BoundLine(-0.1, 0.0)

    def test_negative_intercept_rejected(self):
        with pytest.raises(ValueError):
            cb.BoundLine(1.0, -1e-9)

    def test_domain_endpoint_rejected(self):
        with pytest.raises(ValueError):
            cb.BoundLine(1.0, 0.0, delta_max=0.0)
        with pytest.raises(ValueError):
            cb.BoundLine(1.0, 0.0, delta_max=2.5)


class TestBoundCurve:
    def lines(self):
        return [
            cb.BoundLine(2.0, 0.0, 2.0, "steep"),
            cb.BoundLine(0.5, 0.4, 2.0, "shallow"),
            cb.BoundLine(0.0, 1.2, 2.0, "flat"),
        ]

    def test_pointwise_minimum(self):
        curve = cb.BoundCurve(lines=self.lines())
        deltas = np.linspace(0.0, 2.0, 401)
        want = np.minimum(2.0 * deltas, np.minimum(0.5 * deltas + 0.4, 1.2))
        np.testing.assert_array_equal(curve.evaluate(deltas), want)

    def test_scalar_evaluate(self):
        curve = cb.BoundCurve(lines=self.lines())
        assert curve.evaluate(0.1) == 0.2

    def test_provenance_tracks_active_line(self):
        curve = cb.BoundCurve(lines=self.lines())
        assert curve.evaluate_with_provenance(0.1)[1] == "steep"
        assert curve.evaluate_with_provenance(0.5)[1] == "shallow"
        assert curve.evaluate_with_provenance(1.9)[1] == "flat"

    def test_restricted_domain_line_drops_out(self):
        lines = [cb.BoundLine(0.0, 0.1, 0.5, "narrow"), cb.BoundLine(0.0, 0.3, 2.0, "wide")]
        curve = cb.BoundCurve(lines=lines)
        assert curve.evaluate(0.4) == 0.1
        assert curve.evaluate(0.6) == 0.3

    def test_out_of_range_rejected(self):
        curve = cb.BoundCurve(lines=self.lines())
        with pytest.raises(ValueError):
            curve.evaluate(-0.01)
        with pytest.raises(ValueError):
            curve.evaluate(2.01)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cb.BoundCurve(lines=[])

    def test_segments_partition_and_match_evaluation(self):
        rng = np.random.default_rng(7)
        lines = [
            cb.BoundLine(float(m), float(b), 2.0, "l%d" % i)
            for i, (m, b) in enumerate(zip(rng.uniform(0, 3, 12), rng.uniform(0, 2, 12)))
        ]
        curve = cb.BoundCurve(lines=lines)
        segs = curve.segments(0.0, 2.0)
        assert segs[0][0] == 0.0 and segs[-1][1] == 2.0
        for (a0, b0, _), (a1, _, _) in zip(segs, segs[1:]):
            assert b0 == a1
        # active slopes of a lower envelope only ever decrease
        slopes = [s[2].slope for s in segs]
        assert all(x > y for x, y in zip(slopes, slopes[1:]))
        for lo, hi, line in segs:
            for d in np.linspace(lo, hi, 9):
                assert abs(line.value(d) - curve.evaluate(d)) <= 1e-12


class TestFolkAndSplit:
    def test_folk_line_from_derivative_norm(self, triangle):
        g = cb.truncate(triangle, 1)
        line = cb.folk_line(g)
        assert line.intercept == 0.0
        assert abs(line.slope - 8.0 / math.pi ** 2) <= 1e-15

    def test_split_line_adds_remainder_oscillation(self, triangle):
        g = cb.truncate(triangle, 1)
        line = cb.split_line(triangle, g)
        assert abs(line.slope - 8.0 / math.pi ** 2) <= 1e-15
        # remainder is the triangle minus its fundamental mode; its extremes
        # sit at 0 and pi, giving oscillation 2 (1 - 8/pi^2)
        want = 2.0 * (1.0 - 8.0 / math.pi ** 2)
        assert abs(line.intercept - want) <= 1e-6

    def test_split_of_polynomial_by_itself_is_folk(self):
        p = cb.from_coefficients({1: 0.5, -1: 0.5})
        line = cb.split_line(p, p)
        assert line.intercept <= 1e-12
        assert abs(line.slope - 1.0) <= 1e-15


class TestConstantCap:
    def test_triangle_cap_is_oscillation(self, triangle):
        line = cb.constant_cap(triangle)
        assert line.slope == 0.0
        assert abs(line.intercept - 2.0) <= 1e-12
        assert "oscillation" in line.provenance

    def test_cap_never_exceeds_coefficient_sum(self):
        # the enclosing disc of the range sits inside the coefficient-sum
        # disc, so the oscillation branch wins every comparison, with exact
        # ties resolved in its favor
        for coeffs in ({1: 1.0}, {3: 0.2, -4: 0.15}, {0: 0.5, 2: 0.25, -2: 0.25}):
            p = cb.from_coefficients(coeffs)
            line = cb.constant_cap(p)
            assert "oscillation" in line.provenance
            assert line.intercept <= 2.0 * cb.coefficient_l1(p) + 1e-12


class TestTruncationEnvelope:
    def test_pure_mode_doubles_delta(self):
        p = cb.from_coefficients({2: 1.0})
        env = cb.truncation_envelope(p, 4, grid_size=4096)
        for d in (0.0, 0.3, 0.9):
            assert abs(env.evaluate(d) - min(2.0 * d, 2.0)) <= 1e-12

    def test_constant_function_costs_nothing(self):
        p = cb.from_coefficients({0: 0.8})
        env = cb.truncation_envelope(p, 2, grid_size=4096)
        for d in (0.0, 1.0, 1.99):
            assert env.evaluate(d) == 0.0

    def test_triangle_envelope_shape(self, triangle_envelope):
        deltas = np.linspace(0.0, 1.99, 200)
        vals = triangle_envelope.evaluate(deltas)
        # nondecreasing, capped by the flat oscillation line
        assert np.all(np.diff(vals) >= -1e-15)
        assert np.all(vals <= 2.0 + 1e-15)
        assert vals[0] <= 0.35

    def test_triangle_envelope_beats_single_lines(self, triangle, triangle_envelope):
        for N in (0, 4, 16):
            line = cb.split_line(triangle, cb.truncate(triangle, N))
            for d in (0.05, 0.4, 1.2):
                assert triangle_envelope.evaluate(d) <= line.value(d) + 1e-12

    def test_provenance_names_active_degree(self, triangle_envelope):
        val, prov = triangle_envelope.evaluate_with_provenance(0.02)
        assert prov.startswith("truncation N=")
        # the fundamental-mode split meets the flat cap exactly at delta 2
        val, prov = triangle_envelope.evaluate_with_provenance(1.98)
        assert prov.startswith("truncation N=1")
        assert val < 2.0
        val, prov = triangle_envelope.evaluate_with_provenance(2.0)
        assert abs(val - 2.0) <= 1e-12

    def test_shift_invariance_for_polynomials(self, triangle):
        base = cb.truncate(triangle, 9)
        shifted = cb.from_coefficients(
            {int(n): base.coefficient(n) + (0.3 if n == 0 else 0.0) for n in base.ns}
        )
        env0 = cb.truncation_envelope(base, 9, grid_size=8192)
        env1 = cb.truncation_envelope(shifted, 9, grid_size=8192)
        for d in np.linspace(0.0, 1.99, 40):
            assert abs(env0.evaluate(d) - env1.evaluate(d)) <= 1e-12

    def test_negative_degree_rejected(self, triangle):
        with pytest.raises(ValueError):
            cb.truncation_envelope(triangle, -1)

    def test_bump_envelope_builds_from_estimates(self, bump):
        # even coefficients only reach 2.5e-10 certified error, which the
        # envelope absorbs rather than refusing to build
        env = cb.truncation_envelope(bump, 4, grid_size=4096)
        vals = env.evaluate(np.linspace(0.0, 1.99, 50))
        assert np.all(vals <= 1.0 + 1e-12)
        assert np.all(np.diff(vals) >= -1e-15)

    def test_tail_branch_bounds_true_tail(self, bump):
        special = pytest.importorskip("scipy.special")
        got = circle_bounds._corollary_tail(bump, 2)
        assert got is not None
        true_tail = 2.0 * sum(
            2.0 * abs(special.j1(n * math.pi / 2.0) / (2.0 * n))
            for n in range(3, 4000)
        )
        assert got >= true_tail


class TestEtaLower:
    def test_triangle_matches_closed_form(self, triangle):
        for d in (0.05, 0.3, 0.7, 1.0, 1.5, 1.95):
            got = cb.eta_lower(triangle, d)
            assert abs(got - closed_triangle_lower(d)) <= 1e-12

    def test_bump_matches_closed_form(self, bump):
        for d in (0.1, 0.5, 0.9, 1.2, 1.5, 1.9):
            got = cb.eta_lower(bump, d)
            assert abs(got - closed_bump_lower(d)) <= 1e-12

    def test_zero_distance_is_zero(self, triangle):
        assert cb.eta_lower(triangle, 0.0) == 0.0

    def test_domain_rejected(self, triangle):
        with pytest.raises(ValueError):
            cb.eta_lower(triangle, -0.1)
        with pytest.raises(ValueError):
            cb.eta_lower(triangle, 2.0)

    def test_monotone_in_delta(self, triangle):
        deltas = np.linspace(0.01, 1.99, 60)
        vals = [cb.eta_lower(triangle, float(d)) for d in deltas]
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))

    def test_dominates_coarse_pair_search(self, bump):
        # every pair drawn from a coarser grid is admissible for the finer
        # default grid, so the reported value can only be larger
        n = 512
        xs = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        vals = bump.sample(xs)
        for delta in (0.2, 0.8, 1.4):
            w = 2.0 * math.asin(delta / 2.0)
            d_max = int(w / (2.0 * math.pi / n))
            best = 0.0
            for off in range(1, d_max + 1):
                diff = np.max(np.abs(np.roll(vals, -off) - vals))
                best = max(best, float(diff))
            assert cb.eta_lower(bump, delta) >= best - 1e-12

    def test_approaches_full_oscillation(self, triangle):
        assert cb.eta_lower(triangle, 2.0 - 1e-8) >= 2.0 - 1e-3

    def test_lower_never_exceeds_upper(self, triangle, triangle_envelope):
        for d in np.linspace(0.01, 1.99, 80):
            lo = cb.eta_lower(triangle, float(d))
            hi = triangle_envelope.evaluate(float(d))
            assert lo <= hi + 1e-8


class TestContinuityBound:
    def test_delegates_to_curve(self, triangle_envelope):
        for d in (0.0, 0.5, 2.0):
            assert cb.continuity_bound(triangle_envelope, d) == triangle_envelope.evaluate(d)

    def test_domain_rejected(self, triangle_envelope):
        with pytest.raises(ValueError):
            cb.continuity_bound(triangle_envelope, -0.1)
        with pytest.raises(ValueError):
            cb.continuity_bound(triangle_envelope, 2.1)


hypothesis = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st  # noqa: E402

line_lists = st.lists(
    st.tuples(
        st.floats(min_value=0.0, max_value=5.0, allow_nan=False),
        st.floats(min_value=0.0, max_value=3.0, allow_nan=False),
    ),
    min_size=1,
    max_size=10,
)


@given(line_lists, st.floats(min_value=0.0, max_value=2.0, allow_nan=False))
@settings(max_examples=80, deadline=None)
def test_property_curve_is_minimum_of_lines(pairs, delta):
    lines = [cb.BoundLine(m, b, 2.0, "l%d" % i) for i, (m, b) in enumerate(pairs)]
    curve = cb.BoundCurve(lines=lines)
    want = min(m * delta + b for m, b in pairs)
    assert curve.evaluate(delta) == want
