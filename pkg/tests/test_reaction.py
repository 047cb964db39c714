"""Reaction quantities and their closed-form bounds."""

import numpy as np
import pytest

from pinchflow.errors import InvalidConstants, NotPinched
from pinchflow.forms import (
    Dims,
    NormalCurvature,
    SecondFundamentalForm,
    mean_curvature,
    normal_curvature,
    principal_decompose,
)
from pinchflow.reaction import (
    boundary_reaction_bound,
    cc_reaction_upper_bound,
    gram_norm2,
    lemma43_lower_bound,
    r1,
    r2,
    reaction_gap,
)
from pinchflow.samplers import (
    PointSample,
    rescale_to_boundary,
    sample_pinched,
    symmetric_gaussian,
)
from tests.test_forms import sphere_form


def loop_r2(comps, hvec):
    m, n, _ = comps.shape
    total = 0.0
    for i in range(n):
        for j in range(n):
            s = sum(hvec[a] * comps[a, i, j] for a in range(m))
            total += s * s
    return total


class TestR1R2:
    def test_sphere_values(self):
        A = sphere_form()
        H = mean_curvature(A)
        assert r1(A) == pytest.approx(4.0, abs=1e-13)
        assert r2(A, H) == pytest.approx(32.0, abs=1e-13)

    def test_zero_form(self):
        A = SecondFundamentalForm.from_components(np.zeros((3, 5, 5)))
        H = mean_curvature(A)
        assert r1(A) == 0.0 and r2(A, H) == 0.0

    def test_r2_is_H2_h2(self):
        # sum_ij <A_ij, H>^2 = |H|^2 |h|^2, cross-checked with a loop oracle
        rng = np.random.default_rng(17)
        for k in range(1000):
            A = symmetric_gaussian(rng, Dims(4, 3))
            H = mean_curvature(A)
            dec = principal_decompose(A)
            val = r2(A, H)
            assert val == pytest.approx(H.norm2 * dec.h2, rel=1e-11)
            if k < 25:
                assert val == pytest.approx(loop_r2(A.components, H.vector), rel=1e-12)


class TestReactionGap:
    def test_sphere(self):
        A = sphere_form()
        dec = principal_decompose(A)
        rp = normal_curvature(A, dec)
        assert reaction_gap(A, mean_curvature(A), rp, 1 / 6) == pytest.approx(
            32 / 6 - 4, abs=1e-12
        )

    def test_cylinder(self):
        comps = np.zeros((2, 8, 8))
        comps[0, :7, :7] = np.eye(7)
        A = SecondFundamentalForm.from_components(comps)
        dec = principal_decompose(A)
        rp = normal_curvature(A, dec)
        assert reaction_gap(A, mean_curvature(A), rp, 1 / 6) == pytest.approx(
            343 / 6 - 49, abs=1e-11
        )

    def test_zero_form(self):
        A = SecondFundamentalForm.from_components(np.zeros((2, 4, 4)))
        rp = NormalCurvature(np.zeros((4, 4, 2, 2)), np.zeros((4, 4, 2)), 0.0)
        assert reaction_gap(A, mean_curvature(A), rp, 1 / 6) == 0.0

    def test_nonnegative_on_pinched(self):
        # c R2 >= gram + |Rperp|^2 whenever f >= 0, c <= 4/(3n)
        rng = np.random.default_rng(23)
        for _ in range(500):
            A = sample_pinched(rng, Dims(8, 3), 1 / 6, 0.0)
            dec = principal_decompose(A)
            rp = normal_curvature(A, dec)
            gap = reaction_gap(A, mean_curvature(A), rp, 1 / 6)
            assert gap >= -1e-9 * max(1.0, abs(gap))


class TestLemma43:
    def test_umbilic_lhs_zero(self):
        A = sphere_form()
        dec = principal_decompose(A)
        H = mean_curvature(A)
        rep = lemma43_lower_bound(dec, H, 2 / 3, 1 / 6, 0.0)
        assert rep.lhs_bound == pytest.approx(0.0, abs=1e-12)
        assert rep.slack >= 0.0

    def test_random_pinched(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            A = sample_pinched(rng, Dims(8, 3), 1 / 6, 0.5)
            dec = principal_decompose(A)
            H = mean_curvature(A)
            f = (1 / 6) * H.norm2 - dec.a2 - 0.5
            rep = lemma43_lower_bound(dec, H, f, 1 / 6, 0.5)
            assert rep.slack >= -1e-9 * max(1.0, abs(rep.lhs_bound), abs(rep.rhs_bound))

    def test_boundary_approach(self):
        # shrink f towards 0 by scaling |H| down along a fixed shape
        rng = np.random.default_rng(37)
        A0 = sample_pinched(rng, Dims(8, 2), 1 / 6, 1.0)
        H0 = mean_curvature(A0)
        f0 = (1 / 6) * H0.norm2 - A0.norm2 - 1.0
        for lam2 in (1.0, 0.9, 0.8):
            # scale towards the boundary: f(lam A) = lam^2 (f0 + 1) - 1
            lam = np.sqrt((1.0 + lam2 * f0) / (1.0 + f0))
            A = A0.scaled(float(lam))
            dec = principal_decompose(A)
            H = mean_curvature(A)
            f = (1 / 6) * H.norm2 - dec.a2 - 1.0
            assert f > 0
            rep = lemma43_lower_bound(dec, H, f, 1 / 6, 1.0)
            assert rep.slack >= -1e-9 * max(1.0, abs(rep.rhs_bound))

    def test_not_pinched(self):
        A = sphere_form()
        with pytest.raises(NotPinched):
            lemma43_lower_bound(
                principal_decompose(A), mean_curvature(A), -1.0, 1 / 6, 0.0
            )

    def test_bad_constants(self):
        A = sphere_form()
        with pytest.raises(InvalidConstants):
            lemma43_lower_bound(
                principal_decompose(A), mean_curvature(A), 1.0, 0.5, 0.0
            )


class TestBoundaryBound:
    def test_requires_boundary_data(self):
        A = sphere_form()
        with pytest.raises(NotPinched):
            boundary_reaction_bound(
                principal_decompose(A), mean_curvature(A), 1 / 6, 1.0
            )

    def test_random_boundary_slack(self):
        rng = np.random.default_rng(41)
        for _ in range(300):
            raw = sample_pinched(rng, Dims(8, 3), 1 / 6, 0.0)
            A = rescale_to_boundary(raw, 1 / 6, 1.0)
            dec = principal_decompose(A)
            H = mean_curvature(A)
            rep = boundary_reaction_bound(dec, H, 1 / 6, 1.0)
            scale = max(1.0, abs(rep.lhs_bound), abs(rep.rhs_bound))
            assert rep.slack >= -1e-9 * scale


class TestConstantCurvatureBound:
    def _hyperbolic_umbilic(self, r=0.5, n=8, m=2):
        lam = 1.0 / np.tanh(r)
        comps = np.zeros((m, n, n))
        comps[0] = lam * np.eye(n)
        A = SecondFundamentalForm.from_components(comps)
        return A, principal_decompose(A), mean_curvature(A)

    def test_hyperbolic_umbilic_equality_and_blowup(self):
        A, dec, H = self._hyperbolic_umbilic()
        q = dec.a_ring2 - (1 / 6 - 1 / 8) * H.norm2 + 4.0
        rep = cc_reaction_upper_bound(dec, H, q, 1 / 6, 4.0, -1.0)
        scale = max(1.0, abs(rep.lhs_bound))
        # umbilic data saturates the multi-line bound
        assert abs(rep.slack) < 1e-9 * scale
        assert rep.blowup_rhs is not None
        assert rep.blowup_rhs == pytest.approx(-(2 / 8) / (1 / 6 - 1 / 8) * q * q, rel=1e-13)
        assert rep.blowup_slack >= -1e-9 * scale

    def test_flat_umbilic_closed_form(self):
        # A = (|H|/n) I nu1 gives lhs = 2 (1/n) (1/n - c) |H|^4 <= 0
        A = sphere_form(n=8, m=2, r=2.0)
        dec, H = principal_decompose(A), mean_curvature(A)
        rep = cc_reaction_upper_bound(dec, H, 0.0, 1 / 6, 0.0, 0.0)
        expected = 2 * (1 / 8) * (1 / 8 - 1 / 6) * H.norm2**2
        assert rep.lhs_bound == pytest.approx(expected, rel=1e-12)
        assert rep.lhs_bound <= 0

    def test_vanishes_with_form(self):
        # both sides go to zero quartically as the form shrinks
        A, dec, H = self._hyperbolic_umbilic()
        for lam in (1e-2, 1e-3):
            As = A.scaled(lam)
            decs, Hs = principal_decompose(As), mean_curvature(As)
            q = decs.a_ring2 - (1 / 6 - 1 / 8) * Hs.norm2  # d = 0 here
            rep = cc_reaction_upper_bound(decs, Hs, q, 1 / 6, 0.0, -1.0)
            assert abs(rep.lhs_bound) < 500 * lam**2
            assert abs(rep.rhs_bound) < 500 * lam**2

    def test_random_pinched_space_form(self):
        rng = np.random.default_rng(53)
        n, m = 8, 3
        kbar = -1.0
        count_eligible = 0
        for _ in range(300):
            A = sample_pinched(rng, Dims(n, m), 1 / 6, 4.0)
            dec, H = principal_decompose(A), mean_curvature(A)
            q = dec.a_ring2 - (1 / 6 - 1 / 8) * H.norm2 - 4.0 * kbar
            rep = cc_reaction_upper_bound(dec, H, q, 1 / 6, 4.0, kbar)
            scale = max(1.0, abs(rep.lhs_bound), abs(rep.rhs_bound))
            assert rep.slack >= -1e-9 * scale
            if rep.blowup_slack is not None:
                count_eligible += 1
                assert rep.blowup_slack >= -1e-9 * scale
        assert count_eligible > 0

    def test_invalid_constants(self):
        A, dec, H = self._hyperbolic_umbilic()
        with pytest.raises(InvalidConstants):
            cc_reaction_upper_bound(dec, H, 0.0, 1 / 8, 4.0, -1.0)


class TestScaleCovariance:
    def test_quartic_scaling(self):
        rng = np.random.default_rng(61)
        A = sample_pinched(rng, Dims(8, 3), 1 / 6, 0.0)
        H = mean_curvature(A)
        dec = principal_decompose(A)
        rp = normal_curvature(A, dec)
        base = {
            "r1": r1(A),
            "r2": r2(A, H),
            "gap": reaction_gap(A, H, rp, 1 / 6),
        }
        f = (1 / 6) * H.norm2 - dec.a2
        base["l43"] = lemma43_lower_bound(dec, H, f, 1 / 6, 0.0).slack
        for lam in (0.5, 2.0):
            As = A.scaled(lam)
            Hs = mean_curvature(As)
            decs = principal_decompose(As)
            rps = normal_curvature(As, decs)
            assert r1(As) == pytest.approx(lam**4 * base["r1"], rel=1e-11)
            assert r2(As, Hs) == pytest.approx(lam**4 * base["r2"], rel=1e-11)
            assert reaction_gap(As, Hs, rps, 1 / 6) == pytest.approx(
                lam**4 * base["gap"], rel=1e-10, abs=1e-12
            )
            fs = (1 / 6) * Hs.norm2 - decs.a2
            assert lemma43_lower_bound(decs, Hs, fs, 1 / 6, 0.0).slack == pytest.approx(
                lam**4 * base["l43"], rel=1e-9, abs=1e-11
            )

    def test_cc_scaling_with_background(self):
        # scale A by lam and Kbar by lam^2 with d fixed: everything quartic
        rng = np.random.default_rng(67)
        A = sample_pinched(rng, Dims(8, 2), 1 / 6, 4.0)
        H, dec = mean_curvature(A), principal_decompose(A)
        q = dec.a_ring2 - (1 / 6 - 1 / 8) * H.norm2 + 4.0
        base = cc_reaction_upper_bound(dec, H, q, 1 / 6, 4.0, -1.0)
        for lam in (0.5, 2.0):
            As = A.scaled(lam)
            Hs, decs = mean_curvature(As), principal_decompose(As)
            qs = decs.a_ring2 - (1 / 6 - 1 / 8) * Hs.norm2 + 4.0 * lam**2
            rep = cc_reaction_upper_bound(decs, Hs, qs, 1 / 6, 4.0, -(lam**2))
            assert qs == pytest.approx(lam**2 * q, rel=1e-11)
            assert rep.slack == pytest.approx(lam**4 * base.slack, rel=1e-9, abs=1e-10)

    def test_boundary_scaling(self):
        rng = np.random.default_rng(71)
        raw = sample_pinched(rng, Dims(8, 3), 1 / 6, 0.0)
        A = rescale_to_boundary(raw, 1 / 6, 1.0)
        dec, H = principal_decompose(A), mean_curvature(A)
        base = boundary_reaction_bound(dec, H, 1 / 6, 1.0)
        for lam in (0.5, 2.0):
            As = A.scaled(lam)
            decs, Hs = principal_decompose(As), mean_curvature(As)
            rep = boundary_reaction_bound(decs, Hs, 1 / 6, lam**2 * 1.0)
            assert rep.slack == pytest.approx(lam**4 * base.slack, rel=1e-9, abs=1e-10)
