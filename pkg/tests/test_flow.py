"""Model flow families: exact solutions, integrator, diagnostics, barriers."""

import math
import warnings

import numpy as np
import pytest

from pinchflow.constants import PinchingConstants
from pinchflow.errors import InvalidConstants, NonpositiveZ, PastBlowup
from pinchflow.flow import (
    CylinderFlow,
    FlowState,
    HyperbolicSphereFlow,
    ProductSpheresFlow,
    SphereFlow,
    blowup_bound_check,
    diagnostics,
    evolution_residual,
    exact_state,
    quotient_identity_residual,
    read_csv,
    simulate,
    step_rk4,
    write_csv,
)
from pinchflow.forms import Dims

FLAT_K = PinchingConstants(Dims(8, 2), 1 / 6)


def hyperbolic_constants(n=8, m=2, c=1 / 6, d=4.0, kbar=-1.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return PinchingConstants(Dims(n, m), c, d, regime="space_form", Kbar=kbar)


ALL_FAMILIES = [
    SphereFlow(8, 2, 2.0),
    CylinderFlow(8, 2, 1.0),
    ProductSpheresFlow(7, 1, 2, 1.0, 4.0),
    HyperbolicSphereFlow(8, 2, 1.0, -1.0),
]


class TestExactStates:
    def test_sphere(self):
        st = exact_state(SphereFlow(8, 2, 2.0), 0.2)
        assert st.params[0] == pytest.approx(math.sqrt(0.8), rel=1e-15)

    def test_product_initial(self):
        st = exact_state(ProductSpheresFlow(7, 1, 2, 1.0, 4.0), 0.0)
        assert st.params == (1.0, 4.0)

    def test_hyperbolic_cosh_law(self):
        fam = HyperbolicSphereFlow(8, 2, 1.0, -1.0)
        st = exact_state(fam, 0.05)
        assert math.cosh(st.params[0]) == pytest.approx(
            math.cosh(1.0) * math.exp(-0.4), rel=1e-14
        )

    def test_past_blowup(self):
        fam = SphereFlow(8, 2, 2.0)
        assert fam.blowup_time() == pytest.approx(0.25)
        with pytest.raises(PastBlowup):
            exact_state(fam, 0.25)

    def test_negative_time_allowed(self):
        st = exact_state(SphereFlow(8, 2, 2.0), -0.1)
        assert st.params[0] > 2.0


class TestRK4:
    def test_single_step_matches_exact(self):
        fam = SphereFlow(8, 2, 2.0)
        st = step_rk4(exact_state(fam, 0.0), 1e-4)
        assert st.params[0] == pytest.approx(fam.exact_params(1e-4)[0], abs=1e-12)

    def test_step_past_blowup(self):
        fam = SphereFlow(8, 2, 2.0)
        with pytest.raises(PastBlowup):
            step_rk4(exact_state(fam, 0.24), 0.02)

    def test_product_global_error(self):
        fam = ProductSpheresFlow(7, 1, 2, 1.0, 4.0)
        st = exact_state(fam, 0.0)
        steps = 500
        for _ in range(steps):
            st = step_rk4(st, 1e-4)
        exact = fam.exact_params(st.t)
        assert abs(st.params[0] - exact[0]) < 1e-10
        assert abs(st.params[1] - exact[1]) < 1e-10

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.kind)
    def test_tracks_exact_over_half_lifespan(self, fam):
        # fixed-step RK4 at dt = 1e-4 stays within 1e-9 relative
        st = exact_state(fam, 0.0)
        t_half = 0.5 * fam.blowup_time()
        while st.t < t_half:
            st = step_rk4(st, min(1e-4, t_half - st.t))
        exact = fam.exact_params(st.t)
        for got, want in zip(st.params, exact):
            assert abs(got - want) / want < 1e-9


class TestDiagnostics:
    def test_sphere_record(self):
        rec = diagnostics(exact_state(SphereFlow(8, 2, 2.0), 0.0), FLAT_K)
        assert rec.ratio_pinch == pytest.approx(1 / 8, abs=1e-15)
        assert rec.f == pytest.approx(2 / 3, abs=1e-13)
        assert rec.ratio_codim == pytest.approx(0.0, abs=1e-15)
        assert math.isnan(rec.Q)

    def test_static_cylinder_exact_ratios(self):
        rec = diagnostics(exact_state(CylinderFlow(8, 2, 1.0), 0.0), FLAT_K)
        assert rec.ratio_cyl == 0.0
        assert rec.ratio_pinch == 1 / 7

    def test_product_record_frozen(self):
        rec = diagnostics(exact_state(ProductSpheresFlow(7, 1, 2, 1.0, 4.0), 0.0), FLAT_K)
        assert rec.f == pytest.approx(1.1145833333333321, abs=1e-12)
        assert rec.Aminus2 == pytest.approx(0.07133757961783438, abs=1e-12)
        assert rec.ratio_codim == pytest.approx(0.06400380975058044, abs=1e-12)

    def test_hyperbolic_Q(self):
        fam = HyperbolicSphereFlow(8, 2, 0.5, -1.0)
        rec = diagnostics(exact_state(fam, 0.0), hyperbolic_constants())
        assert rec.Q == pytest.approx(-8.487185004883118, abs=1e-11)
        assert rec.f == pytest.approx(-rec.Q, rel=1e-12)  # kbar = -1 makes f = -Q

    def test_kbar_mismatch_rejected(self):
        fam = HyperbolicSphereFlow(8, 2, 0.5, -1.0)
        with pytest.raises(InvalidConstants):
            diagnostics(exact_state(fam, 0.0), hyperbolic_constants(kbar=-2.0))


class TestEvolutionResiduals:
    def test_sphere_reaction_value(self):
        res = evolution_residual(exact_state(SphereFlow(8, 2, 2.0), 0.0))
        assert res.reaction_H2 == pytest.approx(64.0, abs=1e-12)
        assert res.residual_H2 < 1e-6 and res.residual_A2 < 1e-6

    def test_hyperbolic_closed_form(self):
        # d|H|^2/dt = 2 n^3 coth(r)^2 / sinh(r)^2 for kbar = -1
        fam = HyperbolicSphereFlow(8, 2, 1.0, -1.0)
        res = evolution_residual(exact_state(fam, 0.0))
        r = 1.0
        expected = 2 * 8**3 / math.tanh(r) ** 2 / math.sinh(r) ** 2
        assert res.reaction_H2 == pytest.approx(expected, rel=1e-12)
        assert res.dH2_dt == pytest.approx(expected, rel=1e-6)

    def test_cylinder_shrinking(self):
        res = evolution_residual(exact_state(CylinderFlow(8, 2, 1.0), 0.01))
        assert res.residual_A2 < 1e-6 and res.residual_H2 < 1e-6

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.kind)
    def test_sampled_times(self, fam):
        for i in range(20):
            t = 0.5 * fam.blowup_time() * i / 19
            res = evolution_residual(FlowState(fam, t, fam.exact_params(t)))
            assert res.residual_A2 < 1e-6
            assert res.residual_H2 < 1e-6


class TestBlowupBarrier:
    def test_sphere_equality(self):
        v = blowup_bound_check(SphereFlow(8, 2, 2.0))
        assert v.barrier_ok and v.equality and v.tmax_ok

    def test_product_strict(self):
        v = blowup_bound_check(ProductSpheresFlow(7, 1, 2, 1.0, 4.0))
        assert v.barrier_ok and not v.equality and v.tmax_ok
        assert v.worst_margin >= 0

    def test_hyperbolic_flat_barrier_fails_adjusted_holds(self):
        # with kbar < 0 the flat-model barrier overestimates |H|^2 (the
        # 2n kbar |H|^2 term in the evolution is negative); the family
        # saturates the curvature-adjusted barrier instead
        v = blowup_bound_check(HyperbolicSphereFlow(8, 2, 0.5, -1.0))
        assert not v.barrier_ok
        assert not v.tmax_ok
        assert v.adjusted_ok
        assert abs(v.worst_adjusted_margin) < 1e-9

    def test_adjusted_matches_flat_when_flat(self):
        v = blowup_bound_check(CylinderFlow(8, 2, 1.0))
        assert v.barrier_ok == v.adjusted_ok


class TestSimulate:
    def test_sphere_pinching_preserved(self):
        recs = simulate(SphereFlow(8, 2, 2.0), FLAT_K, dt=1e-3, t_end=0.24)
        assert all(r.f > 0 for r in recs)
        fs = [r.f for r in recs]
        assert fs == sorted(fs)  # f grows towards blow-up
        assert all(abs(r.ratio_pinch - 1 / 8) < 1e-12 for r in recs)

    def test_hyperbolic_Q_decreasing_negative(self):
        fam = HyperbolicSphereFlow(8, 2, 0.5, -1.0)
        recs = simulate(fam, hyperbolic_constants(), dt=1e-5, t_end=fam.blowup_time())
        qs = [r.Q for r in recs]
        assert all(q < 0 for q in qs)
        assert all(b < a for a, b in zip(qs, qs[1:]))

    def test_hyperbolic_Q_ode_barrier(self):
        # dQ/dt <= -(2/n)/(c - 1/n) Q^2 integrates to Q(t) <= 1/(1/Q0 + 6t)
        fam = HyperbolicSphereFlow(8, 2, 0.5, -1.0)
        recs = simulate(fam, hyperbolic_constants(), dt=1e-5, t_end=fam.blowup_time())
        q0 = recs[0].Q
        for rec in recs[1:]:
            bound = 1.0 / (1.0 / q0 + 6.0 * rec.t)
            assert rec.Q <= bound * (1 - 1e-9)

    def test_product_codim_ratio_decays(self):
        fam = ProductSpheresFlow(7, 1, 2, 1.0, 4.0)
        recs = simulate(fam, FLAT_K, dt=1e-4, t_end=0.0712, every=2)
        first = recs[0]
        hit = next(r for r in recs if r.f >= 100.0)
        assert hit.ratio_codim < first.ratio_codim

    def test_radius_guard_stops(self):
        fam = SphereFlow(8, 2, 0.05)
        recs = simulate(fam, FLAT_K, dt=1e-4, t_end=1.0)
        assert recs[-1].params[0] > 0


class TestQuotientIdentity:
    def _grids(self, npts):
        x = np.linspace(0.0, 2 * np.pi, npts, endpoint=False)
        return x, 2 * np.pi / npts

    def test_w_equals_z(self):
        x, dx = self._grids(128)
        w = 2.0 + np.sin(x)
        source = np.cos(3 * x)
        res = quotient_identity_residual(w, w, source, source, dt=1e-5, dx=dx)
        assert res < 1e-12

    def test_constant_denominator_discrete_exact(self):
        x, dx = self._grids(128)
        w = 2.0 + np.sin(x)
        z = np.full_like(w, 2.0)
        res = quotient_identity_residual(w, z, np.cos(x), np.zeros_like(w), 1e-5, dx)
        # only cancellation noise from the time difference remains; the
        # O(dx^2) stencil error (~1e-3 here) cancels identically
        assert res < 5e-10

    def test_second_order_convergence(self):
        residuals = []
        for npts in (256, 512, 1024):
            x, dx = self._grids(npts)
            w = 2.0 + np.sin(x)
            z = 3.0 + np.cos(x)
            W = np.cos(2 * x)
            Z = np.sin(x)
            residuals.append(
                quotient_identity_residual(w, z, W, Z, dt=dx * dx / 4.0, dx=dx)
            )
        for coarse, fine in zip(residuals, residuals[1:]):
            assert 3.5 < coarse / fine < 4.5

    def test_nonpositive_z(self):
        x, dx = self._grids(64)
        with pytest.raises(NonpositiveZ):
            quotient_identity_residual(
                np.ones_like(x), np.sin(x), np.zeros_like(x), np.zeros_like(x), 1e-5, dx
            )


class TestCsv:
    def test_roundtrip(self, tmp_path):
        recs = simulate(ProductSpheresFlow(7, 1, 2, 1.0, 4.0), FLAT_K, 1e-3, 0.05, 5)
        path = str(tmp_path / "series.csv")
        write_csv(recs, path)
        back = read_csv(path)
        assert len(back) == len(recs)
        for a, b in zip(recs, back):
            assert a.t == b.t  # 17 significant digits round-trip floats exactly
            assert a.params == b.params
            assert a.Aminus2 == b.Aminus2
            assert math.isnan(b.Q)

    def test_header_and_nan(self, tmp_path):
        recs = simulate(SphereFlow(8, 2, 2.0), FLAT_K, 1e-3, 0.01)
        path = str(tmp_path / "sphere.csv")
        write_csv(recs, path)
        with open(path) as fh:
            header = fh.readline().strip()
            row = fh.readline().strip()
        assert header == "t,param1,param2,A2,H2,h2,Aminus2,f,Q,ratio_pinch,ratio_codim,ratio_cyl"
        fields = row.split(",")
        assert fields[2] == "NaN" and fields[8] == "NaN"
