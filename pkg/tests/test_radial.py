import math

import numpy as np
import pytest

from fluxtube import ab, finite_tube
from fluxtube.radial import (BesselJ, Channel, ClosedForm, FieldMode, FluxConfig,
                             GammaUpperRatio, KummerM, Laguerre, RadialProfile,
                             SpinPreconditionError, TricomiU, apply_lowering,
                             apply_raising, derivative, evaluate, gauge_profile)
from fluxtube.spectrum import EigenState, Family, state_profile


def landau_ground(R=0.5):
    g = ClosedForm(1.0, 0.0, -0.5)
    return RadialProfile(g, g, Channel(-0.5, 0), FluxConfig(0.0, R))


def fd(f, r, h=1e-6):
    return (f(r + h) - f(r - h)) / (2 * h)


class TestConfig:
    def test_positive_radius(self):
        with pytest.raises(ValueError):
            FluxConfig(0.5, 0.0)

    def test_tube_only_needs_kappa_zero(self):
        with pytest.raises(ValueError):
            FluxConfig(0.5, 0.1, 0.01, FieldMode.TUBE_ONLY)

    def test_interior_field(self):
        assert FluxConfig(0.5, 0.5).interior_field == pytest.approx(3.0)
        assert FluxConfig(0.5, 0.5, 0.0, "TubeOnly").interior_field == pytest.approx(2.0)

    def test_channel_validation(self):
        with pytest.raises(ValueError):
            Channel(0.3, 1)
        with pytest.raises(ValueError):
            Channel(0.5, 1.5)
        assert Channel(-0.5, 2).nu(0.25) == 2.25


class TestEvaluate:
    def test_landau_ground_at_origin(self):
        assert evaluate(landau_ground(), 0.0) == 1.0

    def test_singlet_exterior(self):
        prof = finite_tube.singlet_profile(FluxConfig(0.5, 0.3), 0)
        assert evaluate(prof, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_negative_r(self):
        with pytest.raises(ValueError):
            evaluate(landau_ground(), -0.1)

    def test_exterior_used_at_radius(self):
        cfg = FluxConfig(0.0, 1.0)
        p = RadialProfile(ClosedForm(2.0), ClosedForm(3.0), Channel(0.5, 0), cfg)
        assert evaluate(p, 1.0) == 3.0
        assert evaluate(p, 0.999) == 2.0

    def test_matched_ansatz_continuous(self):
        cfg = FluxConfig(0.5, 0.5)
        p = finite_tube.matched_ansatz(cfg, Channel(-0.5, 0), 1.3)
        R = cfg.r_tube
        lo = evaluate(p, math.nextafter(R, 0))
        hi = evaluate(p, R)
        assert abs(lo - hi) <= 1e-12 * max(1, abs(hi))

    def test_special_factor_values(self):
        assert Laguerre(1, 0.7, 1.0).value(math.sqrt(3)) == pytest.approx(-1.3, abs=1e-14)
        assert KummerM(1.0, 1.0, 1.0).value(1.0) == pytest.approx(math.e, rel=1e-15)
        assert TricomiU(0.5, 1.5, 1.0).value(2.0) == pytest.approx(0.5, rel=1e-14)
        assert BesselJ(0.0, 1.0).value(0.0) == 1.0
        # Gamma(1, r^2) / Gamma(1) = exp(-r^2)
        assert GammaUpperRatio(1.0, 1.0).value(1.2) == pytest.approx(math.exp(-1.44), rel=1e-13)


class TestDerivative:
    def test_gaussian(self):
        assert derivative(landau_ground(), 1.0) == pytest.approx(-math.exp(-0.5), rel=1e-14)

    def test_power(self):
        p = RadialProfile(ClosedForm(1.0, 1.5), ClosedForm(1.0, 1.5), Channel(0.5, 1),
                          FluxConfig(0.0, 0.5))
        assert derivative(p, 4.0) == pytest.approx(3.0, rel=1e-14)

    def test_side_required_at_radius(self):
        p = landau_ground(0.5)
        with pytest.raises(ValueError):
            derivative(p, 0.5)
        assert derivative(p, 0.5, side="in") == derivative(p, 0.5, side="out")
        with pytest.raises(ValueError):
            derivative(p, 0.7, side="in")

    @pytest.mark.parametrize("alpha,fam,sigma,m,n", [
        (0.5, Family.LAG_A, 0.5, 0, 1), (0.5, Family.LAG_B, -0.5, -2, 2),
        (1.5, Family.SING_DOWN, -0.5, 0, 0), (-2.5, Family.SING_UP, 0.5, 1, 0),
        (1.0, Family.SING_DOWN_LOG, -0.5, 0, 0), (-1.0, Family.SING_UP_LOG, 0.5, 0, 0),
    ])
    def test_finite_difference(self, alpha, fam, sigma, m, n):
        R = 0.2
        p = state_profile(alpha, EigenState.make(fam, Channel(sigma, m), n, alpha), R)
        for r in (0.05, 0.13, 0.4, 1.1, 2.7):
            want = fd(p, r)
            assert derivative(p, r) == pytest.approx(want, abs=1e-6 * max(1, abs(want)))

    def test_finite_difference_kummer_and_bessel(self):
        p = finite_tube.matched_ansatz(FluxConfig(0.5, 0.5), Channel(-0.5, 0), 1.3)
        q = ab.ab_state_profile(0.7, Channel(0.5, 0), 2.0, 0.4)
        for prof in (p, q):
            for r in (0.1, 0.3, 0.8, 2.0):
                want = fd(prof, r)
                assert derivative(prof, r) == pytest.approx(want, abs=1e-6 * max(1, abs(want)))


def _profiles():
    out = []
    for alpha, fam, sigma, m, n in [
            (0.5, Family.LAG_A, 0.5, 0, 2), (0.5, Family.LAG_B, -0.5, -1, 1),
            (1.5, Family.SING_DOWN, -0.5, 0, 0), (2.5, Family.SING_DOWN, -0.5, -1, 0),
            (-1.5, Family.SING_UP, 0.5, 0, 0), (1.0, Family.SING_DOWN_LOG, -0.5, 0, 0),
            (-1.0, Family.SING_UP_LOG, 0.5, 0, 0), (-2.5, Family.LAG_B, 0.5, 1, 0)]:
        out.append(state_profile(alpha, EigenState.make(fam, Channel(sigma, m), n, alpha), 0.05))
    out.append(finite_tube.matched_ansatz(FluxConfig(1.2, 0.8), Channel(0.5, -2), 2.1))
    out.append(finite_tube.matched_ansatz(FluxConfig(-1.3, 0.4), Channel(0.5, 1), 0.7))
    out.append(finite_tube.singlet_profile(FluxConfig(1.5, 0.2), -1))
    out.append(ab.ab_state_profile(1.5, Channel(-0.5, -1), 0.8, 0.05))
    out.append(ab.ab_state_profile(-1.0, Channel(0.5, 2), 1.1, 0.05))
    out.extend(m.profile() for m in ab.ab_zero_modes(2.5, 0.05))
    out.extend(m.profile() for m in ab.ab_zero_modes(-1.7, 0.05))
    return out


@pytest.mark.parametrize("prof", _profiles(), ids=lambda p: f"{p.channel}")
def test_continuity_at_radius(prof):
    R = prof.config.r_tube
    lo = evaluate(prof, math.nextafter(R, 0))
    hi = evaluate(prof, R)
    assert abs(lo - hi) <= 1e-12 * max(1, abs(hi))


class TestGauge:
    def test_landau_exterior(self):
        cfg = FluxConfig(0.5, 0.2)
        g = gauge_profile(cfg, interior=False)
        assert sum(t.value(2.0) for t in g) == pytest.approx(2.0 + 0.25)

    def test_tube_only_interior(self):
        cfg = FluxConfig(0.5, 0.2, 0.0, FieldMode.TUBE_ONLY)
        g = gauge_profile(cfg, interior=True)
        assert sum(t.value(0.1) for t in g) == pytest.approx(0.5 * 0.1 / 0.04)


class TestLadder:
    grid = np.linspace(0.3, 5.0, 15)

    def test_spin_preconditions(self):
        up = state_profile(0.5, EigenState.make(Family.LAG_A, Channel(0.5, 0), 0, 0.5), 0.1)
        down = state_profile(0.5, EigenState.make(Family.LAG_B, Channel(-0.5, 0), 1, 0.5), 0.1)
        with pytest.raises(SpinPreconditionError):
            apply_raising(up)
        with pytest.raises(SpinPreconditionError):
            apply_lowering(down)
        assert apply_raising(down).channel == Channel(0.5, -1)
        assert apply_lowering(up).channel == Channel(-0.5, 1)

    def test_raising_annihilates_singlet(self):
        prof = finite_tube.singlet_profile(FluxConfig(0.5, 0.2), 0)
        img = apply_raising(prof)
        assert max(abs(evaluate(img, r)) for r in self.grid) <= 1e-10

    def test_raising_maps_to_partner(self):
        alpha = 0.5
        st = EigenState.make(Family.LAG_A, Channel(-0.5, 1), 0, alpha)
        partner = EigenState.make(Family.LAG_A, Channel(0.5, 0), 0, alpha)
        img = apply_raising(state_profile(alpha, st, 0.01))
        pp = state_profile(alpha, partner, 0.01)
        rt = math.sqrt(st.energy0)
        assert max(abs(evaluate(img, r) - rt * pp(r)) for r in self.grid) <= 1e-8

    @pytest.mark.parametrize("alpha,fam,m,n", [(0.0, Family.LAG_B, 0, 1),
                                               (0.5, Family.LAG_A, 1, 0),
                                               (0.5, Family.LAG_A, 2, 1),
                                               (1.5, Family.LAG_A, 0, 2),
                                               (-2.5, Family.LAG_B, 1, 2)])
    def test_lowering_raising_gives_energy(self, alpha, fam, m, n):
        st = EigenState.make(fam, Channel(-0.5, m), n, alpha)
        prof = state_profile(alpha, st, 0.01)
        back = apply_lowering(apply_raising(prof))
        assert back.channel == prof.channel
        E = st.energy0
        for r in self.grid:
            v = prof(r)
            assert abs(evaluate(back, r) - E * v) <= 1e-8 * max(1, abs(E * v))

    def test_discontinuity_exposed(self):
        # the transformed pieces are not joined at R
        prof = finite_tube.matched_ansatz(FluxConfig(0.5, 0.5), Channel(-0.5, 0), 1.3)
        img = apply_raising(prof)
        R = 0.5
        assert abs(evaluate(img, math.nextafter(R, 0)) - evaluate(img, R)) > 1e-6
