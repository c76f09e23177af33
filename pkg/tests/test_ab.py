import csv
import io
import json
import math

import numpy as np
import pytest
from scipy import special

from fluxtube import ab
from fluxtube.analysis import DivergentIntegralError, inner_product
from fluxtube.radial import (BesselJ, Channel, ClosedForm, RadialProfile,
                             apply_lowering, apply_raising, evaluate)
from fluxtube.spectrum import index_singular

GRID = list(np.linspace(0.2, 5.0, 12))


class TestScatterStates:
    def test_free_particle(self):
        p = ab.ab_state_profile(0.0, Channel(-0.5, 2), 1.0, 0.5)
        for r in (0.1, 0.5, 1.3, 4.0):
            assert p(r) == pytest.approx(special.jv(2, r), rel=1e-12, abs=1e-15)

    def test_plus_order(self):
        ch = Channel(0.5, 0)
        assert ab.ab_branch(0.7, ch) is ab.BesselBranch.PLUS_ORDER
        p = ab.ab_state_profile(0.7, ch, 2.0, 1e-3)
        for r in (0.01, 0.5, 2.0):
            assert p(r) == pytest.approx(special.jv(0.7, 2 * r), rel=1e-11)

    def test_minus_order(self):
        ch = Channel(-0.5, -2)
        st = ab.AbScatterState.make(1.5, ch, 0.8)
        assert st.branch is ab.BesselBranch.MINUS_ORDER
        assert st.energy == pytest.approx(0.16)
        p = ab.ab_state_profile(1.5, ch, 0.8, 1e-3)
        assert p(1.1) == pytest.approx(special.jv(0.5, 0.88), rel=1e-11)

    @pytest.mark.parametrize("alpha,sigma,m,k", [(0.7, 0.5, 0, 2.0), (1.5, -0.5, -1, 0.8),
                                                 (-1.0, 0.5, 2, 1.1), (2.3, -0.5, 1, 3.0)])
    def test_continuous(self, alpha, sigma, m, k):
        R = 0.3
        p = ab.ab_state_profile(alpha, Channel(sigma, m), k, R)
        assert abs(p(math.nextafter(R, 0)) - p(R)) <= 1e-12 * max(1, abs(p(R)))

    def test_no_branch(self):
        with pytest.raises(ab.NoBranchError):
            ab.ab_branch(1.0, Channel(0.5, -1))
        with pytest.raises(ab.NoBranchError):
            ab.ab_state_profile(1.0, Channel(-0.5, 0), 1.0, 0.1)

    def test_k_positive(self):
        with pytest.raises(ValueError):
            ab.AbScatterState.make(0.5, Channel(0.5, 0), 0.0)


class TestZeroModes:
    def test_none_below_half(self):
        assert ab.ab_zero_modes(0.4, 1e-3) == []
        assert ab.ab_zero_modes(-0.5, 1e-3) == []

    def test_single_normalizable(self):
        (mode,) = ab.ab_zero_modes(1.5, 1e-3)
        assert mode.channel == Channel(-0.5, 0)
        assert mode.regime is ab.ZeroModeRegime.NORMALIZABLE

    def test_log_mode(self):
        R = 1e-3
        (mode,) = ab.ab_zero_modes(-1.0, R)
        assert mode.channel == Channel(0.5, 0)
        assert mode.regime is ab.ZeroModeRegime.LOG_NORMALIZED
        assert mode.nu == pytest.approx((-math.pi * math.log(R * R)) ** -0.5, rel=1e-15)

    def test_regimes_at_2_7(self):
        modes = ab.ab_zero_modes(2.7, 1e-3)
        got = {(m.channel.m, m.regime) for m in modes}
        assert got == {(0, ab.ZeroModeRegime.NORMALIZABLE),
                       (-1, ab.ZeroModeRegime.NORMALIZABLE),
                       (-2, ab.ZeroModeRegime.NON_NORMALIZABLE)}
        assert [m.nu for m in modes if m.channel.m == -2] == [1.0]

    def test_log_needs_small_radius(self):
        with pytest.raises(ValueError):
            ab.ab_zero_modes(1.0, 1.5)

    def test_profiles_continuous(self):
        for alpha in (2.7, -2.7, 1.0, -1.6):
            for mode in ab.ab_zero_modes(alpha, 0.2):
                p = mode.profile()
                assert abs(p(math.nextafter(0.2, 0)) - p(0.2)) <= 1e-12 * max(1, abs(p(0.2)))

    @pytest.mark.parametrize("alpha", [1.5, 2.7, -1.5, -3.2])
    def test_normalizable_norm_is_one(self, alpha):
        # without the homogeneous field the printed constant is exact at any R
        for R in (1e-3, 0.1):
            for mode in ab.ab_zero_modes(alpha, R):
                if mode.regime is ab.ZeroModeRegime.NORMALIZABLE:
                    p = mode.profile()
                    assert inner_product(p, p) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("alpha", [0.7, -0.8, 1.0, -2.0])
    def test_other_regimes_diverge(self, alpha):
        for mode in ab.ab_zero_modes(alpha, 1e-3):
            if mode.regime is not ab.ZeroModeRegime.NORMALIZABLE:
                p = mode.profile()
                with pytest.raises(DivergentIntegralError):
                    inner_product(p, p)

    def test_annihilated_by_ladders(self):
        for alpha in (0.7, 1.5, 2.7, -1.0, -2.3):
            for mode in ab.ab_zero_modes(alpha, 1e-3):
                p = mode.profile()
                img = apply_raising(p) if mode.channel.is_down else apply_lowering(p)
                assert max(abs(evaluate(img, r)) for r in GRID) <= 1e-10

    @pytest.mark.parametrize("alpha", [1.5, 2.5, -1.5, -2.2])
    def test_vanishing_field_limit(self, alpha):
        R = 0.05
        rs = np.linspace(0.1, 2.0, 9)
        for mode in ab.ab_zero_modes(alpha, R):
            if mode.regime is not ab.ZeroModeRegime.NORMALIZABLE:
                continue
            p = mode.profile()
            err = []
            for lam in (1e2, 1e3, 1e5):
                f = ab.vanishing_field_profile(alpha, mode, lam)
                err.append(max(abs(f(r) - p(r)) / max(1, abs(p(r))) for r in rs))
            assert err[0] > err[1] > err[2]
            assert err[2] <= 1e-8

    def test_limit_needs_normalizable(self):
        (mode,) = ab.ab_zero_modes(0.7, 1e-3)
        with pytest.raises(ValueError):
            ab.vanishing_field_profile(0.7, mode, 10.0)


class TestIndex:
    def test_examples(self):
        assert ab.index_ab(0.5) == 0
        assert ab.index_ab(1.5) == 1
        assert ab.index_ab(-0.6) == -1
        assert ab.index_ab(-0.5) == 0
        assert ab.index_ab(-1.5) == -1

    def test_closed_form_grid(self):
        for i in range(-30, 31):
            a = i / 10
            assert ab.index_ab(a) == ab.index_ab_closed_form(a)

    def test_integers_agree_with_singular_index(self):
        for k in range(-3, 4):
            assert ab.index_ab(k) == index_singular(k) == k


class TestResidual:
    def test_scatter_state(self):
        p = ab.ab_state_profile(0.7, Channel(0.5, 0), 2.0, 1e-3)
        assert ab.ab_hamiltonian_residual(p, 0.7, 2.0, GRID) <= 1e-6

    def test_zero_modes(self):
        for mode in ab.ab_zero_modes(2.7, 1e-3):
            assert ab.ab_hamiltonian_residual(mode.profile(), 2.7, 0.0, GRID) <= 1e-6

    def test_wrong_order(self):
        good = ab.ab_state_profile(0.7, Channel(0.5, 0), 2.0, 1e-3)
        ext = ClosedForm(1.0, 0.0, 0.0, BesselJ(0.8, 2.0))
        bad = RadialProfile(good.interior, (ext,), good.channel, good.config)
        assert ab.ab_hamiltonian_residual(bad, 0.7, 2.0, GRID) > 1e-2


class TestExport:
    def test_zero_mode_json(self):
        d = json.loads(ab.zero_modes_to_json(ab.ab_zero_modes(2.7, 1e-3)))
        assert d["alpha"] == 2.7
        assert [m["regime"] for m in d["modes"]] == ["NonNormalizable", "Normalizable",
                                                     "Normalizable"]

    def test_index_csv(self):
        rows = list(csv.DictReader(io.StringIO(ab.index_curve_csv([-1.0, 0.5, 1.5]))))
        assert [(r["alpha"], r["I_AB"], r["I_s"]) for r in rows] == [
            ("-1.0", "-1", "-1"), ("0.5", "0", "0"), ("1.5", "1", "1")]
