"""Property tests for the special functions, profiles and spectrum rules."""

import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import special

from fluxtube import ab, spectrum
from fluxtube import specfun as sf
from fluxtube.radial import apply_lowering, apply_raising, evaluate

# a, b on a binary grid so that b - a is exact in floating point
grid64 = st.integers(-320, 320).map(lambda k: k / 64)
alphas = st.integers(-300, 300).map(lambda k: k / 100)
ALPHA_GRID = [k / 20 for k in range(-60, 61, 3)]  # 41 points in [-3, 3]


def near_nonpos_int(v, tol=1e-9):
    return v <= tol and abs(v - round(v)) < tol


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(grid64, grid64, st.floats(0.01, 20.0))
def test_kummer_transformation(a, b, x):
    assume(not near_nonpos_int(b, 1e-2))
    lhs = sf.kummer_m(a, b, x).value
    # direct series at negative argument, not the transformed evaluation
    s, err = sf._checked_series(b - a, b, -x)
    rhs = math.exp(x) * s
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.05, 20.0))
def test_wronskian(a, b, x):
    assume(abs(b - round(b)) > 1e-2)
    # away from the zeros of 1/Gamma(a) the right side is not small
    assume(not near_nonpos_int(a, 5e-2))
    M, dM = sf.kummer_m(a, b, x).value, sf.kummer_m_deriv(a, b, x).value
    U, dU = sf.tricomi_u(a, b, x).value, sf.tricomi_u_deriv(a, b, x).value
    want = -special.gamma(b) * special.rgamma(a) * x ** -b * math.exp(x)
    assert M * dU - dM * U == pytest.approx(want, rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.99, 10.0), st.floats(0.0, 50.0))
def test_laguerre_recurrence(a, x):
    L = [sf.laguerre_assoc(n, a, x).value for n in range(31)]
    for n in range(1, 30):
        lhs = (n + 1) * L[n + 1]
        rhs = (2 * n + 1 + a - x) * L[n] - (n + a) * L[n - 1]
        scale = abs(lhs) + abs((2 * n + 1 + a - x) * L[n]) + abs((n + a) * L[n - 1])
        assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 10.0), st.floats(0.0, 60.0))
def test_incomplete_gamma_sum(s, x):
    tot = sf.gamma_upper(s, x).value + sf.gamma_lower(s, x).value
    assert tot == pytest.approx(sf.gamma_fn(s).value, rel=1e-12)


def central(f, x, h):
    # five-point stencil, truncation error O(h^4)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


@settings(max_examples=150, deadline=None)
@given(st.floats(-5, 5), st.floats(0.3, 5), st.floats(0.2, 20.0))
def test_kummer_derivative_fd(a, b, x):
    h = 1e-3 * x
    fd = central(lambda t: sf.kummer_m(a, b, t).value, x, h)
    d = sf.kummer_m_deriv(a, b, x).value
    scale = max(abs(d), abs(sf.kummer_m(a, b, x).value) / x)
    assert abs(fd - d) <= 1e-6 * scale


@settings(max_examples=150, deadline=None)
@given(st.floats(-5, 5), st.floats(-4, 4), st.floats(0.2, 20.0))
def test_tricomi_derivative_fd(a, b, x):
    assume(abs(b - round(b)) > 1e-2)
    h = 1e-3 * x
    fd = central(lambda t: sf.tricomi_u(a, b, t).value, x, h)
    d = sf.tricomi_u_deriv(a, b, x).value
    scale = max(abs(d), abs(sf.tricomi_u(a, b, x).value) / x)
    assert abs(fd - d) <= 1e-6 * scale


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def table_states(alpha, e_max=3.0, window=3):
    return spectrum.enumerate_spectrum(alpha, 0.0, e_max, -window, window).states


@settings(max_examples=60, deadline=None)
@given(alphas, st.floats(1e-3, 0.8), st.data())
def test_profiles_continuous(alpha, R, data):
    state = data.draw(st.sampled_from(table_states(alpha)))
    p = spectrum.state_profile(alpha, state, R)
    below, at = evaluate(p, math.nextafter(R, 0)), evaluate(p, R)
    assert abs(below - at) <= 1e-12 * max(1.0, abs(at))


@settings(max_examples=60, deadline=None)
@given(alphas, st.data())
def test_ladder_energy_identity(alpha, data):
    states = [s for s in table_states(alpha) if not s.family.singular and s.exact_energy0 > 0]
    state = data.draw(st.sampled_from(states))
    R = 1e-2
    f = spectrum.state_profile(alpha, state, R)
    if state.channel.is_down:
        g = apply_lowering(apply_raising(f))
    else:
        g = apply_raising(apply_lowering(f))
    rs = np.linspace(R + 0.1, 5.0, 15)
    fv = [evaluate(f, r) for r in rs]
    scale = max(abs(v) for v in fv)
    E = state.energy0
    assert max(abs(evaluate(g, r) - E * v) for r, v in zip(rs, fv)) <= 1e-8 * E * scale


@settings(max_examples=60, deadline=None)
@given(alphas, st.floats(1e-3, 0.5))
def test_zero_energy_down_states_annihilated(alpha, R):
    for s in table_states(alpha, e_max=0.5):
        if s.exact_energy0 == 0 and s.channel.is_down:
            img = apply_raising(spectrum.state_profile(alpha, s, R))
            for r in np.linspace(R + 0.1, 5.0, 8):
                assert abs(evaluate(img, r)) <= 1e-10


# ---------------------------------------------------------------------------
# spectrum rules
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_susy_closure(alpha):
    tab = spectrum.enumerate_spectrum(alpha, 0.0, 5.0, -8, 8)
    have = Counter((s.family, s.channel, s.n, s.exact_energy0) for s in tab.states)
    assert max(have.values()) == 1
    energies = {ch: Counter(s.exact_energy0 for s in tab.by_channel(ch))
                for ch in {s.channel for s in tab.states}}
    for s in tab.states:
        partner = spectrum.pair_partner(s)
        if s.exact_energy0 == 0:
            assert partner is None
            continue
        assert partner.exact_energy0 == s.exact_energy0
        if -8 <= partner.channel.m <= 8:
            assert (partner.family, partner.channel, partner.n, partner.exact_energy0) in have
            assert energies[partner.channel][s.exact_energy0] == 1


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_direct_states_contained(alpha):
    tab = spectrum.enumerate_spectrum(alpha, 0.0, 5.0, -8, 8)
    have = Counter((s.channel, s.exact_energy0) for s in tab.states)
    for d in spectrum.direct_approach_states(alpha, 5.0, -8, 8):
        assert have[(d.channel, d.exact_energy)] >= 1


@settings(max_examples=80, deadline=None)
@given(alphas, st.floats(-0.2, 0.2))
def test_positivity(alpha, kappa):
    tab = spectrum.enumerate_spectrum(alpha, kappa, 4.0, -5, 5)
    shifted = [s.exact_energy - Fraction(kappa) * Fraction(s.channel.sigma) for s in tab.states]
    assert min(shifted) == 0


@settings(max_examples=200, deadline=None)
@given(st.one_of(alphas, st.integers(-6, 6).map(lambda k: k / 2)))
def test_indices_match_closed_forms(alpha):
    assert spectrum.index_singular(alpha) == spectrum.index_singular_closed_form(alpha)
    assert ab.index_ab(alpha) == ab.index_ab_closed_form(alpha)
    if alpha == int(alpha):
        assert spectrum.index_singular(alpha) == ab.index_ab(alpha) == alpha


@settings(max_examples=100, deadline=None)
@given(alphas, alphas)
def test_signature_follows_class(a1, a2):
    same = spectrum.classify_alpha(a1) == spectrum.classify_alpha(a2)
    assert same == (spectrum.structural_signature(a1) == spectrum.structural_signature(a2))


@settings(max_examples=60, deadline=None)
@given(alphas, st.sampled_from([0.0023, -0.01, 0.3]))
def test_kappa_shift_exact(alpha, kappa):
    base = spectrum.enumerate_spectrum(alpha, 0.0, 6.0, -4, 4)
    shifted = spectrum.enumerate_spectrum(alpha, kappa, 5.0, -4, 4)
    k = Fraction(kappa)
    want = sorted((s.channel, s.family, s.n, s.exact_energy0 + k * Fraction(s.channel.sigma))
                  for s in base.states
                  if s.exact_energy0 + k * Fraction(s.channel.sigma) <= 5)
    got = sorted((s.channel, s.family, s.n, s.exact_energy) for s in shifted.states)
    assert got == want
