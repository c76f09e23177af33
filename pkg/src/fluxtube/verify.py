"""
End-to-end verification suite.

Each ``check_*`` function runs one family of checks at fixed parameters and
returns a :class:`VerificationReport`.  The tolerances are module constants
so that the test suite and the command line share them.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from fractions import Fraction
from typing import Callable

import numpy as np

from . import ab, analysis, finite_tube, spectrum
from .analysis import (LimitSequence, QuadConfig, VerificationReport,
                       function_profile, inner_product)
from .radial import Channel, FluxConfig, apply_raising, evaluate
from .spectrum import EigenState, Family

__all__ = ["SUITES", "run_suite", "suite_names"]

LANDAU_TOL = 1e-8
SUSY_ROOT_TOL = 1e-6
SMALL_R_FLOOR = 1e-3
GRAM_OFFDIAG_TOL = 1e-6
GRAM_DIAG_TOL = 1e-4
DELTA_MASS_MIN = 0.999
OVERLAP_MAX = 1e-3
LADDER_TOL = 1e-8
ANNIHILATE_TOL = 1e-10
ODE_TOL = 1e-6

# tube radii for the delta-convergence check; the slowest family
# (|m + alpha| = 3/2) has a test-function overlap of about 1.74 sqrt(R)
DELTA_SEQUENCE = LimitSequence((3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5,
                                3e-6, 1e-6, 3e-7, 1e-7))


def _theta(v) -> int:
    return 1 if v > 0 else 0


def check_landau_limit() -> VerificationReport:
    """Without flux the matched roots are the Landau levels for any R."""
    rep = VerificationReport()
    for R in (0.4, 0.7):
        cfg = FluxConfig(0.0, R)
        for sigma in (-0.5, 0.5):
            for m in range(-3, 4):
                ch = Channel(sigma, m)
                base = m * _theta(m) + sigma + 0.5
                want = [base + n for n in range(0, 6) if base + n <= 4 + 1e-12]
                got = [r.energy for r in finite_tube.scan_roots(cfg, ch, 0.0, 4.5)
                       if r.energy <= 4 + 1e-6]
                if len(got) != len(want):
                    rep.add(f"landau R={R} {ch}", math.inf, LANDAU_TOL,
                            detail=f"found {got}, expected {want}")
                    continue
                err = max((abs(a - b) for a, b in zip(got, want)), default=0.0)
                rep.add(f"landau R={R} sigma={sigma:+.1f} m={m}", err, LANDAU_TOL)
    return rep


def check_finite_r_susy() -> VerificationReport:
    """Positive roots of (-1/2, m) reappear in (+1/2, m-1) at finite R."""
    rep = VerificationReport()
    e_max = 6.0
    for alpha in (0.3, 0.5, 1.2):
        for R in (0.4, 0.8):
            cfg = FluxConfig(alpha, R)
            for m in range(-3, 4):
                down = [r.energy for r in finite_tube.scan_roots(cfg, Channel(-0.5, m), 0.0, e_max)]
                up = [r.energy for r in
                      finite_tube.scan_roots(cfg, Channel(0.5, m - 1), 0.0, e_max + 0.2)]
                worst = 0.0
                for e in down:
                    if e <= 1e-9:
                        continue
                    gap = min((abs(e - u) for u in up), default=math.inf)
                    worst = max(worst, gap)
                rep.add(f"pair alpha={alpha} R={R} m={m} ({len(down)} roots)", worst,
                        SUSY_ROOT_TOL)
    return rep


def check_small_r_pattern() -> VerificationReport:
    rep = VerificationReport()
    for alpha in (-1.7, 0.8, 2.3):
        for sigma in (-0.5, 0.5):
            for m in range(-4, 5):
                v = finite_tube.small_r_condition(Channel(sigma, m), alpha)
                zero = (sigma < 0 and m <= 0) or (sigma > 0 and m >= 0)
                name = f"small-R alpha={alpha} sigma={sigma:+.1f} m={m}"
                if zero:
                    rep.add(name + " == 0", v, 0.0, passed=(v == 0.0))
                else:
                    rep.add(name + " nonzero", abs(v), SMALL_R_FLOOR,
                            passed=abs(v) > SMALL_R_FLOOR)
    return rep


PANEL_ALPHAS = (0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 2.5, -2.5)


def check_spectrum_structure() -> VerificationReport:
    """Exact structure of the enumerated spectrum, zero tolerance."""
    rep = VerificationReport()
    m_min, m_max = -6, 6
    for alpha in PANEL_ALPHAS:
        tab = spectrum.enumerate_spectrum(alpha, 0.0, 5.0, m_min, m_max)
        a = Fraction(alpha)
        fa = a - math.floor(a)
        sing = tab.singular_states()
        n_want = math.floor(abs(alpha))
        spin_want = -0.5 if alpha > 0 else 0.5
        ok = len(sing) == n_want and all(s.channel.sigma == spin_want for s in sing)
        rep.add(f"alpha={alpha}: {len(sing)} singular states", len(sing), n_want, passed=ok)

        integer = a.denominator == 1 and a != 0
        rep.add(f"alpha={alpha}: vacancies", len(tab.vacancies), 1 if integer else 0,
                passed=len(tab.vacancies) == (1 if integer else 0))

        shift_ok = Fraction(tab.block_shift) == fa
        for s in tab.states:
            e = s.exact_energy0
            want = fa if s.family is Family.LAG_A else Fraction(0)
            shift_ok &= (e - want).denominator == 1
        rep.add(f"alpha={alpha}: right block = frac(alpha) mod 1", 0.0, 0.0, passed=shift_ok)

        left = [s.channel.m + s.channel.sigma for s in tab.states if s.family is Family.LAG_B]
        right = [s.channel.m + s.channel.sigma for s in tab.states if s.family is Family.LAG_A]
        sep = not left or not right or max(left) < min(right)
        rep.add(f"alpha={alpha}: blocks separated in m+sigma", 0.0, 0.0, passed=sep)

        closed = True
        for m in range(m_min + 1, m_max + 1):
            d = Counter(s.exact_energy0 for s in tab.by_channel(Channel(-0.5, m)))
            u = Counter(s.exact_energy0 for s in tab.by_channel(Channel(0.5, m - 1)))
            # E = 0 states are singlets on either side; only E > 0 must pair
            d.pop(Fraction(0), None)
            u.pop(Fraction(0), None)
            closed &= d == u
        rep.add(f"alpha={alpha}: SUSY closure", 0.0, 0.0, passed=closed)
    return rep


def _eq62(alpha: float) -> int:
    if alpha > 0:
        return math.floor(alpha)
    if alpha < 0:
        return -math.floor(-alpha)
    return 0


def _eq79(alpha: float) -> int:
    for n in range(1, 10):
        if n - 0.5 < alpha <= n + 0.5:
            return n
        if -n - 0.5 <= alpha < -n + 0.5:
            return -n
    if -0.5 <= alpha <= 0.5:
        return 0
    raise ValueError("alpha outside the tabulated range")


def check_indices() -> VerificationReport:
    rep = VerificationReport()
    grid = [k / 20 for k in range(-60, 61)]
    bad_s = [a for a in grid if spectrum.index_singular(a) != _eq62(a)]
    bad_ab = [a for a in grid if ab.index_ab(a) != _eq79(a)]
    bad_int = [a for a in grid if a == int(a)
               and not (spectrum.index_singular(a) == ab.index_ab(a) == int(a))]
    rep.add("I_s matches closed form on 0.05 grid", len(bad_s), 0, detail=str(bad_s))
    rep.add("I_AB matches closed form on 0.05 grid", len(bad_ab), 0, detail=str(bad_ab))
    rep.add("I_s = I_AB = alpha at integers", len(bad_int), 0, detail=str(bad_int))
    return rep


def lowest_states(alpha: float, count: int, m_min: int = -3, m_max: int = 3,
                  e_max: float = 3.0) -> list:
    """The ``count`` lowest states in the m window, ordered by (E, sigma, m, n)."""
    tab = spectrum.enumerate_spectrum(alpha, 0.0, e_max, m_min, m_max)
    st = sorted(tab.states, key=lambda s: (s.exact_energy0, s.channel.sigma, s.channel.m, s.n))
    return st[:count]


def check_orthonormality() -> VerificationReport:
    rep = VerificationReport()
    for alpha, count in ((0.5, 12), (1.5, 10)):
        states = lowest_states(alpha, count)
        G = analysis.gram(states, alpha)
        n_sing = sum(s.family.singular for s in states)
        diag = float(np.max(np.abs(np.diag(G) - 1)))
        off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
        rep.add(f"alpha={alpha}: gram diagonal ({count} states, {n_sing} singular)",
                diag, GRAM_DIAG_TOL)
        rep.add(f"alpha={alpha}: gram off-diagonal", off, GRAM_OFFDIAG_TOL)
    return rep


def _test_function(m: int) -> Callable:
    # normalized r^|m| exp(-r^2/2): smooth at the origin in channel m
    am = abs(m)
    c = 1.0 / math.sqrt(math.pi * math.factorial(am))
    return lambda r: c * r ** am * math.exp(-r * r / 2)


def check_delta_convergence() -> VerificationReport:
    rep = VerificationReport()
    for alpha in (1.5, 2.5, -1.5):
        tab = spectrum.enumerate_spectrum(alpha, 0.0, 1.0, -6, 6)
        for st in tab.singular_states():
            tag = f"alpha={alpha} {st.family.value} m={st.channel.m}"
            mass = analysis.delta_mass(st, alpha, 0.1, 1e-4)
            rep.add(f"{tag}: mass in r<0.1 at R=1e-4", mass, DELTA_MASS_MIN,
                    passed=mass >= DELTA_MASS_MIN)
            g = _test_function(st.channel.m)
            ov = []
            for R in DELTA_SEQUENCE.r_tube_values:
                p = spectrum.state_profile(alpha, st, R)
                ov.append(abs(inner_product(p, function_profile(g, p.channel, p.config))))
            mono = all(b < a for a, b in zip(ov, ov[1:]))
            rep.add(f"{tag}: overlap monotone, final {ov[-1]:.2e}", ov[-1], OVERLAP_MAX,
                    passed=mono and ov[-1] <= OVERLAP_MAX)
    return rep


LADDER_ALPHAS = (0.0, 0.5, 1.5, -2.5)
_EXT_GRID = tuple(np.linspace(0.3, 4.0, 12))


def check_ladder() -> VerificationReport:
    rep = VerificationReport()
    R = 1e-2
    for alpha in LADDER_ALPHAS:
        tab = spectrum.enumerate_spectrum(alpha, 0.0, 3.0, -3, 3)
        paired = [s for s in tab.states if s.channel.is_down and s.exact_energy0 > 0]
        paired.sort(key=lambda s: (s.exact_energy0, s.channel.m, s.n))
        for st in paired[:5]:
            v = analysis.susy_pair_check(alpha, st, R, _EXT_GRID)
            rep.add(f"alpha={alpha} {st.family.value} m={st.channel.m} n={st.n} E={st.energy0:g}",
                    v, LADDER_TOL)
        zero = [s for s in tab.states if s.channel.is_down and s.exact_energy0 == 0]
        worst = 0.0
        for st in zero:
            img = apply_raising(spectrum.state_profile(alpha, st, R))
            # for m >= 1 the regular interior piece is not the (singular) zero
            # mode, so the identity is checked outside the tube only
            pts = list(_EXT_GRID)
            if st.channel.m <= 0:
                pts += [R * x for x in (0.1, 0.5, 0.9)]
            worst = max(worst, max(abs(evaluate(img, r)) for r in pts))
        rep.add(f"alpha={alpha}: raising annihilates {len(zero)} E=0 states", worst,
                ANNIHILATE_TOL)
    return rep


def check_ode_residuals() -> VerificationReport:
    rep = VerificationReport()
    R = 0.3
    inner = [R * x for x in (0.2, 0.45, 0.7)]
    outer = list(np.linspace(0.5, 4.0, 8))
    samples = [(0.5, Family.LAG_A, 0.5, 0, 0), (0.5, Family.LAG_A, -0.5, 2, 1),
               (0.5, Family.LAG_B, -0.5, 0, 2), (0.5, Family.LAG_B, 0.5, -2, 1),
               (1.5, Family.LAG_A, -0.5, 0, 1), (1.5, Family.LAG_B, -0.5, -2, 0),
               (-1.3, Family.LAG_A, 0.5, 1, 0), (-1.3, Family.LAG_B, 0.5, 0, 1),
               (2.2, Family.LAG_A, 0.5, -1, 2), (-0.7, Family.LAG_B, -0.5, 0, 3)]
    for alpha, fam, sigma, m, n in samples:
        st = EigenState.make(fam, Channel(sigma, m), n, alpha)
        prof = spectrum.state_profile(alpha, st, R)
        v = analysis.ode_residual(prof, prof.config, st.energy0, inner + outer)
        rep.add(f"field alpha={alpha} {fam.value} ({sigma:+.1f},{m}) n={n}", v, ODE_TOL)
    for alpha in (0.5, 1.5, -1.5):
        cfg = FluxConfig(alpha, R)
        for m in range(-4, 1):
            prof = finite_tube.singlet_profile(cfg, m)
            v = analysis.ode_residual(prof, cfg, 0.0, inner + outer)
            rep.add(f"singlet alpha={alpha} m={m}", v, ODE_TOL)
    Rab = 1e-3
    grid = list(np.linspace(0.2, 5.0, 12))
    scatter = [(0.7, Channel(0.5, 0), 2.0), (0.7, Channel(-0.5, 0), 1.3),
               (1.5, Channel(-0.5, -1), 0.8), (1.5, Channel(-0.5, 1), 3.0),
               (-1.0, Channel(0.5, 2), 1.1), (-1.0, Channel(-0.5, -2), 0.6)]
    for alpha, ch, k in scatter:
        prof = ab.ab_state_profile(alpha, ch, k, Rab)
        v = ab.ab_hamiltonian_residual(prof, alpha, k, grid)
        rep.add(f"AB alpha={alpha} ({ch.sigma:+.1f},{ch.m}) k={k}", v, ODE_TOL)
    for alpha in (0.7, 1.5, -1.0):
        for mode in ab.ab_zero_modes(alpha, Rab):
            v = ab.ab_hamiltonian_residual(mode.profile(), alpha, 0.0, grid)
            rep.add(f"AB zero mode alpha={alpha} ({mode.channel.sigma:+.1f},{mode.channel.m}) "
                    f"{mode.regime.value}", v, ODE_TOL)
    return rep


def check_kappa_shift() -> VerificationReport:
    rep = VerificationReport()
    alpha, kappa, e_max = 1.0, 0.0023, 5.0
    k = Fraction(kappa)
    shifted = spectrum.enumerate_spectrum(alpha, kappa, e_max, -6, 6)
    base = spectrum.enumerate_spectrum(alpha, 0.0, e_max + 1, -6, 6)
    want = sorted((s.channel, s.family, s.n, s.exact_energy0 + k * Fraction(s.channel.sigma))
                  for s in base.states
                  if s.exact_energy0 + k * Fraction(s.channel.sigma) <= Fraction(e_max))
    got = sorted((s.channel, s.family, s.n, s.exact_energy) for s in shifted.states)
    rep.add("kappa table = kappa-free table shifted by kappa*sigma", 0.0, 0.0, passed=want == got,
            detail=f"{len(got)} states")
    e_min = min(s.exact_energy for s in shifted.states)
    lowest = [s for s in shifted.states if s.exact_energy == e_min]
    ok = e_min == -k / 2 and all(s.channel.is_down and s.exact_energy0 == 0 for s in lowest)
    rep.add(f"minimum energy -kappa/2 from {len(lowest)} sigma=-1/2 singlets",
            float(e_min + k / 2), 0.0, passed=ok)
    return rep


SUITES = {
    "landau": check_landau_limit,
    "finite-susy": check_finite_r_susy,
    "small-r": check_small_r_pattern,
    "structure": check_spectrum_structure,
    "indices": check_indices,
    "orthonormality": check_orthonormality,
    "delta": check_delta_convergence,
    "ladder": check_ladder,
    "ode": check_ode_residuals,
    "kappa": check_kappa_shift,
}

_QUICK = ("small-r", "structure", "indices", "ladder", "kappa")


def suite_names() -> list:
    return ["all", "quick"] + list(SUITES)


def run_suite(name: str = "all") -> VerificationReport:
    """Run one named check family, ``quick`` (exact and cheap checks) or ``all``."""
    if name == "all":
        keys = list(SUITES)
    elif name == "quick":
        keys = list(_QUICK)
    elif name in SUITES:
        keys = [name]
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {suite_names()}")
    rep = VerificationReport()
    for key in keys:
        t0 = time.perf_counter()
        sub = SUITES[key]()
        for c in sub.checks:
            c.name = f"{key}: {c.name}"
            rep.checks.append(c)
        rep.add(f"{key}: wall time [s]", time.perf_counter() - t0, math.inf, passed=True)
    return rep
