"""
Regularized scalar products and numerical checks.

The scalar product of two regularized states is computed at a sequence of
tube radii and extrapolated to R -> 0.  The extrapolation model is built from
the small-r powers of the two states: a state whose exterior behaves as
R**s * r**p near the tube contributes corrections R**(s_a + s_b + p_a + p_b
+ 2 + 2j), plus a term R**(s_a + s_b) multiplying the full exterior integral.
Logarithmically normalized states use a fit in 1/ln R**2 instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from . import specfun as sf
from .radial import (BesselJ, Channel, ClosedForm, FieldMode, FluxConfig,
                     GammaUpperRatio, RadialProfile, apply_raising, evaluate)
from .spectrum import (EigenState, Family, admissible_families, pair_partner,
                       state_profile)

__all__ = [
    "QuadConfig", "LimitSequence", "Extrapolation", "DEFAULT_SEQUENCE",
    "DivergentIntegralError", "ExtrapolationError", "StateFamily",
    "state_family", "inner_product", "extrapolate", "regularized_inner_product",
    "gram", "delta_mass", "susy_pair_check", "hermiticity_bracket",
    "hermiticity_check", "ode_residual", "apply_hamiltonian",
    "basic_form_coefficients", "bump_profile", "Check", "VerificationReport",
]


class DivergentIntegralError(ArithmeticError):
    """The requested integral does not converge."""


class ExtrapolationError(ArithmeticError):
    """The R -> 0 extrapolation is not reliable for the given data."""


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings.

    ``r_max`` truncates the exterior integral; ``None`` picks
    max(8, sqrt(2 E + 40)) from the energy hint of the caller (E = 30 when
    no hint is available).
    """

    r_max: Optional[float] = None
    rel_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.rel_tol < 1e-12:
            raise ValueError("rel_tol must be >= 1e-12")

    def cutoff(self, energy_hint: float = 30.0) -> float:
        if self.r_max is not None:
            return self.r_max
        return max(8.0, math.sqrt(2 * max(energy_hint, 0.0) + 40.0))


class Extrapolation(str, Enum):
    POWER_LAW = "PowerLaw"
    INVERSE_LOG = "InverseLog"
    NONE = "None"


@dataclass(frozen=True)
class LimitSequence:
    r_tube_values: tuple
    extrapolation: Extrapolation = Extrapolation.POWER_LAW

    def __post_init__(self):
        vals = tuple(float(v) for v in self.r_tube_values)
        object.__setattr__(self, "r_tube_values", vals)
        object.__setattr__(self, "extrapolation", Extrapolation(self.extrapolation))
        if len(vals) < 3:
            raise ValueError("a limit sequence needs at least 3 radii")
        for a, b in zip(vals, vals[1:]):
            if not (0 < b <= a / 3 * (1 + 1e-12)):
                raise ValueError("radii must decrease by a factor of at least 3")


DEFAULT_SEQUENCE = LimitSequence((3e-2, 1e-2, 3e-3, 1e-3))
# boundary terms below this are rounding noise of the profile derivatives
HERMITICITY_NOISE = 1e-10


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _value(profile, r: float) -> float:
    if isinstance(profile, RadialProfile):
        return evaluate(profile, r)
    return profile(r)


def _term_decay(t: ClosedForm):
    """(gauss, power, oscillatory) describing the large-r behaviour of a term."""
    f = t.factor
    if isinstance(f, GammaUpperRatio):
        return t.gauss - f.scale, t.power + 2 * f.s - 2, False
    if isinstance(f, BesselJ):
        return t.gauss, t.power - 0.5, True
    return t.gauss, t.power, False


def _tail_converges(pa, pb) -> bool:
    if not (isinstance(pa, RadialProfile) and isinstance(pb, RadialProfile)):
        return True
    for ta in pa.exterior:
        for tb in pb.exterior:
            qa, xa, oa = _term_decay(ta)
            qb, xb, ob = _term_decay(tb)
            q = qa + qb
            if q < 0:
                continue
            if q > 0 or oa or ob or xa + xb + 1 >= -1:
                return False
    return True


def _quad(f, lo, hi, quad: QuadConfig):
    v, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=max(quad.rel_tol, 1e-13),
                          limit=quad.max_subdivisions)
    return v, e


def _radial_integral(fa, fb, R: float, r_max: float, quad: QuadConfig,
                     r_hi: Optional[float] = None) -> tuple:
    """int_0^r_hi fa fb r dr with the integrand split at R (r_hi defaults to r_max)."""
    top = r_max if r_hi is None else r_hi
    total, err = 0.0, 0.0
    # interior, in the scaled variable t = r / R
    a_top = min(R, top)
    g = lambda t: fa(t * a_top) * fb(t * a_top) * t
    v, e = _quad(g, 0.0, 1.0, quad)
    total += v * a_top * a_top
    err += e * a_top * a_top
    if top <= R:
        return total, err
    # exterior in u = r^2 on geometric panels from R^2 up to 1, then uniform
    h = lambda u: 0.5 * fa(math.sqrt(u)) * fb(math.sqrt(u))
    u_lo = R * R
    u_top = top * top
    edges = [u_lo]
    u = u_lo
    while u * 8 < min(1.0, u_top):
        u *= 8
        edges.append(u)
    for x in (1.0, 4.0, 16.0, 36.0, 64.0, 100.0, 196.0, 400.0):
        if edges[-1] < x < u_top:
            edges.append(x)
    edges.append(u_top)
    for lo, hi in zip(edges, edges[1:]):
        v, e = _quad(h, lo, hi, quad)
        total += v
        err += e
    return total, err


def inner_product(a, b, quad: QuadConfig = QuadConfig(), energy_hint: float = 30.0,
                  with_error: bool = False):
    """2 pi int_0^inf a(r) b(r) r dr for profiles on the same channel.

    Profiles on different channels are orthogonal by the angular and spin
    integration, and exactly 0.0 is returned without quadrature.

    Raises
    ------
    DivergentIntegralError
        When the exterior integrand does not decay (pure Aharonov-Bohm modes
        with |m + alpha| <= 1 and scattering states).
    """
    if a.channel != b.channel:
        return (0.0, 0.0) if with_error else 0.0
    if a.config.r_tube != b.config.r_tube:
        raise ValueError("profiles must share the tube radius")
    R = a.config.r_tube
    if not _tail_converges(a, b):
        raise DivergentIntegralError("exterior integrand does not decay")
    fa = lambda r: _value(a, r)
    fb = lambda r: _value(b, r)
    if a.config.field_mode is FieldMode.TUBE_ONLY:
        v, e = _radial_integral(fa, fb, R, max(2.0, 4 * R), quad)
        tail, te = integrate.quad(lambda r: fa(r) * fb(r) * r, max(2.0, 4 * R), math.inf,
                                  epsabs=0.0, epsrel=1e-12, limit=quad.max_subdivisions)
        v, e = v + tail, e + te
    else:
        v, e = _radial_integral(fa, fb, R, quad.cutoff(energy_hint), quad)
    v, e = 2 * math.pi * v, 2 * math.pi * e
    return (v, e) if with_error else v


# ---------------------------------------------------------------------------
# families of regularized states and the R -> 0 limit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateFamily:
    """A constructor R -> profile together with its small-R scaling data.

    ``norm_power`` is s with the normalization behaving as R**s, and
    ``exterior_powers`` are the leading small-r powers p of the exterior
    (each followed by a series in r**2).  ``logarithmic`` marks 1/ln R**2
    normalization.
    """

    build: Callable
    norm_power: float = 0.0
    exterior_powers: tuple = (0.0,)
    logarithmic: bool = False
    energy: float = 0.0
    label: str = ""

    def __call__(self, R: float):
        return self.build(R)


def state_family(alpha: float, state: EigenState) -> StateFamily:
    nu = state.channel.m + alpha
    fam = state.family
    if fam is Family.LAG_A:
        s, ps = 0.0, (nu,)
    elif fam is Family.LAG_B:
        s, ps = 0.0, (-nu,)
    elif fam is Family.SING_DOWN:
        s, ps = nu - 1, (-nu,)
    elif fam is Family.SING_UP:
        s, ps = -nu - 1, (nu, -nu)
    else:
        s, ps = 0.0, (-1.0,)
    label = f"{fam.value}(s={state.channel.sigma:+.1f},m={state.channel.m},n={state.n})"
    return StateFamily(lambda R: state_profile(alpha, state, R), s, ps,
                       fam.logarithmic, state.energy0, label)


def _power_exponents(fa: StateFamily, fb: StateFamily, count: int) -> list:
    s = fa.norm_power + fb.norm_power
    cand = [s]
    for pa in fa.exterior_powers:
        for pb in fb.exterior_powers:
            for j in range(count + 1):
                cand.append(s + pa + pb + 2 + 2 * j)
    cand = sorted(set(round(c, 12) for c in cand))
    basis = []
    for c in cand:
        if abs(c) < 1e-12:
            continue
        if c < 0:
            raise ExtrapolationError(f"product diverges as R**{c}")
        basis.append(("pow", c))
    # coinciding exponents produce R^e ln R terms
    out = []
    for kind, c in basis:
        if any(abs(c - d) < 1e-9 for _, d in out):
            out.append(("log", c))
        else:
            out.append((kind, c))
    out.sort(key=lambda t: (t[1], t[0] == "log"))
    return out[:count]


def extrapolate(values: Sequence[float], radii: Sequence[float], method: Extrapolation,
                exponents: Optional[Sequence] = None) -> float:
    """Limit R -> 0 of a sequence of values.

    PowerLaw solves c0 + sum_k c_k R**e_k for the given exponents (entries
    may be plain numbers or ("pow"|"log", e) pairs; a log entry stands for
    R**e ln R).  Without exponents a polynomial in R is used.  InverseLog
    fits c0 + c1/ln R**2 + c2 R**2/ln R**2.
    """
    v = np.asarray(values, dtype=float)
    R = np.asarray(radii, dtype=float)
    method = Extrapolation(method)
    if method is Extrapolation.NONE:
        return float(v[-1])
    if method is Extrapolation.INVERSE_LOG:
        L = np.log(R * R)
        cols = [np.ones_like(R), 1 / L, R * R / L][:len(R)]
        A = np.column_stack(cols)
        c, *_ = np.linalg.lstsq(A, v, rcond=None)
        return float(c[0])
    if exponents is None:
        exponents = list(range(1, len(R)))
    return float(_power_fit(v, R, exponents)[0])


def _power_fit(v: np.ndarray, R: np.ndarray, exponents) -> np.ndarray:
    """Coefficients of c0 + sum_k c_k R**e_k (see :func:`extrapolate`)."""
    cols = [np.ones_like(R)]
    for e in list(exponents)[:len(R) - 1]:
        kind, p = e if isinstance(e, tuple) else ("pow", e)
        col = R ** p
        if kind == "log":
            col = col * np.log(R)
        cols.append(col)
    A = np.column_stack(cols)
    # column scaling keeps the small system well conditioned
    scale = np.max(np.abs(A), axis=0)
    c, *_ = np.linalg.lstsq(A / scale, v, rcond=None)
    return c / scale


def regularized_inner_product(fa, fb, seq: LimitSequence = DEFAULT_SEQUENCE,
                              quad: QuadConfig = QuadConfig(), return_values: bool = False):
    """Limit R -> 0 of the scalar product of two families of profiles.

    ``fa`` and ``fb`` map a tube radius to a profile.  When they are
    :class:`StateFamily` objects the PowerLaw exponents follow from their
    scaling data; otherwise a polynomial in R is used.  An InverseLog
    sequence, or any logarithmic family, selects the 1/ln R**2 fit.

    Raises
    ------
    ExtrapolationError
        If the sequence values are not monotone where the model predicts a
        single dominant correction, or the model diverges.
    """
    radii = seq.r_tube_values
    hint = max(getattr(fa, "energy", 0.0), getattr(fb, "energy", 0.0))
    vals = []
    for R in radii:
        pa, pb = fa(R), fb(R)
        if pa.channel != pb.channel:
            return (0.0, [0.0] * len(radii)) if return_values else 0.0
        vals.append(inner_product(pa, pb, quad, energy_hint=hint))
    method = seq.extrapolation
    if getattr(fa, "logarithmic", False) or getattr(fb, "logarithmic", False):
        method = Extrapolation.INVERSE_LOG
    exps = None
    if method is Extrapolation.POWER_LAW and isinstance(fa, StateFamily) and isinstance(fb, StateFamily):
        exps = _power_exponents(fa, fb, len(radii) - 1)
    if method is Extrapolation.INVERSE_LOG:
        d = np.diff(vals)
        if len(d) > 1 and not (np.all(d >= -1e-12) or np.all(d <= 1e-12)):
            raise ExtrapolationError("log-family sequence is not monotone")
    limit = extrapolate(vals, radii, method, exps)
    return (limit, vals) if return_values else limit


def gram(states: Sequence[EigenState], alpha: float, seq: LimitSequence = DEFAULT_SEQUENCE,
         quad: QuadConfig = QuadConfig()) -> np.ndarray:
    """Matrix of regularized scalar products; blocks across channels are exactly 0."""
    fams = [state_family(alpha, s) for s in states]
    n = len(states)
    G = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            if states[i].channel != states[j].channel:
                continue
            G[i, j] = G[j, i] = regularized_inner_product(fams[i], fams[j], seq, quad)
    return G


def delta_mass(state: EigenState, alpha: float, eps: float, r_tube: float,
               quad: QuadConfig = QuadConfig()) -> float:
    """Probability inside the disc r < eps at tube radius r_tube."""
    p = state_profile(alpha, state, r_tube)
    f = lambda r: evaluate(p, r)
    v, _ = _radial_integral(f, f, r_tube, quad.cutoff(state.energy0), quad, r_hi=eps)
    return 2 * math.pi * v


# ---------------------------------------------------------------------------
# ladder identities
# ---------------------------------------------------------------------------

class NoPartnerError(ValueError):
    pass


def susy_pair_check(alpha: float, state: EigenState, r_tube: float,
                    grid: Sequence[float], sign: Optional[float] = None) -> float:
    """max |Q psi - s sqrt(E) psi_partner| over exterior grid points.

    s is +1 for LagA and -1 for LagB unless ``sign`` overrides it.
    """
    if not state.channel.is_down:
        raise ValueError("susy_pair_check takes sigma = -1/2 states")
    partner = pair_partner(state)
    if partner is None:
        raise NoPartnerError("E = 0 states have no superpartner")
    s = sign if sign is not None else (1.0 if state.family is Family.LAG_A else -1.0)
    E = state.energy0
    img = apply_raising(state_profile(alpha, state, r_tube))
    pp = state_profile(alpha, partner, r_tube)
    worst = 0.0
    for r in grid:
        if r < r_tube:
            raise ValueError("grid points must lie in the exterior")
        worst = max(worst, abs(evaluate(img, r) - s * math.sqrt(E) * evaluate(pp, r)))
    return worst


def hermiticity_bracket(prof_e: RadialProfile, prof_e2: RadialProfile) -> float:
    """psi_E'(R) R [d psi_E^in/dr - d psi_E^out/dr] at r = R."""
    from .radial import derivative
    R = prof_e.config.r_tube
    jump = derivative(prof_e, R, side="in") - derivative(prof_e, R, side="out")
    return evaluate(prof_e2, R) * R * jump


def _candidate_family(alpha: float, ch: Channel, E: float, family: Optional[Family]):
    """Family of regularized profiles for energy E in channel ch.

    With ``family`` given, the Laguerre profile of that family is built even
    when it is not admissible (used to probe forbidden pairings).
    """
    E = float(E)
    fams = [family] if family is not None else [f for f, _ in admissible_families(alpha, ch)]
    for fam in fams:
        if fam.singular:
            if E == 0:
                st = EigenState.make(fam, ch, 0, alpha)
                return state_family(alpha, st)
            continue
        base = EigenState.make(fam, ch, 0, alpha).energy0
        n = round(E - base)
        if n >= 0 and abs(base + n - E) < 1e-9:
            st = EigenState.make(fam, ch, n, alpha)
            if family is None:
                return state_family(alpha, st)
            return _unchecked_family(alpha, st)
    raise ValueError(f"no state with E={E} in {ch} at alpha={alpha}")


def _unchecked_family(alpha: float, st: EigenState) -> StateFamily:
    nu = st.channel.m + alpha
    p = nu if st.family is Family.LAG_A else -nu
    return StateFamily(lambda R: state_profile(alpha, st, R, check_admissible=False),
                       0.0, (p,), False, st.energy0, "candidate")


def hermiticity_check(cfg: FluxConfig, ch: Channel, E: float, E2: float,
                      seq: LimitSequence = DEFAULT_SEQUENCE,
                      families: tuple = (None, None), return_values: bool = False):
    """Extrapolated magnitude of the boundary term that decides hermiticity.

    ``families`` may force the family used for E and E2 (for probing
    pairings that the spectrum excludes).
    """
    fa = _candidate_family(cfg.alpha, ch, E, families[0])
    fb = _candidate_family(cfg.alpha, ch, E2, families[1])
    vals = [hermiticity_bracket(fa(R), fb(R)) for R in seq.r_tube_values]
    if fa.logarithmic or fb.logarithmic:
        lim = extrapolate(vals, seq.r_tube_values, Extrapolation.INVERSE_LOG)
    else:
        s = fa.norm_power + fb.norm_power
        cand = sorted(set(round(s + pa + pb + 2 * j, 12)
                          for pa in fa.exterior_powers for pb in fb.exterior_powers
                          for j in range(len(vals))))
        exps = [c for c in cand if abs(c) > 1e-12][:len(vals) - 1]
        R = np.asarray(seq.r_tube_values)
        v = np.asarray(vals)
        coef = _power_fit(v, R, exps)
        lim = coef[0]
        # a negative power with a visible coefficient means the term diverges
        floor = HERMITICITY_NOISE * max(1.0, float(np.max(np.abs(v))))
        for c, e in zip(coef[1:], exps):
            if e < 0 and abs(c * R[-1] ** e) > floor:
                lim = math.inf
    lim = abs(lim)
    return (lim, vals) if return_values else lim


# ---------------------------------------------------------------------------
# differential-equation residuals
# ---------------------------------------------------------------------------

def _potential(cfg: FluxConfig, ch: Channel, r: float, interior: bool) -> tuple:
    """(effective angular index, potential) of the radial operator at r."""
    a = cfg.alpha
    s, m = ch.sigma, ch.m
    landau = cfg.field_mode is FieldMode.LANDAU_PLUS_TUBE
    if interior:
        b = cfg.interior_field
        return m, b * b * r * r / 4 + b * (m / 2 + s)
    nu = m + a
    if landau:
        return nu, r * r / 4 + nu / 2 + s
    return nu, 0.0


def apply_hamiltonian(profile, cfg: FluxConfig, r: float, h: Optional[float] = None) -> float:
    """(H psi)(r) with five-point central differences in r.

    The stencil stays inside the region containing r.
    """
    R = cfg.r_tube
    interior = r < R
    if h is None:
        gap = abs(r - R)
        h = min(1e-3 * max(r, 1e-300) if interior else 1e-3 * max(1.0, r), gap / 10, r / 10)
    f = lambda x: _value(profile, x)
    f0 = f(r)
    fp1, fm1, fp2, fm2 = f(r + h), f(r - h), f(r + 2 * h), f(r - 2 * h)
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    ang, pot = _potential(cfg, profile.channel, r, interior)
    hpsi = -0.25 * (d2 + d1 / r - ang * ang / (r * r) * f0) + pot * f0
    return hpsi + cfg.kappa * profile.channel.sigma * f0


def ode_residual(profile, cfg: FluxConfig, E: float, grid: Sequence[float]) -> float:
    """max |H psi - E psi| / max |psi| over the grid.

    Grid points must be at least five stencil widths from the tube radius;
    the step is chosen so that this holds.
    """
    vals = [abs(apply_hamiltonian(profile, cfg, r) - E * _value(profile, r)) for r in grid]
    scale = max(abs(_value(profile, r)) for r in grid)
    return max(vals) / scale if scale > 0 else max(vals)


# ---------------------------------------------------------------------------
# basic form and null vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _FunctionProfile:
    func: Callable
    channel: Channel
    config: FluxConfig

    def __call__(self, r):
        return self.func(r)


def bump_profile(base: RadialProfile, height: float, width: float,
                 center: Optional[float] = None) -> _FunctionProfile:
    """base + a smooth bump of the given height supported in |r - center| < width."""
    c = base.config.r_tube if center is None else center

    def f(r):
        x = (r - c) / width
        bump = height * math.exp(1 - 1 / (1 - x * x)) if abs(x) < 1 else 0.0
        return evaluate(base, r) + bump

    return _FunctionProfile(f, base.channel, base.config)


def function_profile(func: Callable, channel: Channel, config: FluxConfig) -> _FunctionProfile:
    """Wrap a plain function of r as a profile on a channel."""
    return _FunctionProfile(func, channel, config)


def basic_form_coefficients(target: Callable, states: Sequence[EigenState], alpha: float,
                            seq: LimitSequence = DEFAULT_SEQUENCE,
                            quad: QuadConfig = QuadConfig()) -> list:
    """Coefficients <state|target> of a family ``target(R)`` of profiles."""
    out = []
    for st in states:
        fam = state_family(alpha, st)
        out.append(regularized_inner_product(fam, target, seq, quad))
    return out


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""
    # "upper" when passed means |value| <= tolerance, "custom" otherwise
    bound: str = "upper"


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name: str, value: float, tolerance: float, passed: Optional[bool] = None,
            detail: str = "") -> Check:
        ok = bool(abs(value) <= tolerance) if passed is None else bool(passed)
        c = Check(name, float(value), float(tolerance), ok, detail,
                  "upper" if passed is None else "custom")
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        def clean(d):
            for key in ("value", "tolerance"):
                if not math.isfinite(d[key]):
                    d[key] = str(d[key])
            return d
        return {"passed": self.passed, "checks": [clean(asdict(c)) for c in self.checks]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)
