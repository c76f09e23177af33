"""
Spectrum of the singular flux tube (R -> 0) in a homogeneous field.

Energies are kept exact: a Laguerre state has E = sigma + 1/2 + n, plus
m + alpha for the family whose exterior behaves as r**(m+alpha) (``LagA``).
Singular states sit at E = 0.  The anomaly parameter only adds kappa*sigma.
Exact values are available as :class:`fractions.Fraction` built from the
binary value of alpha, so structural identities can be checked with zero
tolerance.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from . import specfun as sf
from .radial import (Channel, ClosedForm, FluxConfig, GammaUpperRatio,
                     KummerM, Laguerre, RadialProfile)

__all__ = [
    "Family", "QuantizationRule", "EigenState", "SpectrumTable", "EquivClass",
    "admissible_families", "enumerate_spectrum", "state_profile",
    "normalization_constant", "pair_partner", "index_singular",
    "index_singular_closed_form", "classify_alpha", "structural_signature",
    "direct_approach_states", "InadmissibleStateError",
]


class Family(str, Enum):
    LAG_A = "LagA"
    LAG_B = "LagB"
    SING_DOWN_LOG = "SingDownLog"
    SING_DOWN = "SingDown"
    SING_UP_LOG = "SingUpLog"
    SING_UP = "SingUp"

    @property
    def singular(self) -> bool:
        return self not in (Family.LAG_A, Family.LAG_B)

    @property
    def logarithmic(self) -> bool:
        return self in (Family.SING_DOWN_LOG, Family.SING_UP_LOG)


@dataclass(frozen=True)
class QuantizationRule:
    """E = offset + n + (m + alpha if alpha_shift); singular rules have n = 0 only."""

    offset: int
    alpha_shift: bool
    singular: bool

    def describe(self) -> str:
        if self.singular:
            return "E = 0"
        s = f"E = {self.offset} + n" if self.offset else "E = n"
        return s + (" + m + alpha" if self.alpha_shift else "")


class InadmissibleStateError(ValueError):
    pass


def _frac(x: float) -> Fraction:
    return Fraction(x)


def admissible_families(alpha: float, ch: Channel) -> list:
    """Families (with their quantization rules) present in a channel.

    The assignment depends only on sigma, the sign of m and the value of
    m + alpha relative to 0 or +-1.
    """
    nu = _frac(ch.m) + _frac(alpha)
    off = 1 if ch.sigma > 0 else 0
    A = (Family.LAG_A, QuantizationRule(off, True, False))
    B = (Family.LAG_B, QuantizationRule(off, False, False))
    if ch.is_down:
        if ch.m >= 1:
            return [A] if nu > 0 else [B] if nu < 0 else []
        if nu < 1:
            return [B]
        if nu == 1:
            return [(Family.SING_DOWN_LOG, QuantizationRule(0, False, True))]
        return [A, (Family.SING_DOWN, QuantizationRule(0, False, True))]
    if ch.m <= -1:
        return [A] if nu > 0 else [B] if nu < 0 else []
    if nu > -1:
        return [A]
    if nu == -1:
        return [(Family.SING_UP_LOG, QuantizationRule(0, False, True))]
    return [B, (Family.SING_UP, QuantizationRule(0, False, True))]


@dataclass(frozen=True)
class EigenState:
    """One entry of the spectrum.

    ``energy`` is E + kappa*sigma as a float; ``exact_energy`` gives the same
    number as a Fraction.
    """

    family: Family
    channel: Channel
    n: int
    energy: float
    alpha: float = field(default=0.0, compare=False)
    kappa: float = field(default=0.0, compare=False)

    @staticmethod
    def make(family: Family, channel: Channel, n: int, alpha: float,
             kappa: float = 0.0) -> "EigenState":
        family = Family(family)
        e = _exact_e0(family, channel, n, alpha) + _frac(kappa) * _frac(channel.sigma)
        return EigenState(family, channel, int(n), float(e), alpha, kappa)

    @property
    def exact_energy0(self) -> Fraction:
        """Energy at kappa = 0, exact."""
        return _exact_e0(self.family, self.channel, self.n, self.alpha)

    @property
    def exact_energy(self) -> Fraction:
        return self.exact_energy0 + _frac(self.kappa) * _frac(self.channel.sigma)

    @property
    def energy0(self) -> float:
        return float(self.exact_energy0)

    @property
    def nu(self) -> float:
        return self.channel.m + self.alpha

    def as_dict(self) -> dict:
        return {"family": self.family.value, "sigma": self.channel.sigma,
                "m": self.channel.m, "n": self.n, "E": self.energy}


def _exact_e0(family: Family, ch: Channel, n: int, alpha: float) -> Fraction:
    if family.singular:
        return Fraction(0)
    e = Fraction(int(ch.sigma + 0.5) + n)
    if family is Family.LAG_A:
        e += _frac(ch.m) + _frac(alpha)
    return e


def _sort_key(s: EigenState):
    return (s.channel.sigma, s.channel.m, s.exact_energy, s.family.value, s.n)


@dataclass
class SpectrumTable:
    """Enumerated states with E + kappa*sigma <= e_max and m in range."""

    states: list
    alpha: float
    kappa: float
    e_max: float
    m_range: tuple
    vacancies: list
    block_shift: float

    def by_channel(self, ch: Channel) -> list:
        return [s for s in self.states if s.channel == ch]

    def singular_states(self) -> list:
        return [s for s in self.states if s.family.singular]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha, "kappa": self.kappa, "e_max": self.e_max,
            "m_range": list(self.m_range),
            "states": [s.as_dict() for s in self.states],
            "vacancies": [[{"sigma": c.sigma, "m": c.m} for c in pair]
                          for pair in self.vacancies],
            "block_shift": self.block_shift,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumTable":
        alpha, kappa = d["alpha"], d["kappa"]
        states = []
        for s in d["states"]:
            st = EigenState.make(Family(s["family"]), Channel(s["sigma"], s["m"]),
                                 s["n"], alpha, kappa)
            if st.energy != s["E"]:
                raise ValueError(f"energy of {s} does not match its quantum numbers")
            states.append(st)
        vac = [tuple(Channel(c["sigma"], c["m"]) for c in pair) for pair in d["vacancies"]]
        return cls(states, alpha, kappa, d["e_max"], tuple(d["m_range"]), vac,
                   d["block_shift"])

    @classmethod
    def from_json(cls, text: str) -> "SpectrumTable":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """Rows (m+sigma, E, family, sigma, m, n) plus one row per vacancy.

        Vacancy rows carry the family ``vacancy`` and an empty energy.  The
        table parameters are written as leading comment lines.
        """
        buf = io.StringIO()
        buf.write(f"# alpha={self.alpha!r}\n# kappa={self.kappa!r}\n"
                  f"# e_max={self.e_max!r}\n# m_range={self.m_range[0]}..{self.m_range[1]}\n"
                  f"# block_shift={self.block_shift!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m_plus_sigma", "E", "family", "sigma", "m", "n"])
        for s in self.states:
            w.writerow([s.channel.m + s.channel.sigma, repr(s.energy), s.family.value,
                        s.channel.sigma, s.channel.m, s.n])
        for down, up in self.vacancies:
            w.writerow([down.m + down.sigma, "", "vacancy", down.sigma, down.m, ""])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpectrumTable":
        meta = {}
        lines = text.splitlines()
        body = []
        for ln in lines:
            if ln.startswith("#"):
                k, v = ln[1:].strip().split("=", 1)
                meta[k] = v
            else:
                body.append(ln)
        alpha, kappa = float(meta["alpha"]), float(meta["kappa"])
        lo, hi = (int(v) for v in meta["m_range"].split(".."))
        states, vac = [], []
        for row in csv.DictReader(body):
            ch = Channel(float(row["sigma"]), int(row["m"]))
            if row["family"] == "vacancy":
                vac.append((ch, Channel(0.5, ch.m - 1)))
                continue
            st = EigenState.make(Family(row["family"]), ch, int(row["n"]), alpha, kappa)
            if st.energy != float(row["E"]):
                raise ValueError(f"energy of row {row} does not match its quantum numbers")
            states.append(st)
        return cls(states, alpha, kappa, float(meta["e_max"]), (lo, hi), vac,
                   float(meta["block_shift"]))


def enumerate_spectrum(alpha: float, kappa: float, e_max: float, m_min: int,
                       m_max: int) -> SpectrumTable:
    """All states with E + kappa*sigma <= e_max and m_min <= m <= m_max.

    A vacancy is a pair of partner channels (-1/2, m), (+1/2, m-1), both in
    range, neither of which carries a Laguerre family.
    """
    if not e_max > 0:
        raise ValueError("e_max must be positive")
    if m_min > m_max:
        raise ValueError("m_min must not exceed m_max")
    emax = _frac(e_max)
    k = _frac(kappa)
    states = []
    for sigma in (-0.5, 0.5):
        shift = k * _frac(sigma)
        for m in range(m_min, m_max + 1):
            ch = Channel(sigma, m)
            for fam, rule in admissible_families(alpha, ch):
                if rule.singular:
                    if shift <= emax:
                        states.append(EigenState.make(fam, ch, 0, alpha, kappa))
                    continue
                n = 0
                while _exact_e0(fam, ch, n, alpha) + shift <= emax:
                    states.append(EigenState.make(fam, ch, n, alpha, kappa))
                    n += 1
    states.sort(key=_sort_key)
    vacancies = []
    for m in range(m_min + 1, m_max + 1):
        pair = (Channel(-0.5, m), Channel(0.5, m - 1))
        if all(not any(not f.singular for f, _ in admissible_families(alpha, c))
               for c in pair):
            vacancies.append(pair)
    return SpectrumTable(states, alpha, kappa, e_max, (m_min, m_max), vacancies,
                         alpha - math.floor(alpha))


# ---------------------------------------------------------------------------
# eigenfunctions
# ---------------------------------------------------------------------------

def _theta(v: float) -> float:
    return 1.0 if v > 0 else 0.0


def normalization_constant(alpha: float, state: EigenState, r_tube: float) -> float:
    """Prefactor of the normalized eigenfunction (the 1/lambda factor dropped)."""
    fam = state.family
    m = state.channel.m
    nu = m + alpha
    R = r_tube
    if fam is Family.LAG_A:
        return math.sqrt(math.exp(math.lgamma(state.n + 1) - math.lgamma(state.n + nu + 1)) / math.pi)
    if fam is Family.LAG_B:
        return math.sqrt(math.exp(math.lgamma(state.n + 1) - math.lgamma(state.n - nu + 1)) / math.pi)
    if fam.logarithmic:
        return 1.0 / math.sqrt(-math.pi * math.log(R * R))
    if fam is Family.SING_DOWN:
        tail = alpha ** (m - 1) * math.exp(alpha) * sf.gamma_lower(1 - m, alpha).value
        return R ** (nu - 1) / math.sqrt(math.pi * (1.0 / (nu - 1) + tail))
    # SING_UP
    tail = math.exp(-alpha) * (-alpha) ** (-m - 1) * sf.gamma_lower(m + 1, -alpha).value
    return R ** (-nu - 1) / math.sqrt(math.pi * (1.0 / (-nu - 1) + tail))


def _check_admissible(alpha: float, state: EigenState):
    fams = [f for f, _ in admissible_families(alpha, state.channel)]
    if state.family not in fams:
        raise InadmissibleStateError(
            f"{state.family.value} is not admissible in {state.channel} at alpha={alpha}")
    if state.n < 0 or (state.family.singular and state.n != 0):
        raise InadmissibleStateError(f"bad radial quantum number {state.n}")


def state_profile(alpha: float, state: EigenState, r_tube: float, *,
                  check_admissible: bool = True) -> RadialProfile:
    """Normalized eigenfunction regularized at tube radius ``r_tube``.

    The exterior is the R -> 0 eigenfunction; the interior is the regular
    Kummer solution at the same energy, scaled for continuity at the tube
    radius.  For the sigma = +1/2 singular families the interior carries an
    extra factor exp(-R**2/2) relative to the printed form, which makes the
    profile continuous (the factor tends to 1 as R -> 0).

    ``check_admissible=False`` builds Laguerre profiles in channels where the
    family is not part of the spectrum, for probing excluded states.
    """
    if check_admissible:
        _check_admissible(alpha, state)
    cfg = FluxConfig(alpha, r_tube, state.kappa)
    ch = state.channel
    m, am = ch.m, abs(ch.m)
    nu = m + alpha
    R = r_tube
    R2 = R * R
    b = cfg.interior_field
    C = normalization_constant(alpha, state, r_tube)
    fam = state.family
    if not fam.singular:
        p = nu if fam is Family.LAG_A else -nu
        E = state.energy0
        if R2 + alpha == 0:
            raise ValueError("R**2 + alpha = 0")
        a_in = m * _theta(m) + ch.sigma + 0.5 - R2 * E / (R2 + alpha)
        lag = Laguerre(state.n, p, 1.0)
        ext = ClosedForm(C, p, -0.5, lag)
        m_R = sf.kummer_m(a_in, 1 + am, R2 + alpha).value
        coef = C * R ** (p - am) * math.exp(alpha / 2) * lag.value(R) / m_R
        inner = ClosedForm(coef, am, -0.5 * b, KummerM(a_in, 1 + am, b))
    elif fam in (Family.SING_DOWN, Family.SING_DOWN_LOG):
        ext = ClosedForm(C, -nu, -0.5)
        inner = ClosedForm(C * R ** (-nu + m) * math.exp(alpha / 2), -m, -0.5 * b)
    elif fam is Family.SING_UP_LOG:
        # r^-1 e^{r^2/2} Gamma(1, r^2) = r^-1 e^{-r^2/2}
        ext = ClosedForm(C, -1.0, -0.5)
        inner = ClosedForm(C * R ** (-1 - m) * math.exp(-R2 - alpha / 2), m, 0.5 * b)
    else:
        s = -nu
        ext = ClosedForm(C, nu, 0.5, GammaUpperRatio(s, 1.0))
        q_R = sf.gamma_upper_regularized(s, R2).value
        inner = ClosedForm(C * R ** (nu - m) * q_R * math.exp(-alpha / 2), m, 0.5 * b)
    return RadialProfile((inner,), (ext,), ch, cfg)


def pair_partner(state: EigenState) -> Optional[EigenState]:
    """Supersymmetric partner, or None for E = 0 states.

    (-1/2, m) pairs with (+1/2, m-1).  The family is preserved; for LagB the
    radial quantum number drops by one going to the +1/2 side.
    """
    if state.family.singular or state.exact_energy0 == 0:
        return None
    ch = state.channel
    lag_b = state.family is Family.LAG_B
    if ch.is_down:
        return EigenState.make(state.family, Channel(0.5, ch.m - 1),
                               state.n - 1 if lag_b else state.n, state.alpha, state.kappa)
    return EigenState.make(state.family, Channel(-0.5, ch.m + 1),
                           state.n + 1 if lag_b else state.n, state.alpha, state.kappa)


# ---------------------------------------------------------------------------
# index and classification
# ---------------------------------------------------------------------------

def index_singular(alpha: float) -> int:
    """Number of singular sigma = -1/2 states minus sigma = +1/2 ones."""
    a = _frac(alpha)
    reach = int(math.ceil(abs(alpha))) + 2
    down = sum(1 for m in range(-reach, 1) if m + a >= 1)
    up = sum(1 for m in range(0, reach + 1) if m + a <= -1)
    return down - up


def index_singular_closed_form(alpha: float) -> int:
    """floor(alpha) theta(alpha) - floor(-alpha) theta(-alpha)."""
    if alpha > 0:
        return math.floor(alpha)
    if alpha < 0:
        return -math.floor(-alpha)
    return 0


@dataclass(frozen=True)
class EquivClass:
    """Either an open interval (lo, hi) or an isolated nonzero integer."""

    kind: str
    lo: float
    hi: float

    @staticmethod
    def interval(lo: int, hi: int) -> "EquivClass":
        return EquivClass("interval", lo, hi)

    @staticmethod
    def integer(k: int) -> "EquivClass":
        return EquivClass("integer", k, k)

    def __contains__(self, alpha: float) -> bool:
        if self.kind == "integer":
            return alpha == self.lo
        return self.lo < alpha < self.hi

    def __str__(self):
        if self.kind == "integer":
            return f"IsolatedInteger({int(self.lo)})"
        return f"Interval({int(self.lo)},{int(self.hi)})"


def classify_alpha(alpha: float) -> EquivClass:
    if -1 < alpha < 1:
        return EquivClass.interval(-1, 1)
    if alpha == math.floor(alpha):
        return EquivClass.integer(int(alpha))
    lo = math.floor(alpha)
    return EquivClass.interval(lo, lo + 1)


def structural_signature(alpha: float, m_window: int = 6) -> tuple:
    """Quantities that are constant on an equivalence class of alpha.

    Vacancy count, singular counts for each spin, and the family pattern in
    each channel for |m| <= m_window.
    """
    sing_down = sum(1 for m in range(-m_window, 1)
                    for f, _ in admissible_families(alpha, Channel(-0.5, m)) if f.singular)
    sing_up = sum(1 for m in range(0, m_window + 1)
                  for f, _ in admissible_families(alpha, Channel(0.5, m)) if f.singular)
    tab = enumerate_spectrum(alpha, 0.0, 1.0, -m_window, m_window)
    pattern = tuple(
        (s, m, tuple(f.value for f, _ in admissible_families(alpha, Channel(s, m))))
        for s in (-0.5, 0.5) for m in range(-m_window, m_window + 1))
    return (len(tab.vacancies), sing_down, sing_up, pattern)


@dataclass(frozen=True)
class DirectState:
    """State of the naive approach: exterior r^|m+alpha| Laguerre on all r > 0."""

    channel: Channel
    n: int
    exact_energy: Fraction

    @property
    def energy(self) -> float:
        return float(self.exact_energy)


def direct_approach_states(alpha: float, e_max: float, m_min: int, m_max: int,
                           exclude_unpaired: bool = True) -> list:
    """States of the approach that continues the exterior solutions to r = 0.

    E = sigma + 1/2 + (m+alpha) theta(m+alpha) + n for m + alpha != 0.  With
    ``exclude_unpaired`` the states without an admissible superpartner are
    removed: sigma = -1/2 with 0 < m+alpha <= 1 and sigma = +1/2 with
    -1 <= m+alpha < 0.  Below the upper limit the partner would be more
    singular than r**0 at the origin; at |m+alpha| = 1 the partner channel has
    m + alpha = 0, which carries no states.
    """
    a = _frac(alpha)
    emax = _frac(e_max)
    out = []
    for sigma in (-0.5, 0.5):
        for m in range(m_min, m_max + 1):
            nu = m + a
            if nu == 0:
                continue
            if exclude_unpaired:
                if sigma < 0 and 0 < nu <= 1:
                    continue
                if sigma > 0 and -1 <= nu < 0:
                    continue
            base = Fraction(int(sigma + 0.5)) + (nu if nu > 0 else 0)
            n = 0
            while base + n <= emax:
                out.append(DirectState(Channel(sigma, m), n, base + n))
                n += 1
    return out
