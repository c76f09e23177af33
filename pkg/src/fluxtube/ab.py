"""
Pure Aharonov-Bohm limit: the flux tube without the homogeneous field.

Outside the tube the radial equation is Bessel's equation of order
|m + alpha| (scattering states, energy k**2/4) or Laplace's equation (k = 0).
Inside, the tube field alpha/R**2 gives a Kummer equation again.  Only
continuity at R is imposed, and the exterior solution is chosen with the
same rule that selects the Laguerre family in the field problem, so that
both systems live on the same Hilbert space.

The k = 0 solutions form a finite set.  They come in three kinds according
to |m + alpha|: normalizable (> 1), normalizable only up to a logarithm
(= 1) and not normalizable (between 1/2 and 1).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from . import specfun as sf
from .analysis import apply_hamiltonian
from .radial import (BesselJ, Channel, ClosedForm, FieldMode, FluxConfig,
                     KummerM, RadialProfile)
from .spectrum import (EigenState, Family, admissible_families,
                       index_singular, normalization_constant)

__all__ = [
    "BesselBranch", "ZeroModeRegime", "AbScatterState", "AbZeroMode",
    "NoBranchError", "ab_branch", "ab_state_profile", "ab_zero_modes",
    "zero_mode_profile", "vanishing_field_profile", "index_ab",
    "index_ab_closed_form", "ab_hamiltonian_residual", "zero_modes_to_json",
    "index_curve", "index_curve_csv",
]


class BesselBranch(str, Enum):
    PLUS_ORDER = "PlusOrder"    # J_{m+alpha}
    MINUS_ORDER = "MinusOrder"  # J_{-(m+alpha)}


class ZeroModeRegime(str, Enum):
    NORMALIZABLE = "Normalizable"
    LOG_NORMALIZED = "LogNormalized"
    NON_NORMALIZABLE = "NonNormalizable"


class NoBranchError(ValueError):
    """The channel carries no scattering states (a vacancy or log channel)."""


def _tube_config(alpha: float, r_tube: float) -> FluxConfig:
    return FluxConfig(alpha, r_tube, 0.0, FieldMode.TUBE_ONLY)


def ab_branch(alpha: float, ch: Channel) -> BesselBranch:
    """Bessel order used in a channel, mirroring the Laguerre family there."""
    for fam, _ in admissible_families(alpha, ch):
        if fam is Family.LAG_A:
            return BesselBranch.PLUS_ORDER
        if fam is Family.LAG_B:
            return BesselBranch.MINUS_ORDER
    raise NoBranchError(f"no scattering branch in {ch} at alpha={alpha}")


@dataclass(frozen=True)
class AbScatterState:
    channel: Channel
    k: float
    branch: BesselBranch

    @staticmethod
    def make(alpha: float, ch: Channel, k: float) -> "AbScatterState":
        if not k > 0:
            raise ValueError("k must be positive")
        return AbScatterState(ch, float(k), ab_branch(alpha, ch))

    @property
    def energy(self) -> float:
        return self.k * self.k / 4


def ab_state_profile(alpha: float, ch: Channel, k: float, r_tube: float) -> RadialProfile:
    """Scattering state of energy k**2/4, continuous at the tube radius.

    The exterior is J_{+-(m+alpha)}(k r) with unit amplitude.  For alpha = 0
    the interior has no field and the free Bessel function is returned on
    both sides.

    Raises
    ------
    NoBranchError
        If the channel has no scattering branch.
    specfun.PoleError
        If the interior Kummer function vanishes at R.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    cfg = _tube_config(alpha, r_tube)
    order = ch.nu(alpha)
    if ab_branch(alpha, ch) is BesselBranch.MINUS_ORDER:
        order = -order
    ext = ClosedForm(1.0, 0.0, 0.0, BesselJ(order, k))
    if alpha == 0:
        return RadialProfile((ext,), (ext,), ch, cfg)
    R = r_tube
    am = abs(ch.m)
    beta = cfg.interior_field
    a = ch.m * (ch.m > 0) + ch.sigma + 0.5 - R * R * k * k / (4 * alpha)
    m_R = sf.kummer_m(a, 1 + am, alpha).value
    if m_R == 0:
        raise sf.PoleError(f"interior Kummer function vanishes at R for k={k}")
    coef = R ** (-am) * math.exp(alpha / 2) * sf.bessel_j(order, k * R).value / m_R
    inner = ClosedForm(coef, am, -0.5 * beta, KummerM(a, 1 + am, beta))
    return RadialProfile((inner,), (ext,), ch, cfg)


# ---------------------------------------------------------------------------
# k = 0 modes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbZeroMode:
    """A k = 0 solution with its normalization factor ``nu``."""

    channel: Channel
    regime: ZeroModeRegime
    nu: float
    alpha: float
    r_tube: float

    def profile(self) -> RadialProfile:
        return zero_mode_profile(self)

    def as_dict(self) -> dict:
        return {"sigma": self.channel.sigma, "m": self.channel.m,
                "m_plus_alpha": self.channel.m + self.alpha,
                "regime": self.regime.value, "nu": self.nu}


def _regime(mu: Fraction) -> ZeroModeRegime:
    # mu = |m + alpha| > 1/2
    if mu > 1:
        return ZeroModeRegime.NORMALIZABLE
    if mu == 1:
        return ZeroModeRegime.LOG_NORMALIZED
    return ZeroModeRegime.NON_NORMALIZABLE


def _mode_channels(alpha: float) -> list:
    a = Fraction(alpha)
    half = Fraction(1, 2)
    reach = int(math.ceil(abs(alpha))) + 1
    out = [Channel(-0.5, m) for m in range(-reach, 1) if m + a > half]
    out += [Channel(0.5, m) for m in range(0, reach + 1) if m + a < -half]
    return out


def ab_zero_modes(alpha: float, r_tube: float) -> list:
    """All k = 0 modes: sigma = -1/2 with m <= 0, m + alpha > 1/2, and the
    mirror image sigma = +1/2 with m >= 0, m + alpha < -1/2.

    Raises
    ------
    ValueError
        If a log-normalized mode is present and r_tube >= 1, where its
        normalization factor is undefined.
    """
    if not r_tube > 0:
        raise ValueError("r_tube must be positive")
    modes = []
    for ch in _mode_channels(alpha):
        mu = abs(ch.m + Fraction(alpha))
        regime = _regime(mu)
        if regime is ZeroModeRegime.NORMALIZABLE:
            fam = Family.SING_DOWN if ch.is_down else Family.SING_UP
            st = EigenState.make(fam, ch, 0, alpha)
            nu = normalization_constant(alpha, st, r_tube)
        elif regime is ZeroModeRegime.LOG_NORMALIZED:
            if r_tube >= 1:
                raise ValueError("log-normalized modes need r_tube < 1")
            nu = 1.0 / math.sqrt(-math.pi * math.log(r_tube * r_tube))
        else:
            nu = 1.0
        modes.append(AbZeroMode(ch, regime, nu, float(alpha), float(r_tube)))
    return modes


def zero_mode_profile(mode: AbZeroMode) -> RadialProfile:
    """r**-(m+alpha) outside for sigma = -1/2 (r**(m+alpha) for +1/2), joined
    continuously to the Gaussian interior solution."""
    alpha, R = mode.alpha, mode.r_tube
    cfg = _tube_config(alpha, R)
    ch = mode.channel
    s = -1.0 if ch.is_down else 1.0
    beta = cfg.interior_field
    ext = ClosedForm(mode.nu, s * (ch.m + alpha), 0.0)
    coef = mode.nu * R ** (s * alpha) * math.exp(-s * alpha / 2)
    inner = ClosedForm(coef, s * ch.m, 0.5 * s * beta)
    return RadialProfile((inner,), (ext,), ch, cfg)


def vanishing_field_profile(alpha: float, mode: AbZeroMode, lam: float):
    """The normalized singular state of the field problem in physical units
    with magnetic length ``lam``, as a function of r.

    As lam grows this tends to the profile of a normalizable zero mode with
    the same physical tube radius.
    """
    from .spectrum import state_profile

    if mode.regime is not ZeroModeRegime.NORMALIZABLE:
        raise ValueError("only normalizable modes are limits of field states")
    fam = Family.SING_DOWN if mode.channel.is_down else Family.SING_UP
    st = EigenState.make(fam, mode.channel, 0, alpha)
    prof = state_profile(alpha, st, mode.r_tube / lam)
    return lambda r: prof(r / lam) / lam


def index_ab(alpha: float) -> int:
    """Number of sigma = -1/2 zero modes minus sigma = +1/2 ones."""
    chans = _mode_channels(alpha)
    return sum(1 if c.is_down else -1 for c in chans)


def index_ab_closed_form(alpha: float) -> int:
    """n on (n-1/2, n+1/2] for alpha > 1/2, on [n-1/2, n+1/2) for alpha < -1/2."""
    if alpha > 0.5:
        return math.ceil(alpha - 0.5)
    if alpha < -0.5:
        return math.floor(alpha + 0.5)
    return 0


def ab_hamiltonian_residual(profile, alpha: float, k: float, grid: Sequence[float]) -> float:
    """max |H psi - (k**2/4) psi| / max(1, |psi|) over exterior grid points."""
    cfg = _tube_config(alpha, profile.config.r_tube)
    e = k * k / 4
    worst = 0.0
    for r in grid:
        psi = profile(r)
        res = abs(apply_hamiltonian(profile, cfg, r) - e * psi) / max(1.0, abs(psi))
        worst = max(worst, res)
    return worst


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def zero_modes_to_json(modes: Iterable[AbZeroMode], **kw) -> str:
    modes = list(modes)
    head = {"alpha": modes[0].alpha, "r_tube": modes[0].r_tube} if modes else {}
    return json.dumps({**head, "modes": [m.as_dict() for m in modes]}, **kw)


def index_curve(alphas: Iterable[float]) -> list:
    """Rows (alpha, I_AB, I_s)."""
    return [(float(a), index_ab(a), index_singular(a)) for a in alphas]


def index_curve_csv(alphas: Iterable[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "I_AB", "I_s"])
    for a, iab, isg in index_curve(alphas):
        w.writerow([repr(a), iab, isg])
    return buf.getvalue()
