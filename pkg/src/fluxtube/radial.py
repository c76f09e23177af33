"""
Piecewise closed-form radial wavefunctions.

A radial profile is split at the tube radius into an interior and an
exterior piece.  Each piece is a short sum of :class:`ClosedForm` terms

    coefficient * r**power * exp(gauss * r**2) * factor(r)

where ``factor`` is one of the special factors defined below.  The set of
such sums is closed under d/dr and under multiplication by powers of r, so
derivatives and the ladder operators are applied symbolically and every
result stays exactly evaluable.

Lengths are in magnetic lengths and energies in units of hbar*omega for the
``LandauPlusTube`` mode.  In the ``TubeOnly`` (pure Aharonov-Bohm) mode the
length unit is arbitrary and energies are k**2/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Union

from . import specfun as sf

__all__ = [
    "FieldMode", "FluxConfig", "Channel", "One", "Laguerre", "KummerM",
    "TricomiU", "BesselJ", "GammaUpperRatio", "ClosedForm", "RadialProfile",
    "SpinPreconditionError", "piece_value", "piece_derivative",
    "differentiate_piece", "evaluate", "derivative", "gauge_profile",
    "apply_raising", "apply_lowering",
]


class FieldMode(str, Enum):
    LANDAU_PLUS_TUBE = "LandauPlusTube"
    TUBE_ONLY = "TubeOnly"


@dataclass(frozen=True)
class FluxConfig:
    """System parameters.

    Parameters
    ----------
    alpha : float
        Flux of the tube in units of the flux quantum.
    r_tube : float
        Tube radius, > 0.
    kappa : float
        Anomaly parameter, g = 2(1 + kappa).  Must be 0 in ``TubeOnly`` mode.
    field_mode : FieldMode
        Homogeneous field plus tube, or tube only.
    """

    alpha: float
    r_tube: float
    kappa: float = 0.0
    field_mode: FieldMode = FieldMode.LANDAU_PLUS_TUBE

    def __post_init__(self):
        if not (self.r_tube > 0 and math.isfinite(self.r_tube)):
            raise ValueError("r_tube must be a finite positive number")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        mode = FieldMode(self.field_mode)
        object.__setattr__(self, "field_mode", mode)
        if mode is FieldMode.TUBE_ONLY and self.kappa != 0:
            raise ValueError("TubeOnly mode is defined for kappa = 0 only")

    @property
    def interior_field(self) -> float:
        """Field factor inside the tube relative to the exterior unit."""
        base = 1.0 if self.field_mode is FieldMode.LANDAU_PLUS_TUBE else 0.0
        return base + self.alpha / self.r_tube ** 2


@dataclass(frozen=True, order=True)
class Channel:
    """Spin and angular momentum sector (sigma, m)."""

    sigma: float
    m: int

    def __post_init__(self):
        if self.sigma not in (-0.5, 0.5):
            raise ValueError(f"sigma must be -1/2 or +1/2, got {self.sigma}")
        if int(self.m) != self.m:
            raise ValueError(f"m must be an integer, got {self.m}")
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "m", int(self.m))

    def nu(self, alpha: float) -> float:
        return self.m + alpha

    @property
    def is_down(self) -> bool:
        return self.sigma < 0


# ---------------------------------------------------------------------------
# special factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    def value(self, r: float) -> float:
        return 1.0

    def derivative_terms(self):
        # list of (coefficient, extra_power, extra_gauss, factor)
        return []


@dataclass(frozen=True)
class Laguerre:
    """L_n^{(a)}(scale * r**2)."""

    n: int
    a: float
    scale: float = 1.0

    def value(self, r: float) -> float:
        return sf.laguerre_assoc(self.n, self.a, self.scale * r * r).value

    def derivative_terms(self):
        if self.n == 0:
            return []
        return [(-2.0 * self.scale, 1, 0.0, Laguerre(self.n - 1, self.a + 1, self.scale))]


@dataclass(frozen=True)
class KummerM:
    """M(a, b, scale * r**2)."""

    a: float
    b: float
    scale: float = 1.0

    def value(self, r: float) -> float:
        return sf.kummer_m(self.a, self.b, self.scale * r * r).value

    def derivative_terms(self):
        if self.a == 0 or self.scale == 0:
            return []
        return [(2.0 * self.scale * self.a / self.b, 1, 0.0,
                 KummerM(self.a + 1, self.b + 1, self.scale))]


@dataclass(frozen=True)
class TricomiU:
    """U(a, b, scale * r**2), scale > 0."""

    a: float
    b: float
    scale: float = 1.0

    def value(self, r: float) -> float:
        return sf.tricomi_u(self.a, self.b, self.scale * r * r).value

    def derivative_terms(self):
        if self.a == 0:
            return []
        return [(-2.0 * self.scale * self.a, 1, 0.0,
                 TricomiU(self.a + 1, self.b + 1, self.scale))]


@dataclass(frozen=True)
class BesselJ:
    """J_nu(k * r)."""

    nu: float
    k: float

    def value(self, r: float) -> float:
        return sf.bessel_j(self.nu, self.k * r).value

    def derivative_terms(self):
        h = 0.5 * self.k
        return [(h, 0, 0.0, BesselJ(self.nu - 1, self.k)),
                (-h, 0, 0.0, BesselJ(self.nu + 1, self.k))]


@dataclass(frozen=True)
class GammaUpperRatio:
    """Gamma(s, scale * r**2) / Gamma(s), s > 0, scale > 0."""

    s: float
    scale: float = 1.0

    def value(self, r: float) -> float:
        return sf.gamma_upper_regularized(self.s, self.scale * r * r).value

    def derivative_terms(self):
        c = -2.0 * self.scale ** self.s / sf.gamma_fn(self.s).value
        return [(c, 2 * self.s - 1, -self.scale, One())]


SpecialFactor = Union[One, Laguerre, KummerM, TricomiU, BesselJ, GammaUpperRatio]


@dataclass(frozen=True)
class ClosedForm:
    """coefficient * r**power * exp(gauss * r**2) * factor(r)."""

    coefficient: float
    power: float = 0.0
    gauss: float = 0.0
    factor: SpecialFactor = field(default_factory=One)

    def value(self, r: float) -> float:
        if self.coefficient == 0:
            return 0.0
        s = self.factor.value(r)
        if s == 0:
            return 0.0
        if r == 0:
            if self.power > 0:
                return 0.0
            if self.power < 0:
                return math.copysign(math.inf, self.coefficient * s)
            return self.coefficient * s
        return self.coefficient * s * math.exp(self.power * math.log(r) + self.gauss * r * r)

    def derivative(self) -> tuple["ClosedForm", ...]:
        c, p, q, f = self.coefficient, self.power, self.gauss, self.factor
        out = []
        if p != 0:
            out.append(ClosedForm(c * p, p - 1, q, f))
        if q != 0:
            out.append(ClosedForm(2 * q * c, p + 1, q, f))
        for dc, dp, dq, g in f.derivative_terms():
            out.append(ClosedForm(c * dc, p + dp, q + dq, g))
        return _simplify(out)

    def times_power(self, c: float, k: float) -> "ClosedForm":
        """(c * r**k) * self."""
        return replace(self, coefficient=self.coefficient * c, power=self.power + k)


Piece = tuple  # tuple[ClosedForm, ...]


def _simplify(terms: Sequence[ClosedForm]) -> Piece:
    merged: dict = {}
    for t in terms:
        if t.coefficient == 0:
            continue
        key = (t.power, t.gauss, t.factor)
        merged[key] = merged.get(key, 0.0) + t.coefficient
    return tuple(ClosedForm(c, p, q, f) for (p, q, f), c in merged.items() if c != 0)


def piece_value(piece: Piece, r: float) -> float:
    return math.fsum(t.value(r) for t in piece)


def differentiate_piece(piece: Piece) -> Piece:
    out = []
    for t in piece:
        out.extend(t.derivative())
    return _simplify(out)


def piece_derivative(piece: Piece, r: float) -> float:
    return piece_value(differentiate_piece(piece), r)


@dataclass(frozen=True)
class RadialProfile:
    """Radial function on a channel, split at the tube radius.

    ``interior`` is used for r < r_tube, ``exterior`` for r >= r_tube.  Both
    are tuples of :class:`ClosedForm` terms.
    """

    interior: Piece
    exterior: Piece
    channel: Channel
    config: FluxConfig

    def __post_init__(self):
        object.__setattr__(self, "interior", _as_piece(self.interior))
        object.__setattr__(self, "exterior", _as_piece(self.exterior))

    def __call__(self, r: float) -> float:
        return evaluate(self, r)

    def scaled(self, c: float) -> "RadialProfile":
        return replace(self, interior=tuple(t.times_power(c, 0) for t in self.interior),
                       exterior=tuple(t.times_power(c, 0) for t in self.exterior))


def _as_piece(p) -> Piece:
    if isinstance(p, ClosedForm):
        return (p,)
    return tuple(p)


def evaluate(profile: RadialProfile, r: float) -> float:
    """Value at r >= 0; the exterior form is used at r = r_tube."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r < profile.config.r_tube:
        return piece_value(profile.interior, r)
    return piece_value(profile.exterior, r)


def derivative(profile: RadialProfile, r: float, side: Optional[str] = None) -> float:
    """Analytic d/dr.  At r = r_tube, ``side`` ('in' or 'out') is required."""
    if not r > 0:
        raise ValueError("derivative needs r > 0")
    R = profile.config.r_tube
    if r == R:
        if side not in ("in", "out"):
            raise ValueError("at r = r_tube pass side='in' or side='out'")
        inside = side == "in"
    elif side is not None:
        raise ValueError("side is only meaningful at r = r_tube")
    else:
        inside = r < R
    return piece_derivative(profile.interior if inside else profile.exterior, r)


def gauge_profile(config: FluxConfig, interior: bool) -> Piece:
    """The function a(r) entering the ladder operators, as closed-form terms."""
    a = config.alpha
    landau = config.field_mode is FieldMode.LANDAU_PLUS_TUBE
    terms = []
    if interior:
        slope = (1.0 if landau else 0.0) + a / config.r_tube ** 2
        terms.append(ClosedForm(slope, 1))
    else:
        if landau:
            terms.append(ClosedForm(1.0, 1))
        terms.append(ClosedForm(a, -1))
    return _simplify(terms)


class SpinPreconditionError(ValueError):
    """Ladder operator applied to the spin component it annihilates."""


def _ladder_piece(piece: Piece, m: int, gauge: Piece, dsign: float) -> Piece:
    out = [t.times_power(0.5 * dsign, 0) for t in differentiate_piece(piece)]
    for t in piece:
        if m != 0:
            out.append(t.times_power(0.5 * m, -1))
        for g in gauge:
            out.append(t.times_power(0.5 * g.coefficient, g.power))
    return _simplify(out)


def apply_raising(profile: RadialProfile) -> RadialProfile:
    """Radial action of Q on a sigma = -1/2 profile.

    Returns 1/2 (f' + (m/r) f + a(r) f) on the channel (+1/2, m-1).  The two
    pieces are transformed separately, so the result is in general
    discontinuous at the tube radius.
    """
    ch = profile.channel
    if not ch.is_down:
        raise SpinPreconditionError("raising acts on sigma = -1/2 only")
    cfg = profile.config
    return RadialProfile(
        _ladder_piece(profile.interior, ch.m, gauge_profile(cfg, True), 1.0),
        _ladder_piece(profile.exterior, ch.m, gauge_profile(cfg, False), 1.0),
        Channel(0.5, ch.m - 1), cfg)


def apply_lowering(profile: RadialProfile) -> RadialProfile:
    """Radial action of Q^dagger on a sigma = +1/2 profile.

    Returns 1/2 (-f' + (m/r) f + a(r) f) on the channel (-1/2, m+1).
    """
    ch = profile.channel
    if ch.is_down:
        raise SpinPreconditionError("lowering acts on sigma = +1/2 only")
    cfg = profile.config
    return RadialProfile(
        _ladder_piece(profile.interior, ch.m, gauge_profile(cfg, True), -1.0),
        _ladder_piece(profile.exterior, ch.m, gauge_profile(cfg, False), -1.0),
        Channel(-0.5, ch.m + 1), cfg)
