"""
Finite flux tube of radius R in a homogeneous field.

Inside the tube the field is enhanced by the factor b = 1 + alpha/R**2 and
the radial equation is of Kummer type with a regular solution; outside it is
the Landau problem with m replaced by m + alpha and the decaying Tricomi
solution.  The two are joined continuously at R and the energy is fixed by
continuity of the logarithmic derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun as sf
from .radial import (Channel, ClosedForm, FieldMode, FluxConfig, KummerM,
                     RadialProfile, TricomiU)

__all__ = [
    "MatchResult", "matched_ansatz", "matching_residual", "matching_function",
    "scan_roots", "small_r_condition", "singlet_profile",
    "DEFAULT_STEP", "DEFAULT_E_MAX",
]

DEFAULT_STEP = 0.01
DEFAULT_E_MAX = 6.0
# bisection stops once the bracket is this narrow
_ROOT_XTOL = 1e-12
# |U| or |M| below this fraction of the local scale counts as a pole of the
# logarithmic derivative
_POLE_RTOL = 1e-13


@dataclass(frozen=True)
class MatchResult:
    energy: float
    residual_at_root: float
    bracket: tuple
    channel: Channel


def _theta(v: float) -> float:
    return 1.0 if v > 0 else 0.0


def _check(cfg: FluxConfig):
    if cfg.field_mode is not FieldMode.LANDAU_PLUS_TUBE:
        raise ValueError("the matched ansatz needs the LandauPlusTube field mode")
    if cfg.r_tube ** 2 + cfg.alpha == 0:
        raise ValueError("R**2 + alpha = 0: interior field vanishes identically")


def _parameters(cfg: FluxConfig, ch: Channel, E: float):
    R2 = cfg.r_tube ** 2
    nu = ch.m + cfg.alpha
    a_out = nu + ch.sigma + 0.5 - E
    a_in = ch.m * _theta(ch.m) + ch.sigma + 0.5 - R2 * E / (R2 + cfg.alpha)
    return R2, nu, a_out, a_in


def matched_ansatz(cfg: FluxConfig, ch: Channel, E: float) -> RadialProfile:
    """Continuous interior/exterior solution at energy E (not normalized).

    Raises
    ------
    specfun.PoleError
        If the interior Kummer function vanishes at the tube radius, so that
        no continuous scaling exists at this E.
    """
    _check(cfg)
    R2, nu, a_out, a_in = _parameters(cfg, ch, E)
    R = cfg.r_tube
    b_in = cfg.interior_field
    am = abs(ch.m)
    u_R = sf.tricomi_u(a_out, nu + 1, R2).value
    m_R = sf.kummer_m(a_in, 1 + am, R2 + cfg.alpha).value
    if m_R == 0:
        raise sf.PoleError(f"interior Kummer function vanishes at R for E={E}")
    coef = R ** (nu - am) * math.exp(cfg.alpha / 2) * u_R / m_R
    ext = ClosedForm(1.0, nu, -0.5, TricomiU(a_out, nu + 1, 1.0))
    inner = ClosedForm(coef, am, -0.5 * b_in, KummerM(a_in, 1 + am, b_in))
    return RadialProfile((inner,), (ext,), ch, cfg)


def _pieces(cfg: FluxConfig, ch: Channel, E: float):
    R2, nu, a_out, a_in = _parameters(cfg, ch, E)
    y = R2 + cfg.alpha
    bm = 1 + abs(ch.m)
    u = sf.tricomi_u(a_out, nu + 1, R2)
    du = sf.tricomi_u_deriv(a_out, nu + 1, R2)
    mm = sf.kummer_m(a_in, bm, y)
    dm = sf.kummer_m_deriv(a_in, bm, y)
    c = ch.m * _theta(-ch.m) + cfg.alpha
    return R2, y, u, du, mm, dm, c


def matching_residual(cfg: FluxConfig, ch: Channel, E: float) -> float:
    """Mismatch of the logarithmic derivatives at R, scaled to O(1).

    The value is ``(T_out - T_in + c) / max(|T_out|, |T_in|)`` with
    ``T_out = R^2 U'/U``, ``T_in = (R^2+alpha) M'/M`` and
    ``c = m theta(-m) + alpha``.

    When U and M vanish together, R is a common node of both solutions and
    the condition holds in its cross-multiplied form; the pole-free
    :func:`matching_function` value is returned then.

    Raises
    ------
    specfun.PoleError
        When exactly one of U and M vanishes at the matching point within
        tolerance.
    """
    _check(cfg)
    R2, y, u, du, mm, dm, c = _pieces(cfg, ch, E)
    u_zero = abs(u.value) <= max(_POLE_RTOL * abs(R2 * du.value), 8 * u.abs_error_estimate)
    m_zero = abs(mm.value) <= max(_POLE_RTOL * abs(y * dm.value), 8 * mm.abs_error_estimate)
    if u_zero and m_zero:
        return matching_function(cfg, ch, E)
    if u_zero:
        raise sf.PoleError(f"exterior U vanishes at R for E={E}")
    if m_zero:
        raise sf.PoleError(f"interior M vanishes at R for E={E}")
    t_out = R2 * du.value / u.value
    t_in = y * dm.value / mm.value
    raw = t_out - t_in + c
    scale = max(abs(t_out), abs(t_in))
    return raw / scale if scale > 0 else raw


def matching_function(cfg: FluxConfig, ch: Channel, E: float) -> float:
    """Pole-free form of the matching condition.

    Cross-multiplying the condition by U*M gives
    ``W = R^2 U' M - y M' U + c U M``, which is then divided by the positive
    quantity ``|(U, R^2 U')| * |(M, y M')|``.  The result has the same zeros
    as the matching residual but no poles, and lies in [-2-|c|, 2+|c|].
    """
    _check(cfg)
    R2, y, u, du, mm, dm, c = _pieces(cfg, ch, E)
    U, dU, M, dM = u.value, R2 * du.value, mm.value, y * dm.value
    w = dU * M - dM * U + c * U * M
    norm = math.hypot(U, dU) * math.hypot(M, dM)
    return w / norm


def _bisect(f, lo: float, hi: float, flo: float) -> float:
    while hi - lo > _ROOT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(cfg: FluxConfig, ch: Channel, e_min: float = 0.0,
               e_max: float = DEFAULT_E_MAX, step: float = DEFAULT_STEP) -> list:
    """Eigenvalues of the finite-tube problem in [e_min, e_max].

    The pole-free matching function is sampled on a uniform grid and every
    sign change is refined by bisection to 1e-12.  Roots closer together
    than ``step`` may be missed.  A grid end point where the function is
    zero to 1e-12 is reported as a root.
    """
    if not (0 <= e_min < e_max):
        raise ValueError("need 0 <= e_min < e_max")
    if not step > 0:
        raise ValueError("step must be positive")
    _check(cfg)
    f = lambda e: matching_function(cfg, ch, e)
    count = int(math.floor((e_max - e_min) / step + 1e-9))
    grid = [e_min + i * step for i in range(count + 1)]
    if grid[-1] < e_max:
        grid.append(e_max)
    vals = [f(e) for e in grid]
    roots = []
    for i, (e, v) in enumerate(zip(grid, vals)):
        if v == 0 or ((i == 0 or i == len(grid) - 1) and abs(v) <= 1e-12):
            roots.append((e, (e, e)))
    for i in range(len(grid) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0 or v1 == 0:
            continue
        if (v0 > 0) != (v1 > 0):
            e = _bisect(f, grid[i], grid[i + 1], v0)
            roots.append((e, (grid[i], grid[i + 1])))
    roots.sort()
    # a root on a grid point can be found both ways; keep one
    merged = []
    for e, br in roots:
        if merged and e - merged[-1][0] < 1e3 * _ROOT_XTOL:
            if abs(f(e)) < abs(f(merged[-1][0])):
                merged[-1] = (e, br)
            continue
        merged.append((e, br))
    out = []
    for e, br in merged:
        try:
            res = matching_residual(cfg, ch, e)
        except sf.PoleError:
            res = f(e)
        out.append(MatchResult(e, res, br, ch))
    return out


def _small_r_value(ch: Channel, alpha: float) -> float:
    a0 = ch.m * _theta(ch.m) + ch.sigma + 0.5
    b0 = 1 + abs(ch.m)
    # sign branch tied to the spin: prefactor 2 sigma (m + alpha) + alpha - |m|
    pref = 2 * ch.sigma * (ch.m + alpha) + alpha - abs(ch.m)
    m0 = sf.kummer_m(a0, b0, alpha).value
    dm0 = sf.kummer_m_deriv(a0, b0, alpha).value
    return pref * m0 - 2 * alpha * dm0


def small_r_condition(ch: Channel, alpha: float) -> float:
    """Leading small-R form of the matching condition (energy independent).

    The correlated signs of the prefactor are taken as +1 for sigma = +1/2
    and -1 for sigma = -1/2, which makes the condition vanish identically
    for (sigma = -1/2, m <= 0) and (sigma = +1/2, m >= 0).  In those
    channels an exact zero is returned.
    """
    if (ch.is_down and ch.m <= 0) or (not ch.is_down and ch.m >= 0):
        return 0.0
    return _small_r_value(ch, alpha)


def singlet_profile(cfg: FluxConfig, m: int) -> RadialProfile:
    """E = 0, sigma = -1/2 supersinglet for m <= 0, unnormalized."""
    if m > 0:
        raise ValueError("singlets exist for m <= 0 only")
    _check(cfg)
    a = cfg.alpha
    R = cfg.r_tube
    nu = m + a
    ext = ClosedForm(1.0, -nu, -0.5)
    inner = ClosedForm(R ** (-a) * math.exp(a / 2), -m, -0.5 * cfg.interior_field)
    return RadialProfile((inner,), (ext,), Channel(-0.5, m), cfg)
