"""
Special functions used by the flux-tube eigenfunctions.

Every public function returns an :class:`EvalResult` carrying the value and
a conservative absolute error estimate.  The confluent hypergeometric
functions and the Laguerre polynomials are implemented here; the gamma
family and the Bessel function are thin wrappers around ``scipy.special``.

Conventions follow Abramowitz & Stegun / DLMF:

* ``kummer_m(a, b, x)``   -- 1F1(a; b; x) = M(a, b, x)
* ``tricomi_u(a, b, x)``  -- U(a, b, x)
* ``laguerre_assoc(n, a, x)`` -- generalized Laguerre L_n^{(a)}(x)
"""

from __future__ import annotations

import decimal
import math
import warnings
from dataclasses import dataclass

from scipy import integrate, special

EPS = 2.220446049250313e-16

# Above this argument U is computed from its integral representation.
_U_SERIES_MAX_X = 2.0
# Beyond it the series is still tried when the recurrence loses accuracy.
_U_SERIES_FALLBACK_X = 40.0
# Closer than this to an integer, b is treated through a Taylor expansion
# about the integer value.
_U_NEAR_INT_B = 1e-4
_U_NEAR_INT_STEP = 1e-3
_MAX_TERMS = 20000
# relative error above which the M series is resummed in decimal arithmetic
_M_TARGET_RTOL = 1e-13
_M_MAX_DIGITS = 80


class SpecialFunctionError(ValueError):
    """Base class for argument errors raised by this module."""


class DomainError(SpecialFunctionError):
    """Arguments outside the domain of the function."""


class PoleError(SpecialFunctionError):
    """Evaluation at a pole of the function."""


@dataclass(frozen=True)
class EvalResult:
    """A function value together with an absolute error estimate."""

    value: float
    abs_error_estimate: float = 0.0

    def __float__(self) -> float:
        return float(self.value)


def _is_nonpos_int(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def _is_int(v: float) -> bool:
    return v == math.floor(v)


# ---------------------------------------------------------------------------
# Gamma family (scipy backed)
# ---------------------------------------------------------------------------

def gamma_fn(s: float) -> EvalResult:
    """Euler gamma function."""
    if _is_nonpos_int(s):
        raise PoleError(f"gamma has a pole at s={s}")
    v = float(special.gamma(s))
    return EvalResult(v, 8 * EPS * abs(v))


def gamma_lower(s: float, x: float) -> EvalResult:
    """Lower incomplete gamma function gamma(s, x) for s > 0."""
    if x < 0:
        raise DomainError("gamma_lower requires x >= 0")
    if x == 0:
        return EvalResult(0.0, 0.0)
    if s <= 0:
        raise DomainError("gamma_lower diverges for s <= 0")
    v = float(special.gammainc(s, x) * special.gamma(s))
    return EvalResult(v, 64 * EPS * abs(v))


def gamma_upper(s: float, x: float) -> EvalResult:
    """Upper incomplete gamma function Gamma(s, x) for any real s.

    For ``s <= 0`` the value is obtained by downward recurrence
    ``Gamma(s, x) = (Gamma(s+1, x) - x**s e**-x) / s`` starting from
    ``Gamma(s0, x)`` with ``s0`` in ``(0, 1]`` (or ``E1(x)`` when ``s`` is an
    integer).
    """
    if x < 0:
        raise DomainError("gamma_upper requires x >= 0")
    if s > 0:
        if x == 0:
            return gamma_fn(s)
        v = float(special.gammaincc(s, x) * special.gamma(s))
        return EvalResult(v, 64 * EPS * abs(v))
    if x == 0:
        raise DomainError("Gamma(s, 0) diverges for s <= 0")
    steps = math.ceil(-s)
    s0 = s + steps
    if s0 == 0:
        g = float(special.exp1(x))
    else:
        g = float(special.gammaincc(s0, x) * special.gamma(s0))
    scale = abs(g)
    for k in range(steps):
        sk = s0 - k - 1
        g = (g - math.exp(sk * math.log(x) - x)) / sk
        scale = max(scale, abs(g))
    return EvalResult(g, 64 * EPS * (steps + 1) * scale)


def gamma_upper_regularized(s: float, x: float) -> EvalResult:
    """Gamma(s, x) / Gamma(s) for s > 0."""
    if s <= 0 or x < 0:
        raise DomainError("regularized upper gamma needs s > 0, x >= 0")
    v = float(special.gammaincc(s, x))
    return EvalResult(v, 64 * EPS * abs(v))


# ---------------------------------------------------------------------------
# Bessel (scipy backed)
# ---------------------------------------------------------------------------

def bessel_j(nu: float, x: float) -> EvalResult:
    """Bessel function of the first kind J_nu(x), x >= 0.

    Negative non-integer orders are accepted; they are singular at x = 0.
    """
    if x < 0:
        raise DomainError("bessel_j requires x >= 0")
    if x == 0:
        if nu == 0:
            return EvalResult(1.0, 0.0)
        if nu > 0 or _is_int(nu):
            return EvalResult(0.0, 0.0)
        return EvalResult(math.inf, math.inf)
    v = float(special.jv(nu, x))
    return EvalResult(v, 1e-14 * max(1.0, abs(v)))


# ---------------------------------------------------------------------------
# Laguerre
# ---------------------------------------------------------------------------

def _laguerre(n: int, a: float, x: float) -> tuple[float, float]:
    if n < 0:
        return 0.0, 0.0
    if a < -1:
        return _laguerre_sum(n, a, x)
    prev, cur = 0.0, 1.0
    big = 1.0
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
        big = max(big, abs(cur))
    return cur, 4 * EPS * (n + 1) * big


def _laguerre_sum(n: int, a: float, x: float) -> tuple[float, float]:
    # explicit sum; the recurrence is unstable for a < -1
    terms = []
    binom = 1.0  # binomial(n + a, n - k) at k = n
    for k in range(n, -1, -1):
        terms.append(binom * (-x) ** k / math.factorial(k))
        # binomial(n+a, n-k+1) = binomial(n+a, n-k) * (a + k) / (n - k + 1)
        binom *= (a + k) / (n - k + 1)
    v = math.fsum(terms)
    return v, 4 * EPS * math.fsum(abs(t) for t in terms)


def laguerre_assoc(n: int, a: float, x: float) -> EvalResult:
    """Generalized Laguerre polynomial L_n^{(a)}(x) by three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError("laguerre_assoc needs an integer n >= 0")
    v, err = _laguerre(int(n), a, x)
    return EvalResult(v, err)


# ---------------------------------------------------------------------------
# Kummer M
# ---------------------------------------------------------------------------

def _tail_ratio(a: float, b: float, x: float, k: int) -> float:
    """Upper bound on |t_{j+1}/t_j| for all j >= k, or inf if none is known.

    Past -a and -b the factor (j+a)/(j+b) is monotone and x/(j+1) decreases,
    so the larger of its value at k and its limit 1 bounds every later ratio.
    """
    if k <= -a or k <= -b:
        return math.inf
    return abs(x) / (k + 1) * max(1.0, (k + a) / (k + b))


def _kummer_series(a: float, b: float, x: float, da: float = 0.0) -> tuple[float, float]:
    """Direct Taylor series with compensated summation.

    ``da`` is an absolute uncertainty already present in ``a``; its effect on
    each term is carried into the error estimate.
    """
    terms = [1.0]
    t = 1.0
    run = 1.0
    k = 0
    hsum = 0.0
    spread = 0.0
    small = 0
    terminating = _is_nonpos_int(a)
    while True:
        if da:
            hsum += 1.0 / max(abs(a + k), da)
        t *= (a + k) / (b + k) * x / (k + 1)
        k += 1
        terms.append(t)
        spread += abs(t) * hsum
        run += t
        if t == 0.0 and terminating:
            break
        if not math.isfinite(t):
            return t, math.inf
        # past the sign-alternating head and the growing part of the series
        if _tail_ratio(a, b, x, k) <= 0.5 and abs(t) <= EPS * abs(run):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if k > _MAX_TERMS:
            raise ArithmeticError(f"1F1({a}, {b}, {x}) series did not converge")
    s = math.fsum(terms)
    # term k carries about 3k roundings from the running product
    mag = math.fsum(abs(v) * (3 * j + 4) for j, v in enumerate(terms))
    return s, EPS * mag + abs(terms[-1]) + da * spread


def _kummer_series_decimal(a, b: float, x: float, digits: int) -> tuple[float, float]:
    """The same series summed in decimal arithmetic with ``digits`` digits.

    Used when the double-precision sum has lost too many digits to
    cancellation; the float inputs are converted exactly and ``a`` may be
    given as an exact Decimal.
    """
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        A, B, X = decimal.Decimal(a), decimal.Decimal(b), decimal.Decimal(x)
        t = decimal.Decimal(1)
        run = decimal.Decimal(1)
        mag = decimal.Decimal(1)
        tiny = decimal.Decimal(10) ** (-digits)
        k = 0
        small = 0
        while True:
            t = t * (A + k) / (B + k) * X / (k + 1)
            k += 1
            run += t
            mag += abs(t) * (3 * k + 4)
            if t == 0:
                break
            if _tail_ratio(float(A), b, x, k) <= 0.5 and abs(t) <= tiny * abs(run):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            if k > _MAX_TERMS:
                raise ArithmeticError(f"1F1({a}, {b}, {x}) series did not converge")
        v = float(run)
        err = float(mag * tiny + abs(t))
    return v, err + EPS * abs(v)


def kummer_m(a: float, b: float, x: float) -> EvalResult:
    """Confluent hypergeometric function M(a, b, x) = 1F1(a; b; x)."""
    if _is_nonpos_int(b):
        if not (_is_nonpos_int(a) and abs(a) <= abs(b)):
            raise DomainError(f"1F1 undefined for b={b} with a={a}")
    if x == 0 or a == 0:
        return EvalResult(1.0, 0.0)
    if a == b and x <= 700:
        v = math.exp(x)
        return EvalResult(v, 2 * EPS * v)
    if x < 0 and not _is_nonpos_int(a):
        # Kummer transformation: positive argument, no alternating cancellation
        with decimal.localcontext() as ctx:
            ctx.prec = 1200  # enough for any difference of two doubles
            exact = decimal.Decimal(b) - decimal.Decimal(a)
            a2 = b - a
            da = abs(float(exact - decimal.Decimal(a2)))
        s, err = _checked_series(a2, b, -x, da, exact)
        f = math.exp(x)
        return EvalResult(f * s, f * err + 2 * EPS * abs(f * s))
    s, err = _checked_series(a, b, x)
    if x > 700 and not math.isfinite(s):
        return EvalResult(s, math.inf)
    return EvalResult(s, err)


def _checked_series(a: float, b: float, x: float, da: float = 0.0,
                    a_exact=None) -> tuple[float, float]:
    s, err = _kummer_series(a, b, x, da)
    digits = 17
    while err > _M_TARGET_RTOL * abs(s) and math.isfinite(err) and digits < _M_MAX_DIGITS:
        # cancellation: redo the sum with enough extra digits; near a zero of
        # M the first guess can be short, hence the loop
        lost = math.log10(err / max(abs(s), 1e-300) / _M_TARGET_RTOL)
        digits = min(_M_MAX_DIGITS, digits + 5 + max(0, math.ceil(lost)))
        s2, err2 = _kummer_series_decimal(a if a_exact is None else a_exact, b, x, digits)
        if not err2 < err:
            break
        s, err = s2, err2
    return s, err


def kummer_m_deriv(a: float, b: float, x: float) -> EvalResult:
    """d/dx M(a, b, x) = (a/b) M(a+1, b+1, x)."""
    if a == 0:
        return EvalResult(0.0, 0.0)
    r = kummer_m(a + 1, b + 1, x)
    f = a / b
    return EvalResult(f * r.value, abs(f) * r.abs_error_estimate)


# ---------------------------------------------------------------------------
# Tricomi U
# ---------------------------------------------------------------------------

def _rgamma(z: float) -> float:
    """1/Gamma(z), accurate near the poles of Gamma."""
    if z > 0.5:
        return float(special.rgamma(z))
    nz = round(z)
    d = z - nz
    if d == 0:
        return 0.0
    sgn = -1.0 if nz % 2 else 1.0
    return float(special.gamma(1 - z)) * sgn * math.sin(math.pi * d) / math.pi


def _digamma(z: float) -> float:
    if z > 0:
        return float(special.digamma(z))
    # reflection with exact reduction of the argument near the poles
    d = z - round(z)
    if d == 0:
        raise PoleError(f"digamma has a pole at {z}")
    return float(special.digamma(1 - z)) - math.pi / math.tan(math.pi * d)


def _u_polynomial(n: int, bm1: float, x: float) -> tuple[float, float]:
    # U(-n, b, x) = (-1)^n n! L_n^{(b-1)}(x)
    v, err = _laguerre(n, bm1, x)
    f = (-1) ** n * math.factorial(n)
    return f * v, abs(f) * err


def _u_connection(a: float, b: float, x: float) -> tuple[float, float]:
    """Two-term connection formula, b not an integer."""
    m1 = kummer_m(a, b, x)
    m2 = kummer_m(a - b + 1, 2 - b, x)
    c1 = special.gamma(1 - b) * _rgamma(a - b + 1)
    c2 = special.gamma(b - 1) * _rgamma(a) * x ** (1 - b)
    t1 = c1 * m1.value
    t2 = c2 * m2.value
    err = (abs(c1) * m1.abs_error_estimate + abs(c2) * m2.abs_error_estimate
           + 8 * EPS * (abs(t1) + abs(t2)))
    return float(t1 + t2), float(err)


def _u_integer_b(a: float, n: int, x: float) -> tuple[float, float]:
    """Logarithmic series for U(a, n+1, x), n >= 0 (DLMF 13.2.9).

    Requires that neither a nor a - n is a non-positive integer.
    """
    lnx = math.log(x)
    # 1/Gamma(a-n) = (a-1)...(a-n)/Gamma(a); forming a-n in floating point
    # would shift the distance to the nearest pole
    ra = _rgamma(a)
    pref = (-1) ** (n + 1) / math.factorial(n) * ra * math.prod(a - j for j in range(1, n + 1))
    terms = []
    poch_a = 1.0      # (a)_k
    poch_n1 = 1.0     # (n+1)_k
    kfact = 1.0
    psi_1k = float(special.digamma(1.0))
    psi_nk = float(special.digamma(n + 1.0))
    xk = 1.0
    run = 0.0
    k = 0
    small = 0
    while True:
        coeff = poch_a / (poch_n1 * kfact) * xk
        bracket = lnx + _digamma(a + k) - psi_1k - psi_nk
        t = coeff * bracket
        terms.append(t)
        run += t
        if k > -a and abs(t) <= EPS * abs(run) and k > 2:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if k > _MAX_TERMS:
            raise ArithmeticError("integer-b U series did not converge")
        poch_a *= a + k
        poch_n1 *= n + 1 + k
        psi_1k += 1.0 / (k + 1)
        psi_nk += 1.0 / (n + 1 + k)
        k += 1
        kfact *= k
        xk *= x
    s1 = math.fsum(terms)
    mag1 = math.fsum(abs(t) for t in terms)
    second = []
    if n >= 1:
        for k in range(1, n + 1):
            poch = float(special.poch(1 - a + k, n - k))
            second.append(ra * math.factorial(k - 1) * poch / math.factorial(n - k)
                          * x ** (-k))
    s2 = math.fsum(second)
    mag2 = math.fsum(abs(t) for t in second)
    v = float(pref * s1 + s2)
    err = 16 * EPS * (abs(pref) * mag1 + mag2)
    return v, float(err)


def _u_small_x(a: float, b: float, x: float) -> tuple[float, float]:
    nb = round(b)
    d = b - nb
    if d == 0:
        if nb >= 1:
            return _u_integer_b(a, nb - 1, x)
        # U(a, b, x) = x^{1-b} U(a-b+1, 2-b, x) with 2-b >= 2
        v, err = _u_integer_b(a - b + 1, 1 - nb, x)
        f = x ** (1 - b)
        return f * v, f * err
    if abs(d) < _U_NEAR_INT_B:
        h = _U_NEAR_INT_STEP
        u0, e0 = _u_small_x(a, float(nb), x)
        up, ep = _u_connection(a, nb + h, x)
        um, em = _u_connection(a, nb - h, x)
        du = (up - um) / (2 * h)
        ddu = (up - 2 * u0 + um) / (h * h)
        v = u0 + d * du + 0.5 * d * d * ddu
        err = e0 + abs(d) * (ep + em) / h + abs(d) * h * h * abs(ddu) + 1e-13 * abs(v)
        return v, err
    return _u_connection(a, b, x)


def _u_integral(a: float, b: float, x: float) -> tuple[float, float]:
    """U(a, b, x) = Gamma(a)^-1 int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt, a > 0."""
    lg = math.lgamma(a)

    def f(t):
        if t == 0.0:
            return math.exp(-lg) if a == 1 else 0.0
        return math.exp(-x * t + (a - 1) * math.log(t)
                        + (b - a - 1) * math.log1p(t) - lg)

    # split at the location of the integrand's bulk to help QUADPACK
    tpk = max((a - 1) / x, (b - 2) / x, 1.0 / x)
    total, err = 0.0, 0.0
    edges = [0.0, tpk, 4 * tpk + 10.0 / x, math.inf]
    # QUADPACK warns when 2e-14 is out of reach; its error estimate is
    # passed on instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=2e-14, limit=200)
            total += v
            err += e
    return total, err + 4 * EPS * abs(total)


def _u_large_x(a: float, b: float, x: float) -> tuple[float, float]:
    if a >= 1:
        return _u_integral(a, b, x)
    steps = math.ceil(1 - a)
    a0 = a + steps
    u1, e1 = _u_integral(a0 + 1, b, x)   # U(a0+1)
    u0, e0 = _u_integral(a0, b, x)       # U(a0)
    for k in range(steps):
        ak = a0 - k
        # U(a-1) = (2a - b + x) U(a) - a (a - b + 1) U(a+1)
        c0, c1 = 2 * ak - b + x, ak * (ak - b + 1)
        nu = c0 * u0 - c1 * u1
        # first-order propagation of the absolute error bound
        ne = abs(c0) * e0 + abs(c1) * e1 + 2 * EPS * (abs(c0 * u0) + abs(c1 * u1))
        u0, u1 = nu, u0
        e0, e1 = ne, e0
    return u0, e0


def tricomi_u(a: float, b: float, x: float) -> EvalResult:
    """Confluent hypergeometric function of the second kind U(a, b, x), x > 0."""
    if not x > 0:
        raise DomainError("tricomi_u requires x > 0")
    if a == 0:
        return EvalResult(1.0, 0.0)
    c = a - b + 1
    # of the two polynomial representations use the one with the larger
    # Laguerre parameter
    if _is_nonpos_int(a) and not (_is_nonpos_int(c) and 1 - b > b - 1):
        v, err = _u_polynomial(int(-a), b - 1, x)
        return EvalResult(v, err)
    if _is_nonpos_int(c):
        v, err = _u_polynomial(int(-c), 1 - b, x)
        f = x ** (1 - b)
        return EvalResult(f * v, f * err)
    if x <= _U_SERIES_MAX_X:
        v, err = _u_small_x(a, b, x)
        if a > 0 and not err <= 1e-13 * abs(v):
            # cancellation in the series; the integral has none
            vi, ei = _u_integral(a, b, x)
            if ei < err:
                v, err = vi, ei
    else:
        v, err = _u_large_x(a, b, x)
        if not err <= 1e-13 * abs(v) and x <= _U_SERIES_FALLBACK_X:
            try:
                vs, es = _u_small_x(a, b, x)
            except ArithmeticError:
                vs, es = v, math.inf
            if es < err:
                v, err = vs, es
    return EvalResult(float(v), float(err))


def tricomi_u_deriv(a: float, b: float, x: float) -> EvalResult:
    """d/dx U(a, b, x) = -a U(a+1, b+1, x)."""
    if a == 0:
        return EvalResult(0.0, 0.0)
    r = tricomi_u(a + 1, b + 1, x)
    return EvalResult(-a * r.value, abs(a) * r.abs_error_estimate)
