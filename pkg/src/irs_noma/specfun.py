"""
Special functions for the outage analysis

Log-gamma, regularized lower incomplete gamma and regularized incomplete
beta, evaluated in double precision with series / continued fraction
expansions in the manner of "Numerical Recipes in C", chapter 6.
Prefactors for large shapes are formed around the distribution mode in the
manner of cephes `igam_fac` and boost `ibeta_power_terms`, so the absolute
error stays near 1e-14 for shapes up to 1e4.
All functions are pure and reentrant.
"""

import math

from .errors import ConvergenceError, require

# A probability in [0, 1]; only a documentation alias.
Probability = float

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286

# Above this argument the Stirling series is accurate to a few ulp.
_STIRLING_MIN = 15.0

_TINY = 1.0e-300
_GAMMA_EPS = 1.0e-15
_BETA_EPS = 1.0e-14
_CLAMP_TOLERANCE = 1.0e-15


def _zeta_minus_one(s: int, cutoff: int = 32) -> float:
    # Euler-Maclaurin tail from `cutoff`, smallest terms summed first.
    n = float(cutoff)
    total = (
        n ** (1 - s) / (s - 1)
        + 0.5 * n**-s
        + s * n ** (-s - 1) / 12.0
        - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720.0
        + s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * n ** (-s - 5) / 30240.0
    )
    for i in range(cutoff - 1, 1, -1):
        total += float(i) ** -s
    return total


# Taylor coefficients of ln Gamma(2 + z) for k >= 2: (-1)^k (zeta(k) - 1) / k.
# Terms fall like 4^-k on |z| <= 1/2.
_LN_GAMMA_TWO_COEFFS = tuple((-1) ** k * _zeta_minus_one(k) / k for k in range(2, 31))


def _clamp_probability(value: float) -> Probability:
    """Snap values within 1e-15 of [0, 1] onto the interval"""
    if 0.0 <= value <= 1.0:
        return value
    if -_CLAMP_TOLERANCE <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _CLAMP_TOLERANCE:
        return 1.0
    raise ConvergenceError(f"probability evaluated outside [0, 1]: {value!r}")


def _stirling_correction(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    return inv * (
        1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0)))
    )


def _stirling(x: float) -> float:
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + _stirling_correction(x)


def _ln_gamma_near_two(z: float) -> float:
    # ln Gamma(2 + z) for |z| <= 1/2, relative accuracy kept through the root at z = 0.
    acc = 0.0
    for coeff in reversed(_LN_GAMMA_TWO_COEFFS):
        acc = acc * z + coeff
    return z * ((1.0 - _EULER_GAMMA) + z * acc)


def _log1pmx(t: float) -> float:
    """log(1 + t) - t without cancellation for small |t|"""
    if t <= -1.0:
        return -math.inf
    if abs(t) >= 0.5:
        return math.log1p(t) - t
    power = t * t
    total = -0.5 * power
    n = 2
    while True:
        n += 1
        power *= -t
        term = -power / n
        total += term
        if abs(term) <= abs(total) * 1.0e-17:
            return total


def ln_gamma(x: float) -> float:
    """
    Natural logarithm of the Gamma function for x > 0.

    Arguments below 15 are moved into [1.5, 2.5) by the recurrence and
    evaluated with the Taylor series about 2, which keeps the relative error
    small next to the roots at 1 and 2. Larger arguments use the Stirling
    series. ln_gamma(1) and ln_gamma(2) are exactly 0.

    Raises:
        DomainError: x <= 0 or not finite
    """
    require(math.isfinite(x) and x > 0.0, f"ln_gamma requires a finite x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x >= _STIRLING_MIN:
        return _stirling(x)
    if x < 0.5:
        # Gamma(x) = Gamma(2 + x) / (x (1 + x))
        return _ln_gamma_near_two(x) - math.log(x) - math.log1p(x)
    if x < 1.5:
        z = x - 1.0
        return _ln_gamma_near_two(z) - math.log1p(z)

    product = 1.0
    while x >= 2.5:
        x -= 1.0
        product *= x
    return _ln_gamma_near_two(x - 2.0) + math.log(product)


def ln_beta(a: float, b: float) -> float:
    """ln B(a, b) through ln_gamma"""
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def _iteration_cap(shape: float) -> int:
    # The expansions need O(sqrt(shape)) terms around the mode.
    return 500 + int(50.0 * math.sqrt(shape))


def _log_gamma_prefix(k: float, x: float) -> float:
    """ln(x^k e^-x / Gamma(k))"""
    if k < _STIRLING_MIN:
        return k * math.log(x) - x - ln_gamma(k)
    delta = (x - k) / k
    return (
        k * _log1pmx(delta) + 0.5 * math.log(k) - _HALF_LOG_2PI - _stirling_correction(k)
    )


def _log_beta_front(x: float, a: float, b: float) -> float:
    """ln(x^a (1 - x)^b / B(a, b))"""
    large_a = a >= _STIRLING_MIN
    large_b = b >= _STIRLING_MIN
    if not (large_a or large_b):
        return a * math.log(x) + b * math.log1p(-x) - ln_beta(a, b)

    c = a + b
    # Offsets from the mean a / c: xc = a + u and (1 - x)c = b - u.
    if x <= 0.5:
        xc = x * c
        u = xc - a
        yc = b - u
    else:
        yc = (1.0 - x) * c
        u = b - yc
        xc = a + u
    tail = _stirling_correction(c)

    if large_a and large_b:
        return (
            a * _log1pmx(u / a)
            + b * _log1pmx(-u / b)
            + 0.5 * math.log(a * b / c)
            - _HALF_LOG_2PI
            - _stirling_correction(a)
            - _stirling_correction(b)
            + tail
        )
    if large_a:
        return (
            a * (_log1pmx(u / a) + u / a)
            + b * math.log(yc)
            - b
            + 0.5 * math.log1p(-b / c)
            - ln_gamma(b)
            - _stirling_correction(a)
            + tail
        )
    return (
        b * (_log1pmx(-u / b) - u / b)
        + a * math.log(xc)
        - a
        + 0.5 * math.log1p(-a / c)
        - ln_gamma(a)
        - _stirling_correction(b)
        + tail
    )


def _lower_gamma_series(k: float, x: float, log_prefix: float) -> float:
    ap = k
    term = 1.0 / k
    total = term
    for _ in range(_iteration_cap(k)):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(log_prefix)
    raise ConvergenceError(f"incomplete gamma series did not converge (k={k!r}, x={x!r})")


def _upper_gamma_fraction(k: float, x: float, log_prefix: float) -> float:
    # Modified Lentz evaluation of the continued fraction for Q(k, x).
    b = x + 1.0 - k
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _iteration_cap(k) + 1):
        an = -i * (i - k)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return math.exp(log_prefix) * h
    raise ConvergenceError(
        f"incomplete gamma continued fraction did not converge (k={k!r}, x={x!r})"
    )


def reg_inc_gamma_lower(k: float, x: float) -> Probability:
    """
    Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k).

    This is the CDF of a unit-scale Gamma(k) variable. Uses the power series
    for x < k + 1 and the continued fraction for the complement otherwise.

    Raises:
        DomainError: k <= 0, x < 0 or NaN arguments
        ConvergenceError: expansion did not converge
    """
    require(math.isfinite(k) and k > 0.0, f"shape k must be finite and > 0, got {k!r}")
    require(not math.isnan(x) and x >= 0.0, f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0

    log_prefix = _log_gamma_prefix(k, x)
    if x < k + 1.0:
        return _clamp_probability(_lower_gamma_series(k, x, log_prefix))
    return _clamp_probability(1.0 - _upper_gamma_fraction(k, x, log_prefix))


def _beta_fraction(x: float, a: float, b: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _iteration_cap(max(a, b)) + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge (x={x!r}, a={a!r}, b={b!r})"
    )


def reg_inc_beta(x: float, a: float, b: float) -> Probability:
    """
    Regularized incomplete beta function I(x; a, b).

    The continued fraction is applied directly for x < (a + 1) / (a + b + 2)
    and through the symmetry I(x; a, b) = 1 - I(1 - x; b, a) otherwise.

    Raises:
        DomainError: x outside [0, 1] or non-positive shapes
        ConvergenceError: continued fraction did not converge
    """
    require(not math.isnan(x) and 0.0 <= x <= 1.0, f"x must lie in [0, 1], got {x!r}")
    require(math.isfinite(a) and a > 0.0, f"shape a must be finite and > 0, got {a!r}")
    require(math.isfinite(b) and b > 0.0, f"shape b must be finite and > 0, got {b!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    log_front = _log_beta_front(x, a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return _clamp_probability(math.exp(log_front) * _beta_fraction(x, a, b) / a)
    return _clamp_probability(1.0 - math.exp(log_front) * _beta_fraction(1.0 - x, b, a) / b)


__all__ = [
    "Probability",
    "ln_beta",
    "ln_gamma",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
]
