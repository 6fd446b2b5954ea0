"""Bessel functions of the first kind for integer order.

Small arguments (|x| < 2) use the ascending power series; larger arguments use
Miller's downward recurrence normalised with J_0 + 2 * sum_k J_2k = 1.
"""

import math

__all__ = ["bessel_j", "bessel_addition_check"]

_SERIES_LIMIT = 2.0
_SERIES_TERMS = 40
_RESCALE = 1e250


def _check_finite(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Bessel argument must be finite, got {x!r}")
    return x


def _series(n, x):
    # n >= 0, |x| < 2
    half = 0.5 * x
    term = half**n / math.factorial(n)
    q = -half * half
    total = term
    for k in range(1, _SERIES_TERMS):
        term *= q / (k * (k + n))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _miller(n, x):
    # n >= 0, x > 0
    ax = abs(x)
    start = 2 * ((max(n, int(ax)) + 20 + int(math.sqrt(40.0 * max(n, ax)))) // 2)
    two_over_x = 2.0 / ax
    j_next, j_cur = 0.0, 1.0
    norm = 0.0
    result = 0.0
    for k in range(start, 0, -1):
        j_prev = k * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            result /= _RESCALE
        # j_cur now holds J_{k-1} up to normalisation
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += j_cur
        if k - 1 == n:
            result = j_cur
    norm = 2.0 * norm + j_cur
    return result / norm


def bessel_j(n: int, x: float) -> float:
    """Return J_n(x) for integer order ``n`` and real ``x``.

    Accurate to about 1e-14 absolute for |x| <= 10, |n| <= 20. Negative orders
    and arguments are mapped to the positive quadrant with
    ``J_{-n}(x) = (-1)^n J_n(x)`` and ``J_n(-x) = (-1)^n J_n(x)``.
    """
    if int(n) != n:
        raise ValueError(f"only integer orders are supported, got {n!r}")
    n = int(n)
    x = _check_finite(x)
    sign = 1.0
    if n < 0:
        n = -n
        if n % 2:
            sign = -sign
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x == 0.0:
        return sign * (1.0 if n == 0 else 0.0)
    if x < _SERIES_LIMIT:
        return sign * _series(n, x)
    return sign * _miller(n, x)


def bessel_addition_check(n: int, n_prime: int, x: float, x_prime: float, l_max: int) -> float:
    """Truncated sum over |l| <= l_max of J_{n-l}(x) J_{n'-l}(x').

    By the addition theorem this converges to ``bessel_j(n - n_prime, x - x_prime)``.
    """
    x = _check_finite(x)
    x_prime = _check_finite(x_prime)
    return math.fsum(
        bessel_j(n - l, x) * bessel_j(n_prime - l, x_prime) for l in range(-l_max, l_max + 1)
    )
