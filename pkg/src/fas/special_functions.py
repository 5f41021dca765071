"""Scalar numeric kernels: Bessel J0, Gaussian Q-function, odd double factorial.

These are the three special functions every other module leans on. They are
deliberately scalar-only; the Monte Carlo engine vectorizes at a higher level.
"""

from __future__ import annotations

import math

from scipy.special import erfc as _erfc

__all__ = [
    "bessel_j0",
    "gaussian_q",
    "double_factorial_odd",
    "log_double_factorial_odd",
]

# Power series is numerically stable (cancellation < ~1e4) up to this point;
# beyond it the Hankel expansion is already converged well below 1e-10.
_SERIES_CUTOFF = 12.0


def _j0_series(x: float) -> float:
    # J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, 200):
        term *= -q / (k * k)
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def _j0_asymptotic(x: float) -> float:
    # Hankel expansion: J0(x) = sqrt(2/(pi x)) Re[e^{i(x - pi/4)} sum_k i^k a_k / x^k]
    # with a_k = a_{k-1} * (-(2k-1)^2) / (8k), truncated at the smallest term.
    re_sum, im_sum = 1.0, 0.0
    a = 1.0
    prev = abs(a)
    for k in range(1, 40):
        a *= -((2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(a) >= prev:  # asymptotic series started diverging
            break
        prev = abs(a)
        phase = k % 4
        if phase == 0:
            re_sum += a
        elif phase == 1:
            im_sum += a
        elif phase == 2:
            re_sum -= a
        else:
            im_sum -= a
        if abs(a) < 1e-17:
            break
    chi = x - 0.25 * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (re_sum * math.cos(chi) - im_sum * math.sin(chi))


def bessel_j0(x: float) -> float:
    """Zeroth-order Bessel function of the first kind.

    Uses the convergent power series for |x| below 12 and the Hankel
    asymptotic expansion above; absolute error is below 1e-10 over
    |x| <= 100. Even in x by construction.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"bessel_j0 requires a finite argument, got {x!r}")
    ax = abs(x)
    if ax < _SERIES_CUTOFF:
        return _j0_series(ax)
    return _j0_asymptotic(ax)


def gaussian_q(z: float) -> float:
    """Upper-tail probability of the standard normal, Q(z).

    Computed as erfc(z / sqrt(2)) / 2; Q(0) = 0.5 exactly and
    Q(-z) = 1 - Q(z) to machine precision.
    """
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"gaussian_q requires a finite argument, got {z!r}")
    return float(0.5 * _erfc(z / math.sqrt(2.0)))


def double_factorial_odd(n: int) -> int:
    """Exact (2n - 1)!! = (2n - 1)(2n - 3)...(3)(1) as an arbitrary-precision int."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"double_factorial_odd requires an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"double_factorial_odd requires n >= 1, got {n}")
    return math.prod(range(1, 2 * n, 2))


def log_double_factorial_odd(n: int) -> float:
    """Natural log of (2n - 1)!!, via (2n)! / (2^n n!); stable for large n."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"log_double_factorial_odd requires an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"log_double_factorial_odd requires n >= 1, got {n}")
    return math.lgamma(2 * n + 1) - n * math.log(2.0) - math.lgamma(n + 1)
