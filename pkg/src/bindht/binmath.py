"""Scalar binary-alphabet information quantities.

Everything is measured in bits (all logarithms base 2).  Probabilities
live in [0, 1]; the conventions 0*log(0) = 0 and d(p||q) = +inf for
q in {0, 1} with p != q are applied throughout.
"""

import math

from .errors import ParameterError

#: absolute slack accepted on probability / rate domain checks
DOMAIN_TOL = 1e-9

_LN2 = math.log(2.0)


def _check_unit(x, name):
    if not (-DOMAIN_TOL <= x <= 1.0 + DOMAIN_TOL):
        raise ParameterError(f"{name}={x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def binary_entropy(p):
    """h(p) = p log(1/p) + (1-p) log(1/(1-p)) in bits."""
    p = _check_unit(p, "p")
    if p == 0.0 or p == 1.0:
        return 0.0
    return (-p * math.log(p) - (1.0 - p) * math.log(1.0 - p)) / _LN2


def binary_divergence(p, q):
    """d(p||q) between Bernoulli(p) and Bernoulli(q), in bits.

    Returns +inf when q is degenerate and p differs from it.
    """
    p = _check_unit(p, "p")
    q = _check_unit(q, "q")
    if q == 0.0:
        return 0.0 if p == 0.0 else math.inf
    if q == 1.0:
        return 0.0 if p == 1.0 else math.inf
    acc = 0.0
    if p > 0.0:
        acc += p * math.log(p / q)
    if p < 1.0:
        acc += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(acc / _LN2, 0.0)


def binary_convolution(p, q):
    """p * q = p(1-q) + (1-p)q, the crossover of two stacked BSCs."""
    p = _check_unit(p, "p")
    q = _check_unit(q, "q")
    return p * (1.0 - q) + (1.0 - p) * q


def inverse_binary_entropy(y):
    """The unique p in [0, 1/2] with h(p) = y, by bisection.

    Monotone to within the 1e-12 bisection tolerance.
    """
    if not (-DOMAIN_TOL <= y <= 1.0 + DOMAIN_TOL):
        raise ParameterError(f"y={y!r} outside [0, 1]")
    y = min(max(y, 0.0), 1.0)
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return 0.5 * (lo + hi)


def gv_distance(rate):
    """Gilbert-Varshamov radius h^{-1}(1 - R) of a rate-R code."""
    if not (-DOMAIN_TOL <= rate <= 1.0 + DOMAIN_TOL):
        raise ParameterError(f"rate={rate!r} outside [0, 1]")
    return inverse_binary_entropy(1.0 - min(max(rate, 0.0), 1.0))
