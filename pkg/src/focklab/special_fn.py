"""Gamma and Mittag-Leffler primitives for radial kernel evaluation.

Every closed-form kernel in this package is a sum of terms
r^(2j+2c) e^{-r^(2k)} / m_j with gamma-function moments m_j, i.e. a
two-parameter Mittag-Leffler series in r^2 times a decaying weight.  The
raw series value E(r^2) grows like e^{r^(2k)} and overflows quickly, so
the workhorse here is ``ml_kernel_scaled``, which sums the weighted terms
directly in the log domain (every term <= 1).  ``mittag_leffler`` is the
undamped function for moderate arguments, kept for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, NumericalError

__all__ = ["MLParams", "log_gamma", "mittag_leffler", "ml_kernel_scaled"]

# Stop a unimodal term series once terms are decreasing and 20 consecutive
# terms fell below 1e-18 of the running sum.
_TAIL_REL = 1e-18
_TAIL_RUN = 20
_MAX_TERMS = 500_000


@dataclass(frozen=True)
class MLParams:
    """Parameters (a, b) of the two-parameter Mittag-Leffler function."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"MLParams requires a > 0 and b > 0, got a={self.a}, b={self.b}")


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0, relative error <= 1e-13 on [1e-3, 1e4]."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def mittag_leffler(p: MLParams, x: float) -> float:
    """E_{a,b}(x) = sum_j x^j / Gamma(a j + b) for x >= 0.

    Raises DivergenceError when the value exceeds the double range; use
    ml_kernel_scaled for damped evaluation in that regime.
    """
    if not x >= 0:
        raise ValueError(f"mittag_leffler requires x >= 0, got {x}")
    if x == 0.0:
        return math.exp(-log_gamma(p.b))
    lx = math.log(x)
    terms: list[float] = []
    total = 0.0
    prev = -math.inf
    decreasing = False
    small_run = 0
    for j in range(_MAX_TERMS):
        lt = j * lx - math.lgamma(p.a * j + p.b)
        if lt > 709.0:
            raise DivergenceError(
                f"mittag_leffler overflow: term exp({lt:.1f}) at j={j} exceeds double range"
            )
        t = math.exp(lt)
        terms.append(t)
        total += t
        if lt < prev:
            decreasing = True
        prev = lt
        if decreasing:
            small_run = small_run + 1 if t < _TAIL_REL * total else 0
            if small_run >= _TAIL_RUN:
                break
    else:
        raise NumericalError("mittag_leffler series did not converge within the term budget")
    value = math.fsum(terms)
    if math.isinf(value):
        raise DivergenceError("mittag_leffler overflow: series sum exceeds double range")
    return value


def _log_moment(k: int, c: float, j: int) -> float:
    # m_j = (1/k) Gamma((j+c+1)/k), the amplitude-1 radial moment
    return math.lgamma((j + c + 1.0) / k) - math.log(k)


def ml_kernel_scaled(k: int, c: float, r: float) -> float:
    """Weighted Mittag-Leffler density r^{2c} e^{-r^{2k}} * k E_{1/k,(1+c)/k}(r^2).

    Summed as sum_j exp((2j+2c) ln r - r^{2k} - ln m_j) with every term <= 1,
    so the e^{r^{2k}} growth never materializes.  At r = 0 the value is 0 for
    c > 0 and 1/m_0 for c = 0; for c < 0 it diverges (DivergenceError).
    """
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"ml_kernel_scaled requires integer k >= 1, got {k}")
    if not c > -1:
        raise ValueError(f"ml_kernel_scaled requires c > -1, got {c}")
    if not r >= 0:
        raise ValueError(f"ml_kernel_scaled requires r >= 0, got {r}")
    if r == 0.0:
        if c > 0:
            return 0.0
        if c == 0:
            return math.exp(-_log_moment(k, c, 0))
        raise DivergenceError("density diverges at r = 0 for c < 0")
    lr = math.log(r)
    damp = r ** (2 * k)
    terms: list[float] = []
    total = 0.0
    prev = -math.inf
    decreasing = False
    small_run = 0
    for j in range(_MAX_TERMS):
        lt = (2 * j + 2 * c) * lr - damp - _log_moment(k, c, j)
        t = math.exp(lt)
        terms.append(t)
        total += t
        if lt < prev:
            decreasing = True
        prev = lt
        if decreasing:
            small_run = small_run + 1 if t < _TAIL_REL * total else 0
            if small_run >= _TAIL_RUN:
                break
    else:
        raise NumericalError("ml_kernel_scaled series did not converge within the term budget")
    return math.fsum(terms)
