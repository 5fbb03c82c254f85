"""Certified truncation bounds for hexagonal lattice sums.

All bounds follow one packing argument.  Disks of radius r*/2 around lattice
points are disjoint, so for a nonnegative summand g that is decreasing beyond
the cutoff,

    sum_{|x| > R} g(|x|)  <=  (8/r*^2) * integral_{R - r*}^inf (r + r*) g(r) dr,

and 8/r*^2 = 4*sqrt(3) <= (2/sqrt(3)) * 2*pi, the constant used below.  The
integrals reduce to Gaussian moment integrals evaluated with erfc, or to
power-law integrals for Riesz tails.  These bounds are deliberately slack by
a small constant factor; they are cheap, provable, and only cost a slightly
larger truncation radius.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc

from .geometry import R_STAR

__all__ = [
    "gaussian_moment_tail",
    "gaussian_lattice_tail",
    "poly_gaussian_lattice_tail",
    "riesz_lattice_tail",
    "COVERING_CONST",
]

# (2/sqrt(3)) * 2*pi, an upper bound for the packing constant 8/r*^2
COVERING_CONST = (2.0 / math.sqrt(3.0)) * 2.0 * math.pi


def gaussian_moment_tail(A: float, a: float, coeffs) -> float:
    """integral_A^inf (sum_k c_k t^k) exp(-a t^2) dt for A >= 0, a > 0.

    Uses the standard recursion I_k = ((k-1) I_{k-2} + A^{k-1} e^{-aA^2})/(2a)
    with I_0 from erfc and I_1 in closed form.
    """
    if A < 0:
        raise ValueError("lower limit must be nonnegative")
    expA = math.exp(-a * A * A)
    I = [math.sqrt(math.pi / a) * erfc(math.sqrt(a) * A) / 2.0, expA / (2.0 * a)]
    for k in range(2, len(coeffs)):
        I.append(((k - 1) * I[k - 2] + A ** (k - 1) * expA) / (2.0 * a))
    return float(sum(c * I[k] for k, c in enumerate(coeffs) if c != 0.0))


def gaussian_lattice_tail(R: float, alpha: float, d: float = 0.0) -> float:
    """Bound on sum over |x| > R of exp(-pi*alpha*(|x| - d)^2).

    Valid for R >= r* + d (so the shifted summand is decreasing past the
    cutoff).  With d = 2*||p|| this also covers tails of perturbed sums via
    |x + delta| >= |x| - 2*||p||.
    """
    A = R - R_STAR - d
    if A < 0:
        raise ValueError("truncation radius too small for a certified tail")
    a = math.pi * alpha
    # integral_{R-r*}^inf (r + r*) e^{-a (r-d)^2} dr, substituting t = r - d
    return COVERING_CONST * gaussian_moment_tail(A, a, [d + R_STAR, 1.0])


def poly_gaussian_lattice_tail(R: float, a: float, coeffs, shift: float = 0.0) -> float:
    """Bound on sum over |x| > R of P(|x| - shift) * exp(-a (|x| - shift)^2)
    where P(t) = sum_k c_k t^k has nonnegative coefficients.

    Requires R - r* - shift >= sqrt(k_max / (2a)) so that every monomial
    t^k e^{-a t^2} is decreasing beyond the cutoff.
    """
    A = R - R_STAR - shift
    kmax = max((k for k, c in enumerate(coeffs) if c), default=0)
    if A < 0 or A * A * 2.0 * a < kmax:
        raise ValueError("truncation radius too small for a certified tail")
    # (r + r*) P(t) with r = t + shift  ->  (t + shift + r*) P(t)
    prod = [0.0] * (len(coeffs) + 1)
    for k, c in enumerate(coeffs):
        prod[k] += c * (shift + R_STAR)
        prod[k + 1] += c
    return COVERING_CONST * gaussian_moment_tail(A, a, prod)


def riesz_lattice_tail(R: float, s: float, d: float = 0.0) -> float:
    """Bound on sum over |x| > R of (|x| - d)^(-s), for s > 2, R > r* + d."""
    A = R - R_STAR - d
    if A <= 0:
        raise ValueError("truncation radius too small for a certified tail")
    # integral_{R-r*}^inf (r + r*) (r - d)^(-s) dr  with t = r - d
    val = A ** (2.0 - s) / (s - 2.0) + (d + R_STAR) * A ** (1.0 - s) / (s - 1.0)
    return COVERING_CONST * val


def _self_test() -> None:
    # spot check: the bound dominates a brute-force tail
    from .geometry import enumerate_ball

    pts = enumerate_ball(30.0)
    r = np.sqrt((pts**2).sum(axis=1))
    for R in (3.0, 5.0):
        for alpha in (0.5, 1.0, 3.0):
            true = np.exp(-math.pi * alpha * r[r > R] ** 2).sum()
            assert true <= gaussian_lattice_tail(R, alpha), (R, alpha)


if __name__ == "__main__":
    _self_test()
