"""Differences of squares, odd rational approximation, and small-frequency witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors


@dataclass(frozen=True)
class SquareDifferenceSolutions:
    p: int
    solutions: list[tuple[int, int]]


@dataclass(frozen=True)
class FrequencyWitness:
    b: tuple[float, ...]
    k_tuple: tuple[int, ...]
    j_tuple: tuple[int, ...]
    signed_nu: float
    nu: float
    epsilon: float


class ApproximationSearchError(RuntimeError):
    """No odd/odd approximation within the search bound."""


def _factor_pairs(p: int):
    """(q2, q1) with q2 * q1 = p and q2 > q1 >= 1, q1 ascending."""
    for q1 in divisors(p):
        q2 = p // q1
        if q2 <= q1:
            break
        yield q2, q1


def diff_of_squares(p: int) -> SquareDifferenceSolutions:
    """All (k, j), j >= 1, with k^2 - j^2 = p; largest k first.

    Each factorisation p = q2 q1 with q2 > q1 of equal parity gives
    k = (q2 + q1)/2, j = (q2 - q1)/2.  For odd p every factorisation
    qualifies; p = 2 mod 4 has none.
    """
    p = int(p)
    if p < 1:
        raise ValueError("p must be a positive integer")
    sols = [((q2 + q1) // 2, (q2 - q1) // 2)
            for q2, q1 in _factor_pairs(p) if (q2 - q1) % 2 == 0]
    return SquareDifferenceSolutions(p=p, solutions=sols)


def count_factorizations(p: int) -> int:
    """Number of ways p = q2 q1 with q2 > q1 >= 1."""
    p = int(p)
    if p < 1:
        raise ValueError("p must be a positive integer")
    return sum(1 for _ in _factor_pairs(p))


def _nearest_odd(x: float) -> int:
    return 2 * math.floor(x / 2.0) + 1


def odd_rational_approx(alpha: float, epsilon: float) -> tuple[int, int]:
    """Odd p, q > 0 with |p/q - alpha| <= epsilon, smallest q first.

    For odd q the nearest odd p satisfies |alpha q - p| <= 1, so every
    odd q >= 1/epsilon succeeds and the loop ends by ceil(1/epsilon) + 2.
    """
    if not (alpha > 0 and epsilon > 0):
        raise ValueError("alpha and epsilon must be positive")
    bound = math.ceil(2.0 / epsilon) + 3
    for q in range(1, bound + 1, 2):
        p = _nearest_odd(alpha * q)
        if abs(p / q - alpha) <= epsilon:
            return p, q
    raise ApproximationSearchError(f"no odd approximation of {alpha} within q <= {bound}")


def odd_diophantine_approx(alpha: float, epsilon: float, max_q: int | None = None,
                           min_value: int = 3) -> tuple[int, int]:
    """Odd p, q >= min_value with 0 < |q*alpha - p| < epsilon, smallest q first."""
    if not (alpha > 0 and epsilon > 0):
        raise ValueError("alpha and epsilon must be positive")
    if max_q is None:
        max_q = max(1000, int(math.ceil(1000.0 / epsilon**2)))
    start = min_value if min_value % 2 else min_value + 1
    for q in range(start, max_q + 1, 2):
        x = alpha * q
        p = _nearest_odd(x)
        if p < min_value:
            continue
        if 0 < abs(x - p) < epsilon:
            return p, q
    raise ApproximationSearchError(
        f"alpha={alpha!r} has no odd/odd approximation |q*alpha - p| < {epsilon} with "
        f"q <= {max_q}; alpha behaves as rational at this accuracy")


def _canonical_pair(p: int) -> tuple[int, int]:
    return (p + 1) // 2, (p - 1) // 2


def witness_nu_exact(b, k_tuple, j_tuple) -> Fraction:
    """sum b_r (k_r^2 - j_r^2) in exact rational arithmetic on the given floats."""
    return sum((Fraction(br) * (k * k - j * j) for br, k, j in zip(b, k_tuple, j_tuple)),
               Fraction(0))


def small_frequency_witness(b, epsilon: float, max_q: int | None = None) -> FrequencyWitness:
    """Index tuples with 0 < |sum b_r (k_r^2 - j_r^2)| < epsilon * b_1.

    With alpha = b_2/b_1, pick odd p, q with |q alpha - p| < epsilon; then
    p = k_1^2 - j_1^2 and q = j_2^2 - k_2^2 via the canonical difference of
    squares, giving nu = b_1 (p - q alpha).  Remaining indices are 1.
    """
    b = tuple(float(x) for x in b)
    if len(b) < 2:
        raise ValueError("need at least two frequency constants")
    if any(not (x > 0 and math.isfinite(x)) for x in b):
        raise ValueError("frequency constants must be positive and finite")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    alpha = b[1] / b[0]
    p, q = odd_diophantine_approx(alpha, epsilon, max_q=max_q)
    k1, j1 = _canonical_pair(p)
    j2, k2 = _canonical_pair(q)
    pad = (1,) * (len(b) - 2)
    k_tuple, j_tuple = (k1, k2) + pad, (j1, j2) + pad
    signed = float(witness_nu_exact(b, k_tuple, j_tuple))
    if not 0 < abs(signed) < epsilon * b[0]:
        # q*alpha was rounded; the exact value decides
        raise ApproximationSearchError(
            f"witness rounding failure: |nu|={abs(signed)!r} not in (0, {epsilon * b[0]!r})")
    return FrequencyWitness(b=b, k_tuple=k_tuple, j_tuple=j_tuple, signed_nu=signed,
                            nu=abs(signed), epsilon=float(epsilon))
