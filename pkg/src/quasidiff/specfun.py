"""The H and G weight functions and the constants derived from H.

Both functions have the shape

    c0 + A sin(mu)/mu + B cos(mu)/mu**2 + C/mu**2 + D sin(mu)/mu**3

whose 1/mu**2 poles and constant term cancel at the origin.  Below
``SERIES_SWITCH`` they are evaluated from their Taylor series, which is
generated exactly (rational coefficients) from the five constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

SERIES_SWITCH = 1.5
SERIES_TERMS = 16

# Root/maximum search grid: fine step up to SCAN_BOUND, coarser beyond
# (where |H''| <= ~2/mu, so the interpolation error stays comparable).
SCAN_BOUND = 100.0
SCAN_STEP = 1e-3
TAIL_STEP = 1e-2
ROOT_XTOL = 1e-12


def _series_coefficients(c0, a, b, c, d, n_terms=SERIES_TERMS):
    """Coefficients of mu**(2m), m = 0..n_terms-1, for the form above."""
    c0, a, b, c, d = (Fraction(x) for x in (c0, a, b, c, d))
    if b + c + d != 0:
        raise ValueError("1/mu**2 terms do not cancel")
    coeffs = [c0 + a - b / 2 - d / 6]
    for m in range(1, n_terms):
        sign = (-1) ** m
        coeffs.append(
            sign * a / math.factorial(2 * m + 1)
            - sign * b / math.factorial(2 * m + 2)
            - sign * d / math.factorial(2 * m + 3)
        )
    return coeffs


class CancellingFunction:
    """c0 + a sin(mu)/mu + (b cos(mu) + c)/mu^2 + d sin(mu)/mu^3, series below the switch."""

    def __init__(self, c0, a, b, c, d):
        self.c0, self.a, self.b, self.c, self.d = (float(x) for x in (c0, a, b, c, d))
        exact = _series_coefficients(c0, a, b, c, d)
        self.exact_coefficients = exact
        # Horner in mu**2, highest power first.
        self._horner = np.array([float(x) for x in reversed(exact)])

    def direct(self, mu):
        mu = np.asarray(mu, dtype=float)
        s, co = np.sin(mu), np.cos(mu)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (
                self.c0
                + self.a * s / mu
                + (self.b * co + self.c) / mu**2
                + self.d * s / mu**3
            )

    def series(self, mu):
        mu = np.asarray(mu, dtype=float)
        return np.polyval(self._horner, mu * mu)

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        if not np.all(np.isfinite(mu)) or np.any(mu < 0):
            raise ValueError("mu must be finite and nonnegative")
        small = mu < SERIES_SWITCH
        out = np.where(small, self.series(np.where(small, mu, 0.0)),
                       self.direct(np.where(small, 1.0, mu)))
        return out if out.ndim else float(out)


_H = CancellingFunction(Fraction(-1, 6), -1, -5, -3, 8)
_G = CancellingFunction(Fraction(1, 3), 1, 6, 4, -10)


def eval_H(mu):
    """H(mu) = -1/6 - sin/mu - 5cos/mu^2 - 3/mu^2 + 8sin/mu^3, mu >= 0.

    Accepts scalars or arrays; H(mu) ~ mu**2/40 near zero and tends
    to -1/6 at infinity.
    """
    return _H(mu)


def eval_G(mu):
    """G(mu) = 1/3 + sin/mu + 6cos/mu^2 + 4/mu^2 - 10sin/mu^3, mu >= 0.

    G(mu) ~ mu**4/504 near zero and tends to 1/3 at infinity.
    """
    return _G(mu)


def h_envelope(mu):
    """Upper bound on |H(mu) + 1/6| valid for mu > 0."""
    mu = np.asarray(mu, dtype=float)
    return 1.0 / mu + 8.0 / mu**2 + 8.0 / mu**3


def envelope_bound(level_gap: float) -> float:
    """Smallest mu past which |H + 1/6| < level_gap is certified."""
    if level_gap <= 0:
        raise ValueError("level_gap must be positive")
    f = lambda m: float(h_envelope(m)) - level_gap
    lo, hi = 1.0, 2.0
    while f(hi) > 0:
        hi *= 2.0
    return brentq(f, lo, hi, xtol=1e-9)


@lru_cache(maxsize=4)
def _scan_grid(upper: float):
    upper = max(upper, SCAN_BOUND)
    n_fine = int(round(SCAN_BOUND / SCAN_STEP))
    fine = np.linspace(0.0, SCAN_BOUND, n_fine + 1)
    if upper > SCAN_BOUND:
        n_tail = int(math.ceil((upper - SCAN_BOUND) / TAIL_STEP))
        tail = SCAN_BOUND + TAIL_STEP * np.arange(1, n_tail + 1)
        grid = np.concatenate([fine, tail])
    else:
        grid = fine
    values = eval_H(grid)
    # suffix maximum, nonincreasing
    sufmax = np.maximum.accumulate(values[::-1])[::-1]
    grid.setflags(write=False)
    values.setflags(write=False)
    sufmax.setflags(write=False)
    return grid, values, sufmax


def _interp_slack(mu: float) -> float:
    step = SCAN_STEP if mu <= SCAN_BOUND else TAIL_STEP
    # max |H''| <= 1/mu + O(1/mu^2); 2.0 is a safe global bound for mu >= 0.5
    curvature = min(2.0, 1.0 / max(mu, 1e-12) + 20.0 / max(mu, 1e-12) ** 2)
    return curvature * step * step / 8.0


def last_crossing(level: float) -> float:
    """Largest mu with H(mu) = level, for -1/6 < level <= 0.

    Returns inf{mu : H <= level on [mu, inf)}.  The search covers
    [0, M] where the envelope certifies H < level beyond M.
    """
    if not -1.0 / 6.0 < level <= 0.0:
        raise ValueError("level must lie in (-1/6, 0]")
    upper = envelope_bound(level + 1.0 / 6.0)
    # share one cached grid between nearby levels
    upper = 2.0 ** math.ceil(math.log2(max(upper, SCAN_BOUND)))
    grid, values, sufmax = _scan_grid(upper)
    assert float(h_envelope(grid[-1])) < level + 1.0 / 6.0

    # first index whose suffix maximum is <= level
    idx = len(sufmax) - int(np.searchsorted(sufmax[::-1], level, side="right"))
    idx = min(idx, len(grid) - 1)
    if idx == 0:
        raise RuntimeError("H never exceeds the level; scan is broken")

    lo, hi = grid[idx - 1], grid[idx]
    # A grid peak just under the level may hide a true excursion above it;
    # scan candidates from the right, the first real one is the last.
    slack = _interp_slack(grid[idx])
    near = np.nonzero(values[idx:] > level - slack)[0]
    for off in near[::-1]:
        i = idx + int(off)
        if i + 1 >= len(grid):
            continue
        res = minimize_scalar(lambda m: -eval_H(m), bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        if -res.fun > level:
            lo, hi = res.x, grid[i + 1]
            break
    return brentq(lambda m: eval_H(m) - level, lo, hi, xtol=ROOT_XTOL)


@dataclass(frozen=True)
class SpecialFunctionConstants:
    mu_zero: float
    h_max: float
    mu_at_max: float


def find_mu_zero() -> float:
    """Last zero of H on (0, inf)."""
    return _constants().mu_zero


def find_H_max() -> tuple[float, float]:
    """(mu_at_max, h_max) for the global maximum of H on [0, inf)."""
    c = _constants()
    return c.mu_at_max, c.h_max


@lru_cache(maxsize=1)
def _constants() -> SpecialFunctionConstants:
    mu_zero = last_crossing(0.0)

    grid, values, _ = _scan_grid(SCAN_BOUND)
    # beyond SCAN_BOUND the envelope keeps H below zero < h_max
    assert float(h_envelope(SCAN_BOUND)) < 1.0 / 6.0
    i = int(np.argmax(values))
    res = minimize_scalar(lambda m: -eval_H(m), bounds=(grid[i - 1], grid[i + 1]),
                          method="bounded", options={"xatol": 1e-12})
    mu_at_max, h_max = float(res.x), float(-res.fun)
    if h_max < values[i]:
        mu_at_max, h_max = float(grid[i]), float(values[i])
    return SpecialFunctionConstants(mu_zero=mu_zero, h_max=h_max, mu_at_max=mu_at_max)


def constants() -> SpecialFunctionConstants:
    return _constants()


@lru_cache(maxsize=256)
def mu_of_epsilon(epsilon: float) -> float:
    """inf{mu : H(m) <= -1/6 + epsilon for all m >= mu}, 0 < epsilon <= 1/6."""
    if not (0.0 < epsilon <= 1.0 / 6.0):
        raise ValueError(f"epsilon must lie in (0, 1/6], got {epsilon!r}")
    if epsilon == 1.0 / 6.0:
        return find_mu_zero()
    return last_crossing(-1.0 / 6.0 + epsilon)
