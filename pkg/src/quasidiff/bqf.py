"""Best quadratic fit q(t) = alpha t + gamma t^2 / 2 to a signal on [0, T].

Three routes to the same minimiser:

* ``fit_closed_form``: weight functions H and G applied term by term;
* ``fit_via_moments`` on ``compute_moments``: solve the 2x2 normal
  equations from I1 = int t f and I2 = int t^2 f;
* ``fit_numeric_oracle``: discrete trapezoid-weighted least squares on
  a sampled curve, independent of both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .signals import QuasiPeriodicSignal, SampledCurve
from .specfun import CancellingFunction, eval_G, eval_H

# I1 / (a T^2) and I2 / (a T^3) for a single term, as functions of mu = nu T
_moment1 = CancellingFunction(Fraction(1, 2), -1, -1, 1, 0)
_moment2 = CancellingFunction(Fraction(1, 3), -1, -2, 0, 2)


@dataclass(frozen=True)
class QuadraticFit:
    alpha_star: float
    gamma_star: float
    T: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.alpha_star * t + 0.5 * self.gamma_star * t * t


@dataclass(frozen=True)
class Moments:
    I1: float
    I2: float


def _check_T(T):
    if not (math.isfinite(T) and T > 0):
        raise ValueError(f"T must be positive and finite, got {T!r}")


def fit_closed_form(sig: QuasiPeriodicSignal, T: float) -> QuadraticFit:
    _check_T(T)
    mu = sig.nu * T
    gamma = 40.0 / T**2 * math.fsum(sig.a * eval_H(mu))
    alpha = 12.0 / T * math.fsum(sig.a * eval_G(mu))
    return QuadraticFit(alpha, gamma, float(T))


def compute_moments(sig: QuasiPeriodicSignal, T: float) -> Moments:
    """Analytic I1 = int_0^T t f dt and I2 = int_0^T t^2 f dt."""
    _check_T(T)
    mu = sig.nu * T
    i1 = T**2 * math.fsum(sig.a * _moment1(mu))
    i2 = T**3 * math.fsum(sig.a * _moment2(mu))
    return Moments(i1, i2)


def fit_via_moments(moments: Moments, T: float) -> QuadraticFit:
    _check_T(T)
    i1, i2 = moments.I1, moments.I2
    alpha = 12.0 / T**4 * (4.0 * T * i1 - 5.0 * i2)
    gamma = 40.0 / T**5 * (-3.0 * T * i1 + 4.0 * i2)
    return QuadraticFit(alpha, gamma, float(T))


def trapezoid_weights(t: np.ndarray) -> np.ndarray:
    dt = np.diff(t)
    w = np.zeros_like(t)
    w[:-1] += dt / 2
    w[1:] += dt / 2
    return w


def fit_numeric_oracle(curve: SampledCurve) -> QuadraticFit:
    """Weighted discrete least squares with trapezoid weights."""
    t, f = curve.t, curve.f
    if t.size < 3:
        raise ValueError("need at least 3 samples")
    w = trapezoid_weights(t)
    # basis columns t and t^2/2
    b1, b2 = t, 0.5 * t * t
    gram = np.array([[np.dot(w * b1, b1), np.dot(w * b1, b2)],
                     [np.dot(w * b2, b1), np.dot(w * b2, b2)]])
    rhs = np.array([np.dot(w * b1, f), np.dot(w * b2, f)])
    det = np.linalg.det(gram)
    if not det > 1e-300 * max(1.0, np.abs(gram).max()) ** 2:
        raise np.linalg.LinAlgError("singular normal matrix: sample times are degenerate")
    alpha, gamma = np.linalg.solve(gram, rhs)
    return QuadraticFit(float(alpha), float(gamma), float(t[-1]))
