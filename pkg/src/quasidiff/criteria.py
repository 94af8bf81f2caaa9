"""Diffusion criterion, its sufficient conditions, and the diffusion coefficient."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bqf import fit_closed_form
from .signals import QuasiPeriodicSignal
from .specfun import SpecialFunctionConstants, constants, mu_of_epsilon

CURIOUS_T = 0.5


class NotDiffusiveError(ValueError):
    """Raised when a diffusion coefficient is requested but gamma* > 0."""


@dataclass(frozen=True)
class Theorem3Record:
    epsilon: float
    mu_eps: float
    S: float
    U: float
    A: float
    R: float
    B: float
    holds: bool


@dataclass(frozen=True)
class CriterionReport:
    gamma_star: float
    diffusive: bool
    theorem2_holds: bool
    A: float
    theorem3: Optional[Theorem3Record] = None
    D: Optional[float] = None
    degenerate: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class MomentBound:
    lhs: float
    rhs: float
    satisfied: bool


def _consts(consts: Optional[SpecialFunctionConstants]) -> SpecialFunctionConstants:
    return consts if consts is not None else constants()


def theorem2_check(sig: QuasiPeriodicSignal, T: float,
                   consts: SpecialFunctionConstants | None = None) -> bool:
    """True iff every nu_n T exceeds the last zero of H."""
    if len(sig) == 0:
        return True
    return bool(np.min(sig.nu * T) > _consts(consts).mu_zero)


def theorem3_check(sig: QuasiPeriodicSignal, T: float, epsilon: float,
                   consts: SpecialFunctionConstants | None = None) -> Theorem3Record:
    if not (0.0 < epsilon < 1.0 / 6.0):
        raise ValueError(f"epsilon must lie in (0, 1/6), got {epsilon!r}")
    c = _consts(consts)
    mu_eps = mu_of_epsilon(epsilon)
    mu = sig.nu * T
    low = mu <= mu_eps
    A = sig.total_amplitude
    S = math.fsum(sig.a[low])
    U = math.fsum(sig.a[~low])
    B = (1.0 / 6.0 - epsilon) / c.h_max
    R = B * A / (1.0 + B)
    # S <= B U rearranges to S <= B A / (1 + B)
    holds = S <= R
    if holds:
        gamma = fit_closed_form(sig, T).gamma_star
        # rounding slack proportional to the amplitude scale
        assert gamma <= 1e-12 * (40.0 / T**2) * max(A, 1e-300), (
            f"theorem 3 soundness violated: gamma*={gamma}")
    return Theorem3Record(epsilon=float(epsilon), mu_eps=mu_eps, S=S, U=U, A=A, R=R, B=B,
                          holds=bool(holds))


def default_epsilon_grid(n: int = 64, lo: float = 1e-4) -> np.ndarray:
    """Logarithmic grid on [lo, 1/6), excluding the endpoint 1/6."""
    return np.geomspace(lo, 1.0 / 6.0, n + 1)[:-1]


def theorem3_scan(sig: QuasiPeriodicSignal, T: float, epsilon_grid=None,
                  consts: SpecialFunctionConstants | None = None) -> Optional[Theorem3Record]:
    """First epsilon on the grid for which the Theorem 3 hypothesis holds, else None."""
    grid = default_epsilon_grid() if epsilon_grid is None else epsilon_grid
    for eps in grid:
        rec = theorem3_check(sig, T, float(eps), consts)
        if rec.holds:
            return rec
    return None


def moment_bound_check(sig: QuasiPeriodicSignal, T: float, epsilon: float,
                       consts: SpecialFunctionConstants | None = None) -> MomentBound:
    """Check sum a <= (1 + B) (sum a nu^4) (T / mu(eps))^4 under Theorem 3."""
    rec = theorem3_check(sig, T, epsilon, consts)
    if not rec.holds:
        raise ValueError(
            f"moment bound requires the Theorem 3 hypothesis at epsilon={epsilon}: "
            f"S={rec.S:.6g} > R={rec.R:.6g}")
    lhs = rec.S + rec.U
    rhs = (1.0 + rec.B) * math.fsum(sig.a * sig.nu**4) * (T / rec.mu_eps) ** 4
    return MomentBound(lhs=lhs, rhs=rhs, satisfied=bool(lhs <= rhs * (1 + 1e-12)))


def diffusion_coefficient(sig: QuasiPeriodicSignal, T: float) -> float:
    """D = alpha* = (12/T) sum a G(nu T); only defined when gamma* <= 0."""
    fit = fit_closed_form(sig, T)
    if fit.gamma_star > 0:
        raise NotDiffusiveError(
            f"diffusion criterion fails (gamma*={fit.gamma_star:.12g} > 0); D is undefined")
    return fit.alpha_star


def diffusion_criterion(sig: QuasiPeriodicSignal, T: float, epsilon: float | None = None,
                        scan: bool = False,
                        consts: SpecialFunctionConstants | None = None) -> CriterionReport:
    c = _consts(consts)
    fit = fit_closed_form(sig, T)
    gamma = fit.gamma_star
    diffusive = gamma <= 0
    notes = []
    degenerate = gamma == 0
    if degenerate:
        notes.append("gamma* == 0: boundary case, counted as diffusive")
    t3 = None
    if epsilon is not None:
        t3 = theorem3_check(sig, T, epsilon, c)
    elif scan:
        t3 = theorem3_scan(sig, T, consts=c)
        if t3 is None:
            notes.append("theorem 3 hypothesis fails on every epsilon of the scan grid")
    return CriterionReport(
        gamma_star=gamma,
        diffusive=diffusive,
        theorem2_holds=theorem2_check(sig, T, c),
        A=sig.total_amplitude,
        theorem3=t3,
        D=fit.alpha_star if diffusive else None,
        degenerate=degenerate,
        notes=tuple(notes),
    )


def curious_gamma_closed_form(n_terms: int, T: float = CURIOUS_T) -> float:
    """gamma* for the curious signal at T = 1/2 via the reduced series.

    With mu_n = pi n^2 every sin(mu_n) vanishes and cos(mu_n) = (-1)^n, so
    H(mu_n) = -1/6 - (5 (-1)^n + 3) / (pi^2 n^4).
    """
    if T != CURIOUS_T:
        raise ValueError("the reduced series is only valid for T = 0.5")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    n = np.arange(1, n_terms + 1, dtype=float)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    terms = (1.0 / n**2) * (-1.0 / 6.0 - (5.0 * sign + 3.0) / (np.pi**2 * n**4))
    return 40.0 / T**2 * math.fsum(terms)


def curious_gamma_limit() -> float:
    """Exact n -> infinity limit of ``curious_gamma_closed_form``.

    Uses sum 1/n^2 = pi^2/6, sum (-1)^n/n^6 = -31 pi^6/30240, sum 1/n^6 = pi^6/945.
    """
    pi = math.pi
    return 160.0 * (-pi**2 / 36.0 + 31.0 * pi**4 / 6048.0 - pi**4 / 315.0)
