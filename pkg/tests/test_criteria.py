import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from quasidiff.bqf import fit_closed_form
from quasidiff.criteria import (NotDiffusiveError, curious_gamma_closed_form, curious_gamma_limit,
                                default_epsilon_grid, diffusion_coefficient, diffusion_criterion,
                                moment_bound_check, theorem2_check, theorem3_check, theorem3_scan)
from quasidiff.signals import QuasiPeriodicSignal, curious_signal
from quasidiff.specfun import eval_G, find_H_max, find_mu_zero, mu_of_epsilon

MU_ZERO = find_mu_zero()
H_MAX = find_H_max()[1]
EPS_GRID = default_epsilon_grid(16, lo=1e-3)


def single(a, mu, T=1.0):
    return QuasiPeriodicSignal.from_terms([(a, mu / T)])


# --- diffusion criterion --------------------------------------------------

def test_single_term_two_pi_is_diffusive():
    rep = diffusion_criterion(single(1.0, 2 * math.pi), 1.0)
    assert rep.diffusive and rep.gamma_star < 0
    assert rep.D == pytest.approx(12 * (1 / 3 + 5 / (2 * math.pi**2)), rel=1e-13)
    assert rep.D == pytest.approx(7.0397, abs=1e-4)


def test_single_term_pi_is_not_diffusive():
    rep = diffusion_criterion(single(1.0, math.pi), 1.0)
    assert not rep.diffusive and rep.D is None
    with pytest.raises(NotDiffusiveError, match="diffusion criterion"):
        diffusion_coefficient(single(1.0, math.pi), 1.0)


def test_curious_is_diffusive():
    rep = diffusion_criterion(curious_signal(1000), 0.5)
    assert rep.diffusive and not rep.theorem2_holds


def test_zero_amplitude_boundary_is_diffusive_and_flagged():
    rep = diffusion_criterion(QuasiPeriodicSignal.from_terms([(0.0, 1.0)]), 1.0)
    assert rep.gamma_star == 0 and rep.diffusive and rep.degenerate
    assert rep.D == 0.0
    assert diffusion_coefficient(QuasiPeriodicSignal.from_terms([(0.0, 3.0)]), 2.0) == 0.0


def test_curious_diffusion_coefficient_against_series():
    # G(pi n^2) = 1/3 + (6 (-1)^n + 4) / (pi^2 n^4); the infinite sum is
    # 24 (pi^2/18 - 31 pi^4/5040 + 4 pi^4/945)
    n = np.arange(1, 10**6 + 1, dtype=float)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    direct = 24 * math.fsum((1 / n**2) * (1 / 3 + (6 * sign + 4) / (math.pi**2 * n**4)))
    D = diffusion_coefficient(curious_signal(10**6), 0.5)
    assert D == pytest.approx(direct, rel=1e-9)
    limit = 24 * (math.pi**2 / 18 - 31 * math.pi**4 / 5040 + 4 * math.pi**4 / 945)
    assert abs(D - limit) < 24 / 3 / 10**6 * 1.01


# --- theorem 2 ------------------------------------------------------------

def test_theorem2_examples():
    sig = QuasiPeriodicSignal.from_terms([(1.0, 10.0), (2.0, 10.0)])
    assert theorem2_check(sig, 1.0)
    assert not theorem2_check(curious_signal(100), 0.5)
    assert not theorem2_check(single(1.0, MU_ZERO), 1.0)


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(1e-9, 60)), min_size=1, max_size=15),
       st.floats(0.1, 5))
def test_theorem2_soundness(terms, T):
    sig = QuasiPeriodicSignal.from_terms([(a, (MU_ZERO + d) / T) for a, d in terms])
    assert theorem2_check(sig, T)
    assert fit_closed_form(sig, T).gamma_star <= 0


# --- theorem 3 ------------------------------------------------------------

def test_theorem3_trivial_cases():
    all_high = QuasiPeriodicSignal.from_terms([(1.0, 50.0), (3.0, 80.0)])
    rec = theorem3_check(all_high, 1.0, 0.05)
    assert rec.S == 0 and rec.holds
    all_low = QuasiPeriodicSignal.from_terms([(1.0, 1.0), (3.0, 2.0)])
    rec = theorem3_check(all_low, 1.0, 0.05)
    assert rec.S == rec.A == 4.0 and not rec.holds


def test_theorem3_quantities():
    sig = curious_signal(20)
    rec = theorem3_check(sig, 0.5, 0.01)
    assert rec.B == pytest.approx((1 / 6 - 0.01) / H_MAX)
    assert rec.R == pytest.approx(rec.B * sig.total_amplitude / (1 + rec.B))
    assert rec.S + rec.U == pytest.approx(sig.total_amplitude)
    assert rec.mu_eps == mu_of_epsilon(0.01)


def test_theorem3_small_epsilon_limit():
    sig = curious_signal(10)
    rec = theorem3_check(sig, 0.5, 1e-3)
    assert rec.R / sig.total_amplitude == pytest.approx(0.73, abs=0.01)
    # B(0) = (1/6) / H_max is about 2.68, not 3
    assert (1 / 6) / H_MAX == pytest.approx(2.68, abs=0.01)


def test_curious_S_near_one_sixth():
    rec = theorem3_check(curious_signal(1000), 0.5, 1 / 6 - 1e-9)
    assert rec.S == 1.0
    assert rec.R == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("eps", [0.0, 1 / 6, -0.1, 0.3])
def test_theorem3_rejects_epsilon(eps):
    with pytest.raises(ValueError):
        theorem3_check(curious_signal(3), 0.5, eps)


def test_scan_finds_for_theorem2_signal():
    sig = QuasiPeriodicSignal.from_terms([(1.0, 10.0), (0.3, 25.0)])
    rec = theorem3_scan(sig, 1.0)
    assert rec is not None and rec.holds and rec.S == 0


def test_scan_none_for_single_pi():
    assert theorem3_scan(single(1.0, math.pi), 1.0) is None


def test_scan_curious_holds():
    # a1 = 1 is the only term below mu(eps) once mu(eps) < 4 pi
    rec = theorem3_scan(curious_signal(1000), 0.5)
    assert rec is not None
    assert rec.S == 1.0 and rec.mu_eps < 4 * math.pi and rec.holds


def test_non_necessity_regression():
    sig = QuasiPeriodicSignal.from_terms([(1.0, math.pi), (0.2, 2 * math.pi)])
    assert fit_closed_form(sig, 1.0).gamma_star < 0
    assert not theorem2_check(sig, 1.0)
    assert theorem3_scan(sig, 1.0) is None
    assert theorem3_scan(sig, 1.0, np.linspace(1e-3, 1 / 6 - 1e-3, 400)) is None


# subnormal amplitudes underflow in a * nu^4 * (T/mu)^4
amplitudes = st.one_of(st.just(0.0), st.floats(1e-6, 10))
mixed_terms = st.lists(st.tuples(amplitudes, st.floats(0.05, 200)), min_size=1, max_size=15)


@given(mixed_terms, st.floats(0.1, 5), st.sampled_from(list(EPS_GRID)))
def test_theorem3_soundness_and_moment_bound(terms, T, eps):
    sig = QuasiPeriodicSignal.from_terms([(a, mu / T) for a, mu in terms])
    rec = theorem3_check(sig, T, eps)
    if rec.holds:
        assert fit_closed_form(sig, T).gamma_star <= 1e-12 * 40 / T**2 * max(rec.A, 1e-300)
        mb = moment_bound_check(sig, T, eps)
        assert mb.satisfied


def test_moment_bound_single_term():
    mu, T, eps = 30.0, 2.0, 0.05
    sig = single(1.0, mu, T)
    mb = moment_bound_check(sig, T, eps)
    B = (1 / 6 - eps) / H_MAX
    assert mb.lhs == 1.0
    assert mb.rhs == pytest.approx((1 + B) * (mu / mu_of_epsilon(eps)) ** 4, rel=1e-12)
    assert mb.satisfied


@given(st.floats(0.01, 100))
def test_moment_bound_homogeneous(c):
    sig = QuasiPeriodicSignal.from_terms([(1.0, 20.0), (0.5, 40.0)])
    a = moment_bound_check(sig, 1.0, 0.05)
    b = moment_bound_check(QuasiPeriodicSignal(c * sig.a, sig.nu), 1.0, 0.05)
    assert b.lhs == pytest.approx(c * a.lhs) and b.rhs == pytest.approx(c * a.rhs)
    assert a.satisfied == b.satisfied


def test_moment_bound_precondition_reported():
    with pytest.raises(ValueError, match="Theorem 3"):
        moment_bound_check(single(1.0, math.pi), 1.0, 0.05)


# --- diffusion coefficient -------------------------------------------------

@given(mixed_terms, st.floats(0.1, 5))
def test_D_nonnegative(terms, T):
    sig = QuasiPeriodicSignal.from_terms([(a, mu / T) for a, mu in terms])
    assert fit_closed_form(sig, T).alpha_star >= 0
    assume(fit_closed_form(sig, T).gamma_star <= 0)
    assert diffusion_coefficient(sig, T) >= 0


# --- curious curve reduced series -------------------------------------------

def test_curious_series_matches_theorem1():
    for n in (1, 2, 7, 1000):
        assert curious_gamma_closed_form(n) == pytest.approx(
            fit_closed_form(curious_signal(n), 0.5).gamma_star, rel=1e-9)


def test_curious_series_single_term():
    assert curious_gamma_closed_form(1) == pytest.approx(160 * (-1 / 6 + 2 / math.pi**2), rel=1e-13)


def test_curious_series_negative_from_two_terms():
    assert all(curious_gamma_closed_form(n) < 0 for n in range(2, 200))


def test_curious_series_limit():
    # mpmath, 50 digits
    assert curious_gamma_limit() == pytest.approx(-13.456779502163584354, rel=1e-14)
    tail = curious_gamma_closed_form(10**6) - curious_gamma_limit()
    assert 0 < tail < 160 / 6 / 10**6 * 1.01


def test_curious_series_rejects_other_T():
    with pytest.raises(ValueError):
        curious_gamma_closed_form(10, T=1.0)
