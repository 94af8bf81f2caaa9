import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from quasidiff.bqf import (Moments, compute_moments, fit_closed_form, fit_numeric_oracle,
                           fit_via_moments)
from quasidiff.signals import QuasiPeriodicSignal, SampledCurve, curious_signal, sample_curve

pos = st.floats(min_value=1e-3, max_value=10)
signals_st = st.lists(st.tuples(pos, pos), min_size=1, max_size=20).map(
    QuasiPeriodicSignal.from_terms)
T_st = st.floats(min_value=0.1, max_value=5)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_single_term_pi():
    fit = fit_closed_form(QuasiPeriodicSignal.from_terms([(1.0, math.pi)]), 1.0)
    assert fit.gamma_star == pytest.approx(40 * (-1 / 6 + 2 / math.pi**2), rel=1e-13)
    assert fit.gamma_star == pytest.approx(1.439028, abs=1e-6)
    assert fit.alpha_star == pytest.approx(12 * (1 / 3 - 2 / math.pi**2), rel=1e-13)
    assert fit.alpha_star == pytest.approx(1.568292, abs=1e-6)


def test_zero_amplitudes():
    sig = QuasiPeriodicSignal.from_terms([(0.0, 1.0), (0.0, 7.0)])
    fit = fit_closed_form(sig, 2.0)
    assert (fit.alpha_star, fit.gamma_star) == (0.0, 0.0)
    m = compute_moments(sig, 2.0)
    assert (m.I1, m.I2) == (0.0, 0.0)
    assert fit_via_moments(Moments(0.0, 0.0), 3.0).alpha_star == 0.0


def test_moments_full_period():
    T, nu = 1.3, 2 * math.pi / 1.3
    m = compute_moments(QuasiPeriodicSignal.from_terms([(1.0, nu)]), T)
    assert m.I1 == pytest.approx(T**2 / 2, rel=1e-12)
    assert m.I2 == pytest.approx(T**3 / 3 - 2 * T / nu**2, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_moments_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    n = 6
    sig = QuasiPeriodicSignal(rng.uniform(0.1, 3, n), rng.uniform(0.05, 8, n))
    T = rng.uniform(0.2, 4)
    f = lambda t: float(np.sum(sig.a * (1 - np.cos(sig.nu * t))))
    i1 = quad(lambda t: t * f(t), 0, T, epsabs=0, epsrel=1e-12, limit=200)[0]
    i2 = quad(lambda t: t * t * f(t), 0, T, epsabs=0, epsrel=1e-12, limit=200)[0]
    m = compute_moments(sig, T)
    assert rel(m.I1, i1) < 1e-8 and rel(m.I2, i2) < 1e-8


def test_linear_function_is_own_fit():
    T = 2.0
    fit = fit_via_moments(Moments(T**3 / 3, T**4 / 4), T)
    assert fit.alpha_star == pytest.approx(1.0, rel=1e-14)
    assert fit.gamma_star == pytest.approx(0.0, abs=1e-13)


def test_oracle_exact_quadratic():
    t = np.linspace(0, 3, 40)
    fit = fit_numeric_oracle(SampledCurve(t, 2 * t + 0.5 * t**2, 3.0))
    assert fit.alpha_star == pytest.approx(2.0, abs=1e-9)
    assert fit.gamma_star == pytest.approx(1.0, abs=1e-9)


def test_oracle_zero_curve_and_degenerate():
    t = np.linspace(0, 1, 10)
    fit = fit_numeric_oracle(SampledCurve(t, np.zeros_like(t), 1.0))
    assert (fit.alpha_star, fit.gamma_star) == (0.0, 0.0)
    with pytest.raises(ValueError):
        fit_numeric_oracle(SampledCurve(t[:2], t[:2], 1.0))
    with pytest.raises(np.linalg.LinAlgError):
        # bypasses SampledCurve validation, which already forbids repeated times
        fit_numeric_oracle(type("C", (), {"t": np.zeros(5), "f": np.zeros(5)})())


def test_oracle_curious_T_half():
    sig = curious_signal(1000)
    closed = fit_closed_form(sig, 0.5)
    oracle = fit_numeric_oracle(sample_curve(sig, 0.5, 10_000))
    assert rel(oracle.gamma_star, closed.gamma_star) < 0.01


def test_oracle_converges_second_order():
    sig = QuasiPeriodicSignal.from_terms([(1.0, 3.0), (0.5, 11.0), (2.0, 0.7)])
    T = 2.5
    ref = fit_closed_form(sig, T).gamma_star
    errs = [abs(fit_numeric_oracle(sample_curve(sig, T, n)).gamma_star - ref)
            for n in (201, 401, 801, 1601)]
    ratios = [errs[i] / errs[i + 1] for i in range(3)]
    assert all(3.5 < r < 4.5 for r in ratios)


@given(signals_st, T_st)
def test_routes_agree(sig, T):
    # 4T I1 - 5I2 and 4I2 - 3T I1 cancel when every mu is small; measure the
    # error against the size of the cancelling terms
    a = fit_closed_form(sig, T)
    m = compute_moments(sig, T)
    b = fit_via_moments(m, T)
    scale_a = 12 / T**4 * (4 * T * abs(m.I1) + 5 * abs(m.I2))
    scale_g = 40 / T**5 * (3 * T * abs(m.I1) + 4 * abs(m.I2))
    assert abs(b.alpha_star - a.alpha_star) <= 1e-10 * max(abs(a.alpha_star), 1e-4 * scale_a)
    assert abs(b.gamma_star - a.gamma_star) <= 1e-10 * max(abs(a.gamma_star), 1e-4 * scale_g)


def test_routes_agree_uniform_random():
    rng = np.random.default_rng(20)
    for _ in range(300):
        n = rng.integers(1, 21)
        sig = QuasiPeriodicSignal(rng.uniform(0, 10, n) + 1e-12, rng.uniform(0, 10, n) + 1e-12)
        T = rng.uniform(0.1, 5)
        a = fit_closed_form(sig, T)
        b = fit_via_moments(compute_moments(sig, T), T)
        assert rel(b.alpha_star, a.alpha_star) < 1e-10
        assert rel(b.gamma_star, a.gamma_star) < 1e-10


@given(signals_st, T_st, st.floats(0.01, 100))
def test_amplitude_linearity(sig, T, c):
    a = fit_closed_form(sig, T)
    b = fit_closed_form(QuasiPeriodicSignal(c * sig.a, sig.nu), T)
    assert b.alpha_star == pytest.approx(c * a.alpha_star, rel=1e-12, abs=1e-300)
    assert b.gamma_star == pytest.approx(c * a.gamma_star, rel=1e-12, abs=1e-12 * c * abs(a.alpha_star))


@given(signals_st, T_st, st.floats(0.1, 10))
def test_time_scaling(sig, T, c):
    a = fit_closed_form(sig, T)
    b = fit_closed_form(QuasiPeriodicSignal(sig.a, c * sig.nu), T / c)
    assert b.alpha_star == pytest.approx(c * a.alpha_star, rel=1e-10)
    assert b.gamma_star == pytest.approx(c * c * a.gamma_star, rel=1e-9,
                                         abs=1e-10 * c * c * 40 / T**2 * sig.total_amplitude)


@pytest.mark.parametrize("T", [0.0, -1.0, math.inf, math.nan])
def test_rejects_bad_T(T):
    sig = curious_signal(2)
    with pytest.raises(ValueError):
        fit_closed_form(sig, T)
    with pytest.raises(ValueError):
        compute_moments(sig, T)
