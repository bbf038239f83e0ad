import math

import numpy as np
import pytest

from trafficflow.catalog import make_entry
from trafficflow.model import DomainError, ModelParams, SolutionSampler
from trafficflow.wavefront import (AmplitudeProblem, amplitude_direct,
                                   amplitude_quadrature, characteristic_path,
                                   psi_along)

MP1 = ModelParams(A=1.0)


def _t1_problem(pi0, p1=0.0, p2=1.0, b=1.0, x0=1.0, t0=1.0, closed_form=True):
    s = make_entry("T1", p1=p1, p2=p2, b=b).sampler(MP1)
    return AmplitudeProblem(background=s, A=1.0, x0=x0, t0=t0, pi0=pi0,
                            psi_shift_b=b if closed_form else None)


def _t1_F_exact(ts, b=1.0, t0=1.0):
    # E = ((t+b)/(t0+b))^{-5/2}; F = (2/3)(t0+b)(1 - ((t+b)/(t0+b))^{-3/2})
    s = (ts + b) / (t0 + b)
    return (2.0 / 3.0) * (t0 + b) * (1.0 - s ** -1.5)


def test_path_constant_background_exact():
    s = make_entry("T4", p1=1, b=0).sampler(MP1)   # u = 1, speed u + sqrt(A) = 2
    prob = AmplitudeProblem(background=s, A=1.0, x0=0.5, t0=1.0, pi0=0.1)
    ts, xs = characteristic_path(prob, 3.0, 0.05)
    assert np.max(np.abs(xs - (0.5 + 2.0 * (ts - 1.0)))) <= 1e-13


def test_path_t1_linear_ode_oracle():
    # dx/dt = x/(t+1) + 1 with x(1) = 1 has x(t) = (t+1)ln(t+1) + C(t+1),
    # C = 1/2 - ln 2 by the integrating factor
    prob = _t1_problem(0.5)
    ts, xs = characteristic_path(prob, 3.0, 1e-3)
    C = 0.5 - math.log(2.0)
    exact = (ts + 1.0) * np.log(ts + 1.0) + C * (ts + 1.0)
    assert np.max(np.abs(xs - exact)) <= 1e-8


def test_path_rk4_order():
    prob = _t1_problem(0.5)
    C = 0.5 - math.log(2.0)

    def err(dt):
        ts, xs = characteristic_path(prob, 3.0, dt)
        exact = (ts + 1.0) * np.log(ts + 1.0) + C * (ts + 1.0)
        return float(np.max(np.abs(xs - exact)))

    e1, e2 = err(0.1), err(0.05)
    assert e1 / e2 == pytest.approx(16.0, rel=0.3)


def test_path_exits_domain():
    def ev(x, t):
        return make_entry("T4", p1=1, b=0).sampler(MP1).eval(x, t)

    s4 = make_entry("T4", p1=1, b=0).sampler(MP1)
    limited = SolutionSampler(eval=s4.eval, partials=s4.partials,
                              domain=lambda x, t: x < 2.0)
    prob = AmplitudeProblem(background=limited, A=1.0, x0=0.0, t0=0.0, pi0=0.1)
    with pytest.raises(DomainError):
        characteristic_path(prob, 5.0, 0.01)   # x(t) = 2t crosses x = 2


def test_psi_values():
    assert psi_along(_t1_problem(0.5), 3.3, 1.0) == pytest.approx(1.25)

    t4 = make_entry("T4", p1=1, b=0).sampler(MP1)
    p4 = AmplitudeProblem(background=t4, A=1.0, x0=0.0, t0=1.0, pi0=0.1)
    assert psi_along(p4, 2.0, 5.0) == 0.0

    t3 = make_entry("T3", p1=2, b=1).sampler(MP1)
    p3 = AmplitudeProblem(background=t3, A=1.0, x0=0.5, t0=1.0, pi0=0.1)
    for t in (1.0, 2.0, 3.5):
        assert psi_along(p3, 0.5, t) == pytest.approx(2.0 / t)


def test_quadrature_normalisation():
    sol = amplitude_quadrature(_t1_problem(0.5), 5.0, n=500)
    assert sol.E[0] == 1.0
    assert sol.F[0] == 0.0
    assert sol.pi[0] == 0.5
    assert np.all(np.diff(sol.F) >= 0.0)


def test_quadrature_flat_background_closed_form():
    # Psi = 0: pi(t) = pi0/(1 + pi0 (t - t0)), shock at t0 - 1/pi0 for pi0 < 0
    t4 = make_entry("T4", p1=1, b=0).sampler(MP1)
    prob = AmplitudeProblem(background=t4, A=1.0, x0=0.0, t0=1.0, pi0=-0.5)
    sol = amplitude_quadrature(prob, 10.0, n=1000)
    assert sol.shock_time == pytest.approx(3.0, abs=1e-9)
    mask = sol.times < 2.9
    expect = -0.5 / (1.0 - 0.5 * (sol.times[mask] - 1.0))
    assert np.max(np.abs(sol.pi[mask] - expect)) <= 1e-9
    assert sol.pi_c == 0.0     # F grows without bound


def test_t1_F_matches_closed_form():
    sol = amplitude_quadrature(_t1_problem(0.5), 20.0, n=4000)
    assert np.max(np.abs(sol.F - _t1_F_exact(sol.times))) <= 1e-9


def test_critical_amplitude_closed_form():
    sol = amplitude_quadrature(_t1_problem(0.5), 10.0, n=500)
    assert abs(sol.pi_c - 0.75) <= 1e-6


def test_critical_amplitude_numeric_limit():
    sol = amplitude_quadrature(_t1_problem(0.5, closed_form=False), 10.0, n=1000)
    assert abs(sol.pi_c - 0.75) <= 1e-3

    t3 = make_entry("T3", p1=2, b=1).sampler(MP1)
    p3 = AmplitudeProblem(background=t3, A=1.0, x0=0.5, t0=1.0, pi0=0.2)
    sol3 = amplitude_quadrature(p3, 15.0, n=1000)
    # Psi = 2/t gives E = t^-2, F(inf) = t0 = 1
    assert abs(sol3.pi_c - 1.0) <= 1e-3


def test_shock_time_supercritical():
    sol = amplitude_quadrature(_t1_problem(-1.5), 3.0, n=2000)
    assert abs(sol.shock_time - (2.0 ** (5.0 / 3.0) - 1.0)) <= 1e-4
    # amplitudes past the shock are flagged, not extrapolated
    assert np.isnan(sol.pi[-1])
    assert math.isfinite(sol.shock_time)


def test_shock_time_closed_form_family():
    # 1 + pi0 F(t) = 0 with the exact F: t = 2 (1 - 3/(4 |pi0|))^{-2/3} - 1
    for pi0 in (-0.9, -1.2, -2.0):
        sol = amplitude_quadrature(_t1_problem(pi0), 12.0, n=4000)
        expect = 2.0 * (1.0 - 3.0 / (4.0 * abs(pi0))) ** (-2.0 / 3.0) - 1.0
        assert abs(sol.shock_time - expect) <= 1e-6


def test_no_shock_for_positive_amplitude():
    sol = amplitude_quadrature(_t1_problem(0.5), 20.0, n=500)
    assert sol.shock_time == math.inf
    assert np.all(np.isfinite(sol.pi))


def test_direct_matches_quadrature_on_aligned_grid():
    prob = _t1_problem(0.5)
    n = 9500
    sol = amplitude_quadrature(prob, 20.0, n=n)
    tr = amplitude_direct(prob, 20.0, dt=19.0 / n)
    assert np.allclose(sol.times, tr.times)
    assert np.max(np.abs(sol.pi - tr.pi)) <= 1e-6


def test_direct_zero_amplitude_is_equilibrium():
    tr = amplitude_direct(_t1_problem(0.0), 5.0, dt=0.01)
    assert np.all(tr.pi == 0.0)


def test_direct_blowup_bracket():
    tr = amplitude_direct(_t1_problem(-1.5), 3.0, dt=1e-3)
    assert tr.blowup_bracket is not None
    lo, hi = tr.blowup_bracket
    t_star = 2.0 ** (5.0 / 3.0) - 1.0
    assert lo <= t_star <= hi + 2e-3


def test_regime_expansive_decay():
    sol = amplitude_quadrature(_t1_problem(0.8), 40.0, n=4000)
    assert np.all(sol.pi > 0.0)
    tail = sol.pi[sol.times > 5.0]
    assert np.all(np.diff(tail) < 0.0)
    assert sol.pi[-1] < 1e-2 * sol.pi[0]


def test_regime_subcritical_decay():
    sol = amplitude_quadrature(_t1_problem(-0.5), 60.0, n=6000)
    assert sol.shock_time == math.inf
    assert np.all(np.isfinite(sol.pi))
    assert abs(sol.pi[-1]) < 0.02


def test_regime_supercritical_shock():
    for pi0 in (-0.76, -0.9):
        t_end = 60.0 if pi0 == -0.76 else 10.0
        sol = amplitude_quadrature(_t1_problem(pi0), t_end, n=6000)
        assert math.isfinite(sol.shock_time)


def test_quadrature_vs_direct_random_sweep():
    rng = np.random.default_rng(13)
    for _ in range(20):
        b = float(rng.uniform(0.2, 2.0))
        pi_c = 3.0 / (2.0 * (1.0 + b))
        pi0 = float(rng.uniform(-0.9 * pi_c, 1.5))
        prob = _t1_problem(pi0, b=b)
        n = 3000
        sol = amplitude_quadrature(prob, 7.0, n=n)
        tr = amplitude_direct(prob, 7.0, dt=6.0 / n)
        assert np.max(np.abs(sol.pi - tr.pi)) <= 1e-6, (b, pi0)


def test_problem_validation():
    s = make_entry("T1", p1=0, p2=1, b=1).sampler(MP1)
    bare = SolutionSampler(eval=s.eval, domain=s.domain, partials=None)
    with pytest.raises(ValueError):
        AmplitudeProblem(background=bare, A=1.0, x0=0.0, t0=1.0, pi0=0.1)
    with pytest.raises(ValueError):
        AmplitudeProblem(background=s, A=0.0, x0=0.0, t0=1.0, pi0=0.1)
    prob = _t1_problem(0.1)
    with pytest.raises(ValueError):
        amplitude_quadrature(prob, 0.5, n=100)   # t_end <= t0
    with pytest.raises(ValueError):
        characteristic_path(prob, 3.0, -0.1)
