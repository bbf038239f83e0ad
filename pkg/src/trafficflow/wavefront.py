"""Weak-discontinuity (C1 wave) propagation along the fastest characteristic.

A jump in the first derivatives launched at (x0, t0) rides the fastest
characteristic dx/dt = u + sqrt(A).  Its amplitude pi obeys the Bernoulli
transport equation

    d pi/dt + pi^2 + Psi(x(t), t) * pi = 0,
    Psi = (sqrt(A) * rho_x / rho + 5 * u_x) / 2,

whose quadrature solution is pi(t) = pi0 E(t) / (1 + pi0 F(t)) with
E(t) = exp(-int_{t0}^t Psi), F(t) = int_{t0}^t E, so that E(t0) = 1 and
pi(t0) = pi0.  The critical amplitude is pi_c = 1 / lim_{t->inf} F(t):
initial amplitudes pi0 <= -pi_c blow up in finite time (shock formation),
everything else decays.  A direct RK4 integration of the transport equation
serves as the independent arbiter of the quadrature.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import bisect

from .model import DomainError, SolutionSampler

__all__ = [
    "AmplitudeProblem",
    "AmplitudeSolution",
    "AmplitudeTrace",
    "characteristic_path",
    "psi_along",
    "amplitude_quadrature",
    "amplitude_direct",
]

BLOWUP_LIMIT = 1e12


@dataclass(frozen=True)
class AmplitudeProblem:
    """Background solution plus the initial data of the C1 wave.

    ``psi_shift_b`` may be set when the background's damping coefficient has
    the closed form Psi = 5 / (2 (t + b)) (the T1 family), enabling the
    exact critical amplitude pi_c = 3 / (2 (t0 + b)).
    """

    background: SolutionSampler
    A: float
    x0: float
    t0: float
    pi0: float
    psi_shift_b: Optional[float] = None

    def __post_init__(self):
        if self.A <= 0.0:
            raise ValueError("A must be > 0")
        if self.background.partials is None:
            raise ValueError("amplitude problems need a background with analytic partials")


def _lambda2(prob: AmplitudeProblem, x: float, t: float) -> float:
    if not prob.background.domain(x, t):
        raise DomainError(f"characteristic path exits the background domain at (x={x}, t={t})")
    return prob.background.eval(x, t).u + math.sqrt(prob.A)


def _rk4_path(prob: AmplitudeProblem, ts: np.ndarray) -> np.ndarray:
    xs = np.empty_like(ts)
    xs[0] = prob.x0
    for k in range(len(ts) - 1):
        t, x = float(ts[k]), float(xs[k])
        dt = float(ts[k + 1]) - t
        k1 = _lambda2(prob, x, t)
        k2 = _lambda2(prob, x + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = _lambda2(prob, x + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = _lambda2(prob, x + dt * k3, t + dt)
        xs[k + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return xs


def characteristic_path(prob: AmplitudeProblem, t_end: float, dt: float):
    """Integrate dx/dt = u + sqrt(A) from (x0, t0) with classical RK4.

    Returns (ts, xs).  The final step is shortened to land exactly on t_end.
    """
    if t_end <= prob.t0:
        raise ValueError("t_end must exceed t0")
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    nsteps = max(1, math.ceil((t_end - prob.t0) / dt - 1e-12))
    ts = np.linspace(prob.t0, t_end, nsteps + 1)
    return ts, _rk4_path(prob, ts)


def psi_along(prob: AmplitudeProblem, x: float, t: float) -> float:
    """Damping coefficient Psi = (sqrt(A) rho_x / rho + 5 u_x) / 2."""
    if not prob.background.domain(x, t):
        raise DomainError(f"(x={x}, t={t}) outside the background domain")
    st = prob.background.eval(x, t)
    d = prob.background.partials(x, t)
    return 0.5 * (math.sqrt(prob.A) * d.rho_x / st.rho + 5.0 * d.u_x)


@dataclass
class AmplitudeSolution:
    """Quadrature solution of the amplitude equation along the wave path."""

    times: np.ndarray
    xs: np.ndarray
    psi: np.ndarray
    E: np.ndarray
    F: np.ndarray
    pi: np.ndarray
    pi_c: float
    shock_time: float           # math.inf when no shock forms


def _limit_F(prob: AmplitudeProblem, t_end: float, n: int) -> float:
    """Numeric limit of F(t) as t -> inf by Aitken extrapolation on a tail.

    Returns math.inf when F keeps growing linearly (no damping), and NaN
    when the background domain does not extend far enough to see the tail.
    """
    L = max(t_end - prob.t0, 10.0)
    vals = []
    try:
        for mult in (1.0, 2.0, 4.0):
            T = prob.t0 + mult * 4.0 * L
            ts = np.linspace(prob.t0, T, max(n, 4000) + 1)
            xs = _rk4_path(prob, ts)
            psi = np.array([psi_along(prob, float(x), float(t)) for x, t in zip(xs, ts)])
            G = cumulative_simpson(psi, x=ts, initial=0.0)
            E = np.exp(-G)
            F = cumulative_simpson(E, x=ts, initial=0.0)
            vals.append(float(F[-1]))
    except DomainError:
        return math.nan
    d1, d2 = vals[1] - vals[0], vals[2] - vals[1]
    if d2 <= 0.0:
        return vals[2]
    if d2 >= 0.98 * d1:
        return math.inf
    # geometric-tail sum: remaining increments are d2*r + d2*r^2 + ... with r = d2/d1
    return vals[2] + d2 * d2 / (d1 - d2)


def amplitude_quadrature(prob: AmplitudeProblem, t_end: float, n: int = 2000) -> AmplitudeSolution:
    """Quadrature solution pi = pi0 E / (1 + pi0 F) on [t0, t_end].

    E and F are computed by composite Simpson on n panels along the RK4
    characteristic path.  pi_c uses the closed form 3/(2 (t0 + b)) when the
    problem declares the T1-type damping, else a tail-extrapolated limit.
    The shock time is the earliest root of 1 + pi0 F(t) = 0, located by
    bisection, or +inf when no root exists in [t0, t_end].
    """
    if t_end <= prob.t0:
        raise ValueError("t_end must exceed t0")
    if n < 2:
        raise ValueError("need at least 2 quadrature panels")
    if n % 2:
        n += 1
    ts = np.linspace(prob.t0, t_end, n + 1)
    xs = _rk4_path(prob, ts)
    psi = np.array([psi_along(prob, float(x), float(t)) for x, t in zip(xs, ts)])
    if not np.all(np.isfinite(psi)):
        raise DomainError("Psi is singular on the integration interval")
    G = cumulative_simpson(psi, x=ts, initial=0.0)
    E = np.exp(-G)
    F = cumulative_simpson(E, x=ts, initial=0.0)

    if prob.psi_shift_b is not None:
        pi_c = 3.0 / (2.0 * (prob.t0 + prob.psi_shift_b))
    else:
        lim = _limit_F(prob, t_end, n)
        pi_c = 0.0 if lim == math.inf else (1.0 / lim if lim and not math.isnan(lim) else math.nan)

    shock_time = math.inf
    if prob.pi0 < 0.0:
        denom = 1.0 + prob.pi0 * F
        sign_change = np.nonzero(denom[:-1] * denom[1:] <= 0.0)[0]
        if sign_change.size:
            j = int(sign_change[0])

            def F_local(t: float) -> float:
                # F between grid nodes: resume the path from node j and add a
                # fine local Simpson increment of E.
                if t <= ts[j]:
                    return float(F[j])
                sub = np.linspace(ts[j], t, 17)
                xsub = _rk4_path(AmplitudeProblem(prob.background, prob.A,
                                                  float(xs[j]), float(ts[j]), prob.pi0,
                                                  prob.psi_shift_b), sub)
                psis = np.array([psi_along(prob, float(xx), float(tt))
                                 for xx, tt in zip(xsub, sub)])
                Gs = G[j] + cumulative_simpson(psis, x=sub, initial=0.0)
                Es = np.exp(-Gs)
                return float(F[j] + cumulative_simpson(Es, x=sub, initial=0.0)[-1])

            lo, hi = float(ts[j]), float(ts[j + 1])
            fn = lambda t: 1.0 + prob.pi0 * F_local(t)
            if fn(lo) == 0.0:
                shock_time = lo
            elif fn(lo) * fn(hi) <= 0.0:
                shock_time = float(bisect(fn, lo, hi, xtol=1e-12))

    pi = prob.pi0 * E / (1.0 + prob.pi0 * F)
    if math.isfinite(shock_time):
        pi = np.where(ts < shock_time, pi, math.nan)
    return AmplitudeSolution(times=ts, xs=xs, psi=psi, E=E, F=F, pi=pi,
                             pi_c=pi_c, shock_time=shock_time)


@dataclass
class AmplitudeTrace:
    """Direct RK4 integration of the amplitude transport equation."""

    times: np.ndarray
    xs: np.ndarray
    pi: np.ndarray
    blowup_bracket: Optional[tuple] = None


def amplitude_direct(prob: AmplitudeProblem, t_end: float, dt: float) -> AmplitudeTrace:
    """RK4 integration of d pi/dt = -pi^2 - Psi pi along the characteristic.

    Independent oracle for ``amplitude_quadrature``.  When |pi| exceeds 1e12
    the trace is truncated and a two-step window around the triggering step
    is reported as the blow-up bracket (the threshold crossing can lag the
    pole by up to one step).
    """
    if t_end <= prob.t0:
        raise ValueError("t_end must exceed t0")
    nsteps = max(1, math.ceil((t_end - prob.t0) / dt - 1e-12))
    ts = np.linspace(prob.t0, t_end, nsteps + 1)

    def rhs(x: float, pi: float, t: float) -> tuple[float, float]:
        lam = _lambda2(prob, x, t)
        return lam, -pi * pi - psi_along(prob, x, t) * pi

    xs = [prob.x0]
    pis = [prob.pi0]
    for k in range(nsteps):
        t, h = float(ts[k]), float(ts[k + 1] - ts[k])
        x, pi = xs[-1], pis[-1]
        try:
            k1x, k1p = rhs(x, pi, t)
            k2x, k2p = rhs(x + 0.5 * h * k1x, pi + 0.5 * h * k1p, t + 0.5 * h)
            k3x, k3p = rhs(x + 0.5 * h * k2x, pi + 0.5 * h * k2p, t + 0.5 * h)
            k4x, k4p = rhs(x + h * k3x, pi + h * k3p, t + h)
        except (OverflowError, ValueError):
            return AmplitudeTrace(times=ts[:k + 1], xs=np.array(xs), pi=np.array(pis),
                                  blowup_bracket=(float(ts[max(k - 1, 0)]), float(ts[k + 1])))
        x_new = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        pi_new = pi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if not math.isfinite(pi_new) or abs(pi_new) > BLOWUP_LIMIT:
            return AmplitudeTrace(times=ts[:k + 1], xs=np.array(xs), pi=np.array(pis),
                                  blowup_bracket=(float(ts[max(k - 1, 0)]), float(ts[k + 1])))
        xs.append(x_new)
        pis.append(pi_new)
    return AmplitudeTrace(times=ts, xs=np.array(xs), pi=np.array(pis))
