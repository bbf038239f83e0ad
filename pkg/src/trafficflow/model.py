"""Governing equations of the second-order traffic flow model.

State variables are the vehicle density rho(x, t) > 0 and the average
velocity u(x, t).  The model couples a continuity equation with a momentum
balance closed by the traffic pressure P = A*rho - D*u_x, where A is the
speed variance and D the viscosity.  Everything else in the package is
checked against the residual operators defined here.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DomainError",
    "ModelParams",
    "StatePoint",
    "Partials",
    "SolutionSampler",
    "pressure",
    "characteristic_speeds",
    "characteristic_eigenvectors",
    "fd_partials",
    "default_fd_step",
    "residual_from_partials",
    "pde_residual",
]


class DomainError(ValueError):
    """Raised when an evaluation point (or FD stencil) leaves a sampler's domain."""


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the model.

    A must be positive for the characteristic structure to exist; A = 0 is
    tolerated at construction so that pressureless closed forms can be fed
    through the residual operators, and the characteristic operations reject
    it themselves.  D >= 0 selects the viscous (D > 0) or inviscid model.
    Relaxation is disabled: only the homogeneous case R = 0 is supported.
    """

    A: float
    D: float = 0.0
    relaxation_R: float = 0.0
    relaxation_tau: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.A) or self.A < 0.0:
            raise ValueError(f"speed variance A must be >= 0 and finite, got {self.A}")
        if not math.isfinite(self.D) or self.D < 0.0:
            raise ValueError(f"viscosity D must be >= 0 and finite, got {self.D}")
        if self.relaxation_R != 0.0:
            raise ValueError("relaxation is out of scope: relaxation_R must be 0")

    @property
    def sqrt_A(self) -> float:
        return math.sqrt(self.A)


@dataclass(frozen=True)
class StatePoint:
    """Pointwise state (rho, u).  Density must be strictly positive."""

    rho: float
    u: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise DomainError(f"density must be finite and > 0, got rho={self.rho}")
        if not math.isfinite(self.u):
            raise DomainError(f"velocity must be finite, got u={self.u}")


@dataclass(frozen=True)
class Partials:
    """First derivatives of (rho, u) plus u_xx at a point.

    ``method`` records provenance: "analytic" for closed-form derivatives,
    "fd" for central finite differences (with order and step recorded).
    """

    rho_t: float
    rho_x: float
    u_t: float
    u_x: float
    u_xx: float
    method: str = "analytic"
    fd_order: Optional[int] = None
    fd_step: Optional[float] = None

    def __post_init__(self):
        for name in ("rho_t", "rho_x", "u_t", "u_x", "u_xx"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"non-finite derivative {name}={getattr(self, name)}")
        if self.method == "fd":
            if self.fd_order not in (2, 4):
                raise ValueError("fd provenance requires order in {2, 4}")
            if self.fd_step is None or self.fd_step <= 0.0:
                raise ValueError("fd provenance requires step > 0")


@dataclass(frozen=True)
class SolutionSampler:
    """A field (x, t) -> (rho, u), optionally with analytic partials.

    ``domain`` must be true wherever ``eval`` returns finite values with
    rho > 0.  ``partials`` may be None, in which case residuals fall back to
    finite differences.
    """

    eval: Callable[[float, float], StatePoint]
    domain: Callable[[float, float], bool] = field(default=lambda x, t: True)
    partials: Optional[Callable[[float, float], Partials]] = None

    def require_in_domain(self, x: float, t: float) -> None:
        if not self.domain(x, t):
            raise DomainError(f"point (x={x}, t={t}) is outside the sampler domain")


def pressure(p: ModelParams, s: StatePoint, u_x: float) -> float:
    """Traffic pressure P = A*rho - D*u_x."""
    return p.A * s.rho - p.D * u_x


def characteristic_speeds(p: ModelParams, s: StatePoint) -> tuple[float, float]:
    """Characteristic speeds (u - sqrt(A), u + sqrt(A)) of the inviscid part."""
    if p.A <= 0.0:
        raise ValueError("characteristic speeds require A > 0")
    c = p.sqrt_A
    return s.u - c, s.u + c


def characteristic_eigenvectors(p: ModelParams, s: StatePoint):
    """Left/right eigenvector pairs (l1, r1, l2, r2) of B = [[u, rho], [A/rho, u]].

    Normalisation follows l1 = (-sqrt(A)/rho, 1), r1 = (-rho/sqrt(A), 1)^T and
    l2, r2 with the opposite sign in the first component, so that l_i B
    = lambda_i l_i and B r_i = lambda_i r_i.
    """
    if p.A <= 0.0:
        raise ValueError("characteristic eigenvectors require A > 0")
    c = p.sqrt_A
    rho = s.rho
    l1 = np.array([-c / rho, 1.0])
    r1 = np.array([-rho / c, 1.0])
    l2 = np.array([c / rho, 1.0])
    r2 = np.array([rho / c, 1.0])
    return l1, r1, l2, r2


def default_fd_step(x: float, t: float) -> float:
    """Scale-adapted central-difference step h = 1e-3 * max(1, |x|, |t|)."""
    return 1e-3 * max(1.0, abs(x), abs(t))


# Central difference weights: (offsets, first-derivative weights, second-derivative weights)
_FD_STENCILS = {
    2: ((-1, 1), (-0.5, 0.5), None),
    4: ((-2, -1, 1, 2), (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0), None),
}
_FD2_SECOND = ((-1, 0, 1), (1.0, -2.0, 1.0))
_FD4_SECOND = ((-2, -1, 0, 1, 2), (-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0))


def fd_partials(s: SolutionSampler, x: float, t: float, order: int = 4,
                h: Optional[float] = None) -> Partials:
    """Central finite-difference partials of a sampler at (x, t).

    The full stencil (width 2 or 4 in each direction) must lie inside the
    sampler domain, otherwise a DomainError is raised.
    """
    if order not in (2, 4):
        raise ValueError("fd order must be 2 or 4")
    if h is None:
        h = default_fd_step(x, t)
    offsets, w1, _ = _FD_STENCILS[order]
    off2, w2 = _FD2_SECOND if order == 2 else _FD4_SECOND

    for k in set(offsets) | set(off2):
        if not (s.domain(x + k * h, t) and s.domain(x, t + k * h)):
            raise DomainError(
                f"order-{order} FD stencil with h={h} at (x={x}, t={t}) leaves the domain")

    rho_x = sum(w * s.eval(x + k * h, t).rho for k, w in zip(offsets, w1)) / h
    u_x = sum(w * s.eval(x + k * h, t).u for k, w in zip(offsets, w1)) / h
    rho_t = sum(w * s.eval(x, t + k * h).rho for k, w in zip(offsets, w1)) / h
    u_t = sum(w * s.eval(x, t + k * h).u for k, w in zip(offsets, w1)) / h
    u_xx = sum(w * s.eval(x + k * h, t).u for k, w in zip(off2, w2)) / (h * h)
    return Partials(rho_t=rho_t, rho_x=rho_x, u_t=u_t, u_x=u_x, u_xx=u_xx,
                    method="fd", fd_order=order, fd_step=h)


def residual_from_partials(p: ModelParams, s: StatePoint, d: Partials) -> tuple[float, float]:
    """Raw signed residuals of the two governing equations.

    r1 = rho*u_x + rho_x*u + rho_t
    r2 = u_t + u*u_x + A*rho_x/rho - D*u_xx/rho
    """
    r1 = s.rho * d.u_x + d.rho_x * s.u + d.rho_t
    r2 = d.u_t + s.u * d.u_x + p.A * d.rho_x / s.rho - p.D * d.u_xx / s.rho
    return r1, r2


def pde_residual(p: ModelParams, s: SolutionSampler, x: float, t: float,
                 method: str = "auto", h: Optional[float] = None) -> tuple[float, float]:
    """Evaluate the governing-system residuals of a sampler at (x, t).

    method: "auto" (analytic partials when available, else order-4 FD),
    "analytic", "fd2" or "fd4".  Residuals are returned as raw signed values.
    """
    s.require_in_domain(x, t)
    if method == "auto":
        method = "analytic" if s.partials is not None else "fd4"
    if method == "analytic":
        if s.partials is None:
            raise ValueError("sampler has no analytic partials")
        d = s.partials(x, t)
    elif method in ("fd2", "fd4"):
        d = fd_partials(s, x, t, order=int(method[2]), h=h)
    else:
        raise ValueError(f"unknown derivative method {method!r}")
    state = s.eval(x, t)
    r1, r2 = residual_from_partials(p, state, d)
    if not (math.isfinite(r1) and math.isfinite(r2)):
        raise DomainError(f"non-finite residual at (x={x}, t={t}): ({r1}, {r2})")
    return r1, r2
