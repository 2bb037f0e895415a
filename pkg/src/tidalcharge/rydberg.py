"""Circular Rydberg states |n, l=n-1, m=n-1> and their first-order energy shifts.

The electron density of a circular state is a thin ring of radius n^2 a0 in
the horizontal plane. Weak perturbations that couple to the transverse size
r^2 sin^2(theta) (a uniform vertical magnetic field through A.A, or the
Earth's tidal field through h.h) shift the level by a coefficient times the
mean-square transverse size, and the level shift acts as a potential that
pushes the atom toward weaker field.

Shift functions return the large-n forms by default; ``exact=True`` uses the
exact expectation value over the ring density instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants, default_constants


@dataclass(frozen=True)
class RydbergState:
    n: int
    a_n: float
    mu_n: float
    Phi_n: float


@dataclass(frozen=True)
class TidalEnvironment:
    g: float
    R_E: float
    B: float = 0.0
    grad_B2: float = 0.0
    grad_g2_over_RE2: float = 0.0

    def __post_init__(self):
        if not (self.g > 0 and self.R_E > 0):
            raise ValueError("g and R_E must be positive")
        if self.grad_B2 < 0 or self.grad_g2_over_RE2 < 0:
            raise ValueError("gradient magnitudes must be non-negative")

    @classmethod
    def earth(cls, consts: PhysicalConstants | None = None, **kw) -> "TidalEnvironment":
        consts = consts or default_constants()
        return cls(g=consts.g, R_E=consts.R_E, **kw)


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"principal quantum number must be an integer >= 1, got {n!r}")
    return int(n)


def ring_radius(n: int, consts: PhysicalConstants | None = None) -> float:
    consts = consts or default_constants()
    n = _check_n(n)
    return n * n * consts.a0


def state_properties(n: int, consts: PhysicalConstants | None = None) -> RydbergState:
    consts = consts or default_constants()
    n = _check_n(n)
    return RydbergState(n=n, a_n=n * n * consts.a0, mu_n=n * consts.mu_B, Phi_n=n * consts.Phi0)


def log_ring_density(n: int, r, theta, consts: PhysicalConstants | None = None):
    """Log of the ring density, shifted so its maximum is 0.

    Works in the scaled radius u = r / (n a0), where the unnormalized
    density is (u sin theta)^(2n-2) exp(-2u); the peak sits at u = n - 1 on
    the equator (u = 0 for n = 1).
    """
    consts = consts or default_constants()
    n = _check_n(n)
    u = np.asarray(r, dtype=float) / (n * consts.a0)
    sin_t = np.sin(np.asarray(theta, dtype=float))
    if n == 1:
        return -2.0 * u + 0.0 * sin_t
    m = n - 1
    with np.errstate(divide="ignore"):
        return 2 * m * np.log(u * sin_t / m) - 2.0 * (u - m)


def ring_density(n: int, r, theta, consts: PhysicalConstants | None = None):
    """Unnormalized |psi|^2 of the circular state, scaled to 1 at its maximum."""
    return np.exp(log_ring_density(n, r, theta, consts))


def transverse_size_sq(n: int, consts: PhysicalConstants | None = None) -> float:
    """Exact <r^2 sin^2 theta> = n^3 (n + 1) a0^2 for the circular state."""
    consts = consts or default_constants()
    n = _check_n(n)
    return n**3 * (n + 1) * consts.a0**2


def mean_square_radius(n: int, consts: PhysicalConstants | None = None) -> float:
    """Exact <r^2> = n^2 (n + 1)(2n + 1) a0^2 / 2."""
    consts = consts or default_constants()
    n = _check_n(n)
    return n**2 * (n + 1) * (2 * n + 1) * consts.a0**2 / 2


def parker_shift(n: int, env: TidalEnvironment, m_e: float | None = None,
                 consts: PhysicalConstants | None = None, exact: bool = False,
                 l: int | None = None) -> float:
    """Curvature (Parker) shift m_e g a_n^2 / (2 R_E) of a circular state.

    The coupling is a rank-2 quadrupole, so an ``l = 0`` state gets no first
    order shift and 0.0 is returned for it. ``exact`` evaluates
    <r^2 (3 sin^2 theta - 2)> = n^2 (n^2 - 1) a0^2 instead of a_n^2.
    """
    consts = consts or default_constants()
    n = _check_n(n)
    m_e = consts.m_e if m_e is None else m_e
    if l == 0:
        return 0.0
    coeff = m_e * env.g / (2 * env.R_E)
    if exact:
        return coeff * n**2 * (n * n - 1) * consts.a0**2
    return coeff * ring_radius(n, consts) ** 2


def _size(n, consts, exact):
    return transverse_size_sq(n, consts) if exact else ring_radius(n, consts) ** 2


def diamagnetic_shift(n: int, env: TidalEnvironment, consts: PhysicalConstants | None = None,
                      exact: bool = False) -> float:
    consts = consts or default_constants()
    return consts.e**2 * _size(_check_n(n), consts, exact) * env.B**2 / (8 * consts.m_e)


def diamagnetic_force(n: int, env: TidalEnvironment, consts: PhysicalConstants | None = None,
                      exact: bool = False) -> float:
    """Force along grad(B^2); negative means toward weaker field."""
    consts = consts or default_constants()
    return -consts.e**2 * _size(_check_n(n), consts, exact) * env.grad_B2 / (8 * consts.m_e)


def tidal_shift(n: int, env: TidalEnvironment, t: float, consts: PhysicalConstants | None = None,
                exact: bool = False) -> float:
    consts = consts or default_constants()
    if t < 0:
        raise ValueError("t must be non-negative")
    size = _size(_check_n(n), consts, exact)
    return consts.m_e * size * env.g**2 * t**2 / (2 * env.R_E**2)


def tidal_force(n: int, env: TidalEnvironment, t: float, consts: PhysicalConstants | None = None,
                exact: bool = False) -> float:
    """Force along grad(g^2 / R_E^2) after falling for ``t`` seconds."""
    consts = consts or default_constants()
    if t < 0:
        raise ValueError("t must be non-negative")
    size = _size(_check_n(n), consts, exact)
    return -0.5 * consts.m_e * size * t**2 * env.grad_g2_over_RE2


def tidal_velocity_field(env: TidalEnvironment, x, y, t: float) -> np.ndarray:
    """Horizontal velocity (g t / R_E)(x, y) of a freely falling test particle."""
    rate = env.g * t / env.R_E
    return np.array([rate * np.asarray(x, dtype=float), rate * np.asarray(y, dtype=float)])


def convergence_angle(L: float, env: TidalEnvironment) -> tuple[float, float]:
    """Tilt L/R_E of two free-fall lines a distance L apart, and g' = g L / R_E."""
    if L <= 0:
        raise ValueError("L must be positive")
    theta = L / env.R_E
    return theta, env.g * theta
