"""Point-charge models of the charge separation.

Two pictures live here. The dumbbell pair stands in for two coherently
connected cubes of side ``L``; its net force and end-to-end voltage fix the
equilibrium voltage at which Coulomb repulsion balances the tidal pull. The
charged bob pair describes two cylindrical pendulum bobs whose faces carry
``+Q``/``-Q`` once the superfluid and the ion lattice separate by ``d``.

Axial forces are signed components along ``i`` (pointing from the left bob to
the right bob) acting on the ion lattice of the right bob.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants, default_constants

DUMBBELL_ALPHA = 11 / 18
DUMBBELL_BETA = -2 / 3
SMALL_EXTRUSION_FRACTION = 0.01


def _k(consts):
    return (consts or default_constants()).coulomb_k


@dataclass(frozen=True)
class DumbbellModel:
    Q: float
    L: float
    alpha: float = DUMBBELL_ALPHA
    beta_geom: float = DUMBBELL_BETA

    def __post_init__(self):
        if self.Q < 0 or self.L <= 0 or self.alpha <= 0:
            raise ValueError("need Q >= 0, L > 0 and alpha > 0")

    def net_force(self, consts=None) -> float:
        return self.alpha * _k(consts) * self.Q**2 / self.L**2

    def voltage(self, consts=None) -> float:
        return self.beta_geom * _k(consts) * self.Q / self.L


@dataclass(frozen=True)
class ChargedBobPair:
    Q: float
    s: float
    L: float
    d: float

    def __post_init__(self):
        if self.s <= 0 or self.L <= 0:
            raise ValueError("s and L must be positive")
        if np.sign(self.Q) != np.sign(self.d):
            raise ValueError("sgn(d) must equal sgn(Q)")

    @property
    def sign(self) -> int:
        return int(np.sign(self.d))

    @property
    def thin_extrusion(self) -> bool:
        """False when |d| is too large for the d << s, L force formulas."""
        return abs(self.d) < SMALL_EXTRUSION_FRACTION * min(self.s, self.L)


def dumbbell_net_force(Q: float, L: float, consts: PhysicalConstants | None = None) -> float:
    """Net force between the two dumbbells, positive when repulsive."""
    if L <= 0:
        raise ValueError("L must be positive")
    return DUMBBELL_ALPHA * _k(consts) * Q * Q / (L * L)


def dumbbell_voltage(Q: float, L: float, consts: PhysicalConstants | None = None) -> float:
    if L <= 0:
        raise ValueError("L must be positive")
    return DUMBBELL_BETA * _k(consts) * Q / L


def free_fall_voltage(rho: float, L: float, consts: PhysicalConstants | None = None) -> float:
    """Characteristic voltage scale sqrt(rho g L^4 / (4 pi eps0 R_E))."""
    consts = consts or default_constants()
    if rho <= 0 or L <= 0:
        raise ValueError("rho and L must be positive")
    return math.sqrt(rho * consts.g * L**4 * consts.coulomb_k / consts.R_E)


def cube_equilibrium_voltage(rho: float, L: float, alpha: float = DUMBBELL_ALPHA,
                             beta_geom: float = DUMBBELL_BETA,
                             consts: PhysicalConstants | None = None) -> float:
    """Voltage across one cube when dumbbell repulsion balances the tidal force."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return abs(beta_geom) / math.sqrt(alpha) * free_fall_voltage(rho, L, consts)


def external_coulomb_force(pair: ChargedBobPair, consts: PhysicalConstants | None = None) -> float:
    """Force of the left bob's face charges on the right bob's ion lattice."""
    sg = pair.sign
    if sg == 0:
        return 0.0
    s, L = pair.s, pair.L
    if sg < 0 and s <= L:
        raise ValueError("s must exceed L when d < 0 (denominator s - L vanishes)")
    shape = L * sg * (2 * s + L * sg) / (s + L * sg) ** 2
    return -_k(consts) * pair.Q**2 / s**2 * shape


def internal_coulomb_force(pair: ChargedBobPair, consts: PhysicalConstants | None = None) -> float:
    """Force of the right bob's own superfluid on its ion lattice."""
    return -_k(consts) * pair.Q**2 * pair.sign / pair.L**2


def extruded_charge(d: float, n_s: float, r: float, consts: PhysicalConstants | None = None) -> float:
    """Charge carried by an extrusion of depth ``d`` through a face of radius ``r``."""
    consts = consts or default_constants()
    if n_s <= 0 or r <= 0:
        raise ValueError("n_s and r must be positive")
    return 2 * consts.e * n_s * math.pi * r * r * d


def extrusion_distance(Q: float, n_s: float, r: float, consts: PhysicalConstants | None = None) -> float:
    consts = consts or default_constants()
    if n_s <= 0 or r <= 0:
        raise ValueError("n_s and r must be positive")
    return Q / (2 * consts.e * n_s * math.pi * r * r)
