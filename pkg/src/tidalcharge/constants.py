"""SI physical constants shared by every module.

Values come from the CODATA set bundled with :mod:`scipy.constants`, except
the Earth-surface quantities ``g`` and ``R_E`` which are conventional
round figures:

    ======== ============================== ==================
    field    meaning                        value
    ======== ============================== ==================
    G        gravitational constant         6.67430e-11
    g        surface gravity                9.81
    epsilon0 vacuum permittivity            8.8541878188e-12
    e        elementary charge              1.602176634e-19
    hbar     reduced Planck constant        1.054571817e-34
    m_e      electron mass                  9.1093837139e-31
    a0       Bohr radius                    5.29177210544e-11
    mu_B     Bohr magneton                  9.2740100657e-24
    Phi0     flux quantum h/2e              2.067833848e-15
    R_E      mean Earth radius              6.371e6
    ======== ============================== ==================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from functools import lru_cache

import scipy.constants as sc

STANDARD_GRAVITY = 9.81
EARTH_RADIUS = 6.371e6


@dataclass(frozen=True)
class PhysicalConstants:
    G: float
    g: float
    epsilon0: float
    e: float
    hbar: float
    m_e: float
    a0: float
    mu_B: float
    Phi0: float
    R_E: float

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"constant {f.name} must be strictly positive")

    @property
    def coulomb_k(self) -> float:
        """1/(4 pi epsilon0)."""
        return 1.0 / (4.0 * math.pi * self.epsilon0)

    def check_consistency(self, rtol: float = 1e-6) -> None:
        """Raise ValueError if a0, mu_B or Phi0 disagree with their definitions."""
        a0 = 4 * math.pi * self.epsilon0 * self.hbar**2 / (self.m_e * self.e**2)
        mu_B = self.e * self.hbar / (2 * self.m_e)
        Phi0 = math.pi * self.hbar / self.e
        for name, derived in (("a0", a0), ("mu_B", mu_B), ("Phi0", Phi0)):
            stored = getattr(self, name)
            if abs(stored - derived) > rtol * abs(derived):
                raise ValueError(f"{name}={stored!r} inconsistent with derived {derived!r}")


@lru_cache(maxsize=None)
def default_constants() -> PhysicalConstants:
    pc = sc.physical_constants
    return PhysicalConstants(
        G=sc.G,
        g=STANDARD_GRAVITY,
        epsilon0=sc.epsilon_0,
        e=sc.e,
        hbar=sc.hbar,
        m_e=sc.m_e,
        a0=pc["Bohr radius"][0],
        mu_B=pc["Bohr magneton"][0],
        Phi0=pc["mag. flux quantum"][0],
        R_E=EARTH_RADIUS,
    )
