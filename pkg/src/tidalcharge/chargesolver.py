"""Quasi-static driver for the rotating-source experiment.

At every instant the pendula are treated as being in static equilibrium. A
normal bob simply deflects by ``ell * drive / (m g)``. A superconducting bob
pair separates charge instead, and the extruded charge ``Q`` has to satisfy

    Q = K * (drive + F_ext(Q) + F_int(Q)),   K = 2 e n_s pi r^2 ell / (m g)

where ``F_ext`` and ``F_int`` are the signed restoring Coulomb forces of
:mod:`tidalcharge.electrostatics`. The right-hand side jumps at ``Q = 0``
through ``sgn(Q)``, so the root is bracketed on the branch fixed by the sign
of the drive and found by bisection.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .constants import PhysicalConstants, default_constants
from .electrostatics import (ChargedBobPair, external_coulomb_force,
                             extrusion_distance, internal_coulomb_force)
from .gravsource import ForceSample, source_forces
from .quadrature import QuadratureError

log = logging.getLogger(__name__)

OUTCOMES = frozenset({"I", "II", "III", "IV"})
STABLE_DC_OUTCOMES = frozenset({"I", "III"})


class SolverError(RuntimeError):
    """Charge root could not be bracketed."""


class SimulationError(RuntimeError):
    def __init__(self, stage: str, t: float, cause: Exception):
        super().__init__(f"{stage} failed at t={t!r} s: {cause}")
        self.stage = stage
        self.t = t
        self.cause = cause


@dataclass(frozen=True)
class ChargeSolution:
    t: float
    Q: float
    d: float
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class TimeSeriesRow:
    t: float
    theta: float
    F1_i: float
    F2_i: float
    F3: float
    drive: float
    d_n: float
    Q: float
    d: float
    residual: float = field(default=0.0, compare=False)
    converged: bool = field(default=True, compare=False)


CSV_COLUMNS = ("t", "theta", "F1_i", "F2_i", "F3", "drive", "d_n", "Q", "d")


@dataclass(frozen=True)
class LockInResult:
    f_ref: float
    in_phase: float
    quadrature: float
    amplitude: float
    n_periods: int

    @property
    def phase(self) -> float:
        return math.atan2(self.quadrature, self.in_phase)


@dataclass(frozen=True)
class StabilityReport:
    phi: float
    pair_energy: float
    E_gap: float
    stable: bool
    ruled_out_outcomes: frozenset
    remaining_outcomes: frozenset

    @property
    def verdict(self) -> str:
        if self.stable:
            return "STABLE"
        return "UNSTABLE: outcomes I and III ruled out; II and IV remain"


def normal_deflection(cfg: ExperimentConfig, sample: ForceSample,
                      consts: PhysicalConstants | None = None) -> float:
    consts = consts or default_constants()
    return cfg.ell * sample.drive / (cfg.m_bob * consts.g)


def charge_gain(cfg: ExperimentConfig, consts: PhysicalConstants | None = None) -> float:
    """K = 2 e n_s pi r^2 ell / (m g), in coulombs per newton."""
    consts = consts or default_constants()
    return 2 * consts.e * cfg.n_s * math.pi * cfg.r_bob**2 * cfg.ell / (cfg.m_bob * consts.g)


def charge_rhs(Q: float, drive: float, cfg: ExperimentConfig,
               consts: PhysicalConstants | None = None, coulomb: bool = True) -> float:
    """Right-hand side of the self-consistent charge equation."""
    consts = consts or default_constants()
    if not coulomb:
        return charge_gain(cfg, consts) * drive
    d = extrusion_distance(Q, cfg.n_s, cfg.r_bob, consts)
    pair = ChargedBobPair(Q=Q, s=cfg.s, L=cfg.L_bob, d=d)
    restoring = external_coulomb_force(pair, consts) + internal_coulomb_force(pair, consts)
    return charge_gain(cfg, consts) * (drive + restoring)


def solve_charge_for_drive(drive: float, cfg: ExperimentConfig, t: float = 0.0,
                           consts: PhysicalConstants | None = None,
                           coulomb: bool = True) -> ChargeSolution:
    """Solve for the extruded charge produced by a given axial drive.

    ``coulomb=False`` drops the restoring Coulomb forces, leaving the linear
    relation Q = K * drive.
    """
    consts = consts or default_constants()
    if drive == 0:
        return ChargeSolution(t, 0.0, 0.0, 0.0, 0, True)
    if not coulomb:
        Q = charge_rhs(0.0, drive, cfg, consts, coulomb=False)
        return ChargeSolution(t, Q, extrusion_distance(Q, cfg.n_s, cfg.r_bob, consts), 0.0, 1, True)
    if cfg.s <= cfg.L_bob:
        raise SolverError("bob separation s must exceed the bob length L_bob")
    sg = 1.0 if drive > 0 else -1.0
    tol = cfg.solver_tol

    def f(x):  # x = |Q| on the selected branch; f increases with x
        return sg * (sg * x - charge_rhs(sg * x, drive, cfg, consts))

    # |Q| <= K|drive| and |Q| <= L sqrt(|drive| 4 pi eps0) bound the root from above
    hi = min(charge_gain(cfg, consts) * abs(drive),
             cfg.L_bob * math.sqrt(abs(drive) / consts.coulomb_k))
    lo = 0.0
    f_lo = -charge_gain(cfg, consts) * abs(drive)
    f_hi = f(hi)
    grow = 0
    while f_hi < 0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = f(hi)
        grow += 1
        if grow > 200 or not math.isfinite(f_hi):
            raise SolverError(f"could not bracket the charge root for drive={drive!r}")

    best_x, best_res = (lo, -f_lo) if -f_lo < f_hi else (hi, f_hi)
    iterations = 0
    while best_res > tol and iterations < cfg.max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket is down to adjacent floats
        f_mid = f(mid)
        iterations += 1
        if abs(f_mid) < best_res:
            best_x, best_res = mid, abs(f_mid)
        if f_mid == 0:
            break
        if f_mid < 0:
            lo = mid
        else:
            hi = mid

    Q = sg * best_x
    return ChargeSolution(t=t, Q=Q, d=extrusion_distance(Q, cfg.n_s, cfg.r_bob, consts),
                          residual=best_res, iterations=iterations, converged=best_res <= tol)


def solve_charge(cfg: ExperimentConfig, sample: ForceSample,
                 consts: PhysicalConstants | None = None) -> ChargeSolution:
    return solve_charge_for_drive(sample.drive, cfg, sample.t, consts)


def time_grid(cfg: ExperimentConfig) -> np.ndarray:
    return np.arange(cfg.n_steps) * cfg.dt


def simulate(cfg: ExperimentConfig, consts: PhysicalConstants | None = None,
             strict: bool = True) -> list[TimeSeriesRow]:
    """Evaluate the quasi-static model on t = 0, dt, ..., t_end.

    With ``strict`` a step whose charge solve misses ``solver_tol`` raises
    SimulationError; otherwise the row is kept with ``converged=False``.
    """
    consts = consts or default_constants()
    rows = []
    for t in time_grid(cfg):
        t = float(t)
        try:
            sample = source_forces(cfg, t, consts)
        except QuadratureError as exc:
            raise SimulationError("source-force quadrature", t, exc) from exc
        d_n = normal_deflection(cfg, sample, consts)
        if cfg.superconducting:
            try:
                sol = solve_charge(cfg, sample, consts)
            except SolverError as exc:
                raise SimulationError("charge solve", t, exc) from exc
            if not sol.converged:
                if strict:
                    raise SimulationError("charge solve", t, RuntimeError(
                        f"residual {sol.residual!r} C above solver_tol after {sol.iterations} iterations"))
                log.warning("charge solve did not converge at t=%r (residual %r)", t, sol.residual)
        else:
            sol = ChargeSolution(t, 0.0, 0.0, 0.0, 0, True)
        rows.append(TimeSeriesRow(
            t=t, theta=cfg.omega * t, F1_i=sample.F1_i, F2_i=sample.F2_i, F3=sample.F3,
            drive=sample.drive, d_n=d_n, Q=sol.Q, d=sol.d,
            residual=sol.residual, converged=sol.converged,
        ))
    return rows


def lock_in(t, x, f_ref: float) -> LockInResult:
    """Demodulate a uniformly sampled signal at ``f_ref``.

    Only the leading whole number of reference periods is used, so a
    constant offset drops out.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if t.shape != x.shape or t.ndim != 1 or t.size < 2:
        raise ValueError("t and x must be 1-D arrays of equal length >= 2")
    if f_ref <= 0:
        raise ValueError("f_ref must be positive")
    dt = (t[-1] - t[0]) / (t.size - 1)
    if not np.allclose(np.diff(t), dt, rtol=1e-6, atol=0):
        raise ValueError("samples must be uniformly spaced")
    span = t.size * dt
    n_periods = int(math.floor(span * f_ref + 1e-9))
    if n_periods < 1:
        raise ValueError(f"signal spans {span * f_ref:.3g} reference periods; need at least one")
    n = int(round(n_periods / (f_ref * dt)))
    n = min(n, t.size)
    phase = 2 * math.pi * f_ref * t[:n]
    in_phase = 2.0 / n * float(np.dot(x[:n], np.cos(phase)))
    quadrature = 2.0 / n * float(np.dot(x[:n], np.sin(phase)))
    return LockInResult(f_ref=f_ref, in_phase=in_phase, quadrature=quadrature,
                        amplitude=math.hypot(in_phase, quadrature), n_periods=n_periods)


def pair_breaking_assessment(phi: float, E_gap: float,
                             consts: PhysicalConstants | None = None) -> StabilityReport:
    """Compare the energy 2 e phi given to a Cooper pair with the gap."""
    consts = consts or default_constants()
    if not E_gap > 0:
        raise ValueError("E_gap must be positive")
    pair_energy = 2 * consts.e * abs(phi)
    stable = pair_energy < E_gap
    if stable:
        ruled_out = frozenset()
        remaining = OUTCOMES
    else:
        ruled_out = STABLE_DC_OUTCOMES
        remaining = OUTCOMES - STABLE_DC_OUTCOMES
    return StabilityReport(phi=phi, pair_energy=pair_energy, E_gap=E_gap, stable=stable,
                           ruled_out_outcomes=ruled_out, remaining_outcomes=remaining)
