"""Gravitational pull of the two rotating source boxes on the right pendulum.

Coordinates: the right pendulum bob sits at the origin and the ``i`` axis
runs along the line joining the two pendula. Each source is a uniform box
whose integration limits move with the platform angle ``omega * t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .constants import PhysicalConstants, default_constants
from .quadrature import integrate_box

EXCLUSION_RADIUS = 1e-6


@dataclass(frozen=True)
class BoxDomain:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    z_lo: float
    z_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi and self.z_lo < self.z_hi):
            raise ValueError(f"degenerate box {self}")
        if self.distance_to_origin() < EXCLUSION_RADIUS:
            raise ValueError(f"box {self} reaches within {EXCLUSION_RADIUS} m of the origin")

    @property
    def lo(self):
        return (self.x_lo, self.y_lo, self.z_lo)

    @property
    def hi(self):
        return (self.x_hi, self.y_hi, self.z_hi)

    @property
    def volume(self) -> float:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo) * (self.z_hi - self.z_lo)

    @property
    def center(self):
        return tuple(0.5 * (l + h) for l, h in zip(self.lo, self.hi))

    def distance_to_origin(self) -> float:
        nearest = [min(max(0.0, l), h) for l, h in zip(self.lo, self.hi)]
        return math.sqrt(sum(v * v for v in nearest))

    def scaled(self, k: float) -> "BoxDomain":
        """Same center, every edge multiplied by ``k``."""
        cx, cy, cz = self.center
        hx, hy, hz = (0.5 * k * (h - l) for l, h in zip(self.lo, self.hi))
        return BoxDomain(cx - hx, cx + hx, cy - hy, cy + hy, cz - hz, cz + hz)


@dataclass(frozen=True)
class AnglePair:
    cos_val: float
    sin_val: float


@dataclass(frozen=True)
class ForceSample:
    t: float
    F1_mag: float
    F2_mag: float
    beta: AnglePair
    gamma: AnglePair
    F1_i: float
    F2_i: float
    F3: float
    drive: float


def upper_source_domain(cfg: ExperimentConfig, t: float) -> BoxDomain:
    wt = cfg.omega * t
    x0 = cfg.R - 0.5 * cfg.s * math.cos(wt)
    y0 = 0.5 * cfg.s * math.sin(wt)
    return BoxDomain(x0, x0 + cfg.a, y0 - 0.5 * cfg.b, y0 + 0.5 * cfg.b,
                     -0.5 * cfg.c, 0.5 * cfg.c)


def lower_source_domain(cfg: ExperimentConfig, t: float) -> BoxDomain:
    wt = cfg.omega * t
    x0 = cfg.R + 0.5 * cfg.s * math.cos(wt)
    y0 = 0.5 * cfg.s * math.sin(wt)
    return BoxDomain(x0, x0 + cfg.a, y0 - 0.5 * cfg.b, y0 + 0.5 * cfg.b,
                     -0.5 * cfg.c, 0.5 * cfg.c)


def _inverse_square(x, y, z):
    return 1.0 / (x * x + y * y + z * z)


def _inverse_square_vector(x, y, z):
    r2 = x * x + y * y + z * z
    inv_r3 = 1.0 / (r2 * np.sqrt(r2))
    return np.stack([x * inv_r3, y * inv_r3, z * inv_r3])


def inverse_square_box_integral(dom: BoxDomain, tol: float = 1e-9) -> float:
    """Integral of 1/(x^2 + y^2 + z^2) over ``dom``, in metres.

    Raises QuadratureError if ``tol`` (relative) is not reached.
    """
    value, _ = integrate_box(_inverse_square, dom.lo, dom.hi, rtol=tol)
    return value


def box_field_integral(dom: BoxDomain, tol: float = 1e-9) -> np.ndarray:
    """Exact vector integral of r_hat/r^2 over ``dom`` (components along i, j, k)."""
    value, _ = integrate_box(_inverse_square_vector, dom.lo, dom.hi, rtol=tol)
    return value


def mc_box_integral(dom: BoxDomain, n_samples: int, seed: int, integrand=None,
                    chunk: int = 1_000_000):
    """Plain Monte-Carlo estimate of a box integral.

    Returns ``(estimate, standard_error)``. ``integrand`` defaults to
    1/(x^2 + y^2 + z^2).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    f = _inverse_square if integrand is None else integrand
    rng = np.random.default_rng(seed)
    lo = np.asarray(dom.lo)
    width = np.asarray(dom.hi) - lo
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        pts = lo + width * rng.random((m, 3))
        vals = np.broadcast_to(np.asarray(f(pts[:, 0], pts[:, 1], pts[:, 2]), dtype=float), (m,))
        total += vals.sum()
        total_sq += np.dot(vals, vals)
        done += m
    mean = total / n_samples
    if n_samples > 1:
        var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    else:
        var = 0.0
    vol = dom.volume
    return vol * mean, vol * math.sqrt(var / n_samples)


def beta_angle(cfg: ExperimentConfig, t: float) -> AnglePair:
    """Direction of the upper-source force relative to the pendulum axis.

    The cosine is the printed square root, so it is never negative.
    """
    wt = cfg.omega * t
    r = cfg.R + 0.5 * cfg.a
    cw, sw = math.cos(wt), math.sin(wt)
    denom = r * r + 0.25 * cfg.s**2 - cfg.s * r * cw
    # numerator is the perfect square (r cos wt - s/2)^2; written that way it stays >= 0
    num = (r * cw - 0.5 * cfg.s) ** 2
    return AnglePair(math.sqrt(num / denom), r * sw / math.sqrt(denom))


def gamma_angle(cfg: ExperimentConfig, t: float) -> AnglePair:
    """Direction of the lower-source force (squared first term in both denominators)."""
    wt = cfg.omega * t
    u = cfg.s / (2 * cfg.R + cfg.a) + math.cos(wt)
    sw = math.sin(wt)
    norm = math.hypot(u, sw)
    return AnglePair(u / norm, sw / norm)


def source_forces(cfg: ExperimentConfig, t: float,
                  consts: PhysicalConstants | None = None) -> ForceSample:
    consts = consts or default_constants()
    beta = beta_angle(cfg, t)
    gamma = gamma_angle(cfg, t)
    F3 = consts.G * cfg.m_bob**2 / cfg.s**2
    if cfg.rho_source == 0:
        F1 = F2 = 0.0
    else:
        scale = consts.G * cfg.m_bob * cfg.rho_source
        F1 = scale * inverse_square_box_integral(upper_source_domain(cfg, t), cfg.quad_tol)
        F2 = scale * inverse_square_box_integral(lower_source_domain(cfg, t), cfg.quad_tol)
    F1_i = F1 * beta.cos_val
    F2_i = F2 * gamma.cos_val
    return ForceSample(t=t, F1_mag=F1, F2_mag=F2, beta=beta, gamma=gamma,
                       F1_i=F1_i, F2_i=F2_i, F3=F3, drive=F1_i - F2_i - F3)
