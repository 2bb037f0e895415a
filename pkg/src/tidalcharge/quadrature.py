"""Adaptive tensor-product Gauss-Legendre cubature over axis-aligned boxes.

Each box is integrated with an ``order``-point rule on every axis. The error
of a box is estimated axis by axis: the rule is re-applied with a lower
order on one axis at a time and the difference recorded. Boxes carrying the
largest errors are bisected along their worst axis until the summed error
estimate meets the requested tolerance. All boxes of one refinement pass are
evaluated in a single vectorized call.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Tolerance not reached within the subdivision budget."""

    def __init__(self, estimate, error, n_boxes):
        super().__init__(
            f"quadrature did not converge: estimate={estimate!r}, "
            f"error estimate={error!r} after {n_boxes} boxes"
        )
        self.estimate = estimate
        self.error = error
        self.n_boxes = n_boxes


@lru_cache(maxsize=None)
def _rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w  # mapped to [0, 1]


def _tensor_estimate(func, lo, hi, orders):
    """Integrate over every box in (lo, hi) with per-axis orders; returns (C, B)."""
    B = lo.shape[0]
    width = hi - lo
    axes = []
    weights = []
    for k, n in enumerate(orders):
        x, w = _rule(n)
        axes.append(lo[:, k, None] + width[:, k, None] * x[None, :])  # (B, n)
        weights.append(w)
    X = axes[0][:, :, None, None]
    Y = axes[1][:, None, :, None]
    Z = axes[2][:, None, None, :]
    shape = (B, orders[0], orders[1], orders[2])
    X, Y, Z = np.broadcast_to(X, shape), np.broadcast_to(Y, shape), np.broadcast_to(Z, shape)
    vals = np.asarray(func(X.ravel(), Y.ravel(), Z.ravel()), dtype=float)
    vals = vals.reshape((-1,) + shape)
    W = weights[0][:, None, None] * weights[1][None, :, None] * weights[2][None, None, :]
    return np.einsum("cbijk,ijk->cb", vals, W) * np.prod(width, axis=1)[None, :]


def _estimate_boxes(func, lo, hi, order, low_order):
    full = _tensor_estimate(func, lo, hi, (order,) * 3)
    axis_err = np.empty((lo.shape[0], 3))
    for k in range(3):
        orders = [order] * 3
        orders[k] = low_order
        reduced = _tensor_estimate(func, lo, hi, tuple(orders))
        axis_err[:, k] = np.max(np.abs(full - reduced), axis=0)
    return full, axis_err


def integrate_box(func, lo, hi, rtol=1e-9, atol=0.0, order=8, low_order=5, max_boxes=20000):
    """Integrate ``func(x, y, z)`` over the box ``lo <= (x, y, z) <= hi``.

    ``func`` takes three flat arrays of equal length and returns either an
    array of the same length or a ``(C, N)`` array for a C-component
    integrand. Returns ``(estimate, error_estimate)``; the estimate is a float
    for scalar integrands and a length-C array otherwise.

    Raises QuadratureError when ``max(atol, rtol * |estimate|)`` cannot be
    met with at most ``max_boxes`` boxes.
    """
    lo = np.asarray(lo, dtype=float).reshape(1, 3)
    hi = np.asarray(hi, dtype=float).reshape(1, 3)
    probe = np.asarray(func(lo[0, :1], lo[0, 1:2], lo[0, 2:3]), dtype=float)
    scalar = probe.ndim == 1

    est, axis_err = _estimate_boxes(func, lo, hi, order, low_order)
    while True:
        box_err = axis_err.sum(axis=1)
        total = est.sum(axis=1)
        error = box_err.sum()
        target = max(atol, rtol * np.max(np.abs(total)))
        if error <= target:
            break
        if lo.shape[0] >= max_boxes:
            raise QuadratureError(total[0] if scalar else total, error, lo.shape[0])

        # split the smallest set of worst boxes that leaves at most target/2 behind
        ranked = np.argsort(-box_err, kind="stable")
        remaining = error - np.cumsum(box_err[ranked])
        n_split = int(np.searchsorted(-remaining, -0.5 * target)) + 1
        n_split = min(n_split, max_boxes - lo.shape[0], len(ranked))
        n_split = max(n_split, 1)
        chosen = ranked[:n_split]
        keep = np.ones(lo.shape[0], dtype=bool)
        keep[chosen] = False

        c_lo, c_hi = lo[chosen], hi[chosen]
        axis = np.argmax(axis_err[chosen], axis=1)
        rows = np.arange(n_split)
        mid = 0.5 * (c_lo[rows, axis] + c_hi[rows, axis])
        left_hi = c_hi.copy()
        left_hi[rows, axis] = mid
        right_lo = c_lo.copy()
        right_lo[rows, axis] = mid
        new_lo = np.concatenate([c_lo, right_lo])
        new_hi = np.concatenate([left_hi, c_hi])

        new_est, new_err = _estimate_boxes(func, new_lo, new_hi, order, low_order)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        est = np.concatenate([est[:, keep], new_est], axis=1)
        axis_err = np.concatenate([axis_err[keep], new_err])

    if scalar:
        return float(total[0]), float(error)
    return total, float(error)
