"""Kernel envelopes and the oriented-ellipsoid transform.

Two compact-support envelopes: the Wyvill polynomial (C1 at the support
boundary) for continuous noise, and the bump kernel with a sharpness dial
for discrete features.  Kernels are placed as rotated, scaled ellipsoids;
`bounding_scale` shrinks a placement so it fits one axis-aligned cell.
"""

import math
from dataclasses import dataclass

import numpy as np

from .params import ParameterError

EXP_CLAMP = 700.0


@dataclass(frozen=True)
class KernelShape:
    kind: str = "wyvill"     # wyvill | bump
    sharpness: float = 1.0   # bump only

    def validate(self, path="kernel"):
        if self.kind not in ("wyvill", "bump"):
            raise ParameterError(path + ".kind", "must be wyvill or bump")
        if self.sharpness < 0.0:
            raise ParameterError(path + ".sharpness", "must be >= 0")
        return self


@dataclass(frozen=True)
class KernelPlacement:
    center: np.ndarray
    rotation: np.ndarray          # columns are the kernel axes
    kernel_scale: np.ndarray      # ellipsoid semi-axes
    bound_scale: float = 1.0

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        if np.max(np.abs(r.T @ r - np.eye(3))) > 1e-9:
            raise ParameterError("placement.rotation", "must be orthonormal")
        if np.any(np.asarray(self.kernel_scale, dtype=float) <= 0.0):
            raise ParameterError("placement.kernel_scale", "must be > 0")
        if self.bound_scale <= 0.0:
            raise ParameterError("placement.bound_scale", "must be > 0")


def wyvill(r):
    """(1 - r^2)^3 inside the unit support, 0 outside."""
    r = np.asarray(r, dtype=float)
    q = r * r
    t = 1.0 - q
    return np.where(q < 1.0, t * t * t, 0.0)


def bump(r, s):
    """exp(-s r^2 / (1 - r^2)) inside the unit support, 0 outside.

    Blends from a box (s -> 0) through a bump (s ~ 1) to a spike (s -> inf).
    """
    r = np.asarray(r, dtype=float)
    q = r * r
    inside = q < 1.0
    qs = np.where(inside, q, 0.0)
    e = s * qs / (1.0 - qs)
    return np.where(inside & (e <= EXP_CLAMP), np.exp(-np.minimum(e, EXP_CLAMP)), 0.0)


def kernel_value(shape, r):
    if shape.kind == "wyvill":
        return wyvill(r)
    return bump(r, shape.sharpness)


def kernel_gradient(shape, x):
    """Analytic gradient of the kernel at a kernel-space point."""
    x = np.asarray(x, dtype=float)
    q = float(x @ x)
    if q >= 1.0:
        return np.zeros(3)
    if shape.kind == "wyvill":
        t = 1.0 - q
        dkdq = -3.0 * t * t
    else:
        t = 1.0 - q
        e = shape.sharpness * q / t
        if e > EXP_CLAMP:
            return np.zeros(3)
        dkdq = -shape.sharpness * math.exp(-e) / (t * t)
    return dkdq * 2.0 * x


def bounding_scale(rotation, kernel_scale, cell_scale):
    """Uniform shrink factor fitting the rotated ellipsoid in one cell.

    The axis-aligned extents of the rotated ellipsoid are the 2-norms of
    the rows of R * diag(kernel_scale); the fit compares each against the
    cell half-extent on that axis.
    """
    r = np.asarray(rotation, dtype=float)
    se = np.asarray(kernel_scale, dtype=float)
    sc = np.asarray(cell_scale, dtype=float)
    extents = np.sqrt(((r * se[None, :]) ** 2).sum(axis=1))
    return float(np.min(sc / extents))


def oriented_eval(shape, placement, p):
    """Kernel value and gradient of an oriented placement at a world point.

    The transform is x = (1/s_b) S_e^-1 R^T (p - k); the gradient follows
    the chain rule with R and S_e treated as locally constant.
    """
    p = np.asarray(p, dtype=float)
    k = np.asarray(placement.center, dtype=float)
    r = np.asarray(placement.rotation, dtype=float)
    se = np.asarray(placement.kernel_scale, dtype=float)
    inv = 1.0 / (se * placement.bound_scale)
    y = (r.T @ (p - k)) * inv
    q = float(y @ y)
    if q >= 1.0:
        return 0.0, np.zeros(3)
    if shape.kind == "wyvill":
        t = 1.0 - q
        value = t * t * t
        dkdq = -3.0 * t * t
    else:
        t = 1.0 - q
        e = shape.sharpness * q / t
        if e > EXP_CLAMP:
            return 0.0, np.zeros(3)
        value = math.exp(-e)
        dkdq = -shape.sharpness * value / (t * t)
    grad_y = dkdq * 2.0 * y
    return float(value), r @ (grad_y * inv)
