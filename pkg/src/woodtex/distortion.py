"""Warped lookups into idealized wood.

A point field f(p) = p + sum_d m_d(p) a_d(p) displaces lookups along the
cylindrical coordinate directions; m_d are multiband signed noises.  The
theta term is applied as an arc (a rotation about the axis) so purely
tangential distortion preserves the radius exactly.  Scalar fields are
pulled back by composition; vectors and gradients transport through a
compressed, positive-definite Jacobian.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _fast
from ._layout import (
    NS_SE0, NS_H0, NS_LAM, NS_NB, NS_BETA, NS_GAMMA, NS_ALPHA, NS_SIGNED,
    NS_KIND, NS_SHARP, NS_ORIENTED, NS_SIZE,
    PF_DIST_R, PF_DIST_T, PF_DIST_Z, PF_SIZE,
    PU_DIST_R, PU_DIST_T, PU_DIST_Z, PU_SIZE,
    ROLE_DIST_R, ROLE_DIST_T, ROLE_DIST_Z,
)
from .hashing import hash_u64
from .params import AxisDistortionParams

AXIS_EPS = _fast.AXIS_EPS


@dataclass(frozen=True)
class DistortionSpec:
    r: AxisDistortionParams = field(default_factory=AxisDistortionParams)
    theta: AxisDistortionParams = field(default_factory=AxisDistortionParams)
    z: AxisDistortionParams = field(default_factory=AxisDistortionParams)
    seed: int = 0

    def validate(self):
        self.r.validate("r")
        self.theta.validate("theta")
        self.z.validate("z")
        return self


@dataclass(frozen=True)
class JacobianSample:
    J: np.ndarray
    J_inv: np.ndarray
    J_T: np.ndarray


def axis_block(ax):
    """Pack one axis distortion into [enabled] + NS slots.

    Kernel semi-axes live in the cylindrical frame; search cells are world
    axis-aligned, so they take the larger of the two in-plane semi-axes in
    x and y (the z axis of the plain cylindrical frame never rotates).
    """
    block = np.zeros(1 + NS_SIZE)
    block[0] = 1.0 if ax.enabled else 0.0
    se = np.asarray(ax.kernel_size, dtype=float)
    m = max(se[0], se[1])
    block[1 + NS_SE0:1 + NS_SE0 + 3] = se
    block[1 + NS_H0] = m
    block[1 + NS_H0 + 1] = m
    block[1 + NS_H0 + 2] = se[2]
    block[1 + NS_LAM] = ax.density * (m * m) / (se[0] * se[1])
    block[1 + NS_NB] = ax.bands
    block[1 + NS_BETA] = ax.band_factor
    block[1 + NS_GAMMA] = ax.dropoff
    block[1 + NS_ALPHA] = ax.magnitude
    block[1 + NS_SIGNED] = 1.0
    block[1 + NS_KIND] = 0.0
    block[1 + NS_SHARP] = 0.0
    block[1 + NS_ORIENTED] = 0.0 if se[0] == se[1] else 1.0
    return block


def pack_distortion(spec):
    """Flat (PF, PU) pair holding only the distortion blocks."""
    pf = np.zeros(PF_SIZE)
    pu = np.zeros(PU_SIZE, dtype=np.uint64)
    pf[PF_DIST_R:PF_DIST_R + 1 + NS_SIZE] = axis_block(spec.r)
    pf[PF_DIST_T:PF_DIST_T + 1 + NS_SIZE] = axis_block(spec.theta)
    pf[PF_DIST_Z:PF_DIST_Z + 1 + NS_SIZE] = axis_block(spec.z)
    pu[PU_DIST_R] = hash_u64(spec.seed, [ROLE_DIST_R])
    pu[PU_DIST_T] = hash_u64(spec.seed, [ROLE_DIST_T])
    pu[PU_DIST_Z] = hash_u64(spec.seed, [ROLE_DIST_Z])
    return pf, pu


def _terms(spec, p, compressed):
    pf, pu = pack_distortion(spec)
    px, py, pz = (float(v) for v in p)
    r = math.hypot(px, py)
    if r > AXIS_EPS:
        irx, iry = px / r, py / r
    else:
        irx, iry = 1.0, 0.0
    rm = np.empty((3, 3))
    w = np.empty((3, 3))
    mr, mt, mz = _fast.distortion_terms(pf, pu, px, py, pz, r, irx, iry,
                                        compressed, rm, w)
    return px, py, pz, r, irx, iry, mr, mt, mz, w


def distort_point(spec, p):
    """f(p): radial and longitudinal displacements plus an angular arc."""
    spec.validate()
    px, py, pz, r, irx, iry, mr, mt, mz, _ = _terms(spec, p, True)
    return np.array(_fast.warp_point(px, py, pz, r, irx, iry, mr, mt, mz))


def jacobian(spec, p, compressed=True):
    """Jacobian of f at p (m * J_a terms omitted).

    With `compressed` each magnitude gradient is squashed into the unit
    ball, and a rare uniform rescale keeps the symmetric part positive
    definite even when several axis terms align adversarially.
    """
    spec.validate()
    _, _, _, r, irx, iry, _, _, _, w = _terms(spec, p, compressed)
    j = np.empty((3, 3))
    if compressed:
        _fast.build_jacobian(w, irx, iry, j)
    else:
        _raw_jacobian(w, irx, iry, j)
    return JacobianSample(J=j, J_inv=np.linalg.inv(j), J_T=j.T.copy())


def _raw_jacobian(w, irx, iry, j):
    a = np.array([[irx, iry, 0.0], [-iry, irx, 0.0], [0.0, 0.0, 1.0]])
    j[:] = np.eye(3) + a.T @ w


def pull_scalar(scalar_field, spec, p):
    """s(f(p))."""
    return scalar_field(distort_point(spec, p))


def pull_vector(vector_field, spec, p):
    """Contravariant transport: J^-1 v(f(p))."""
    sample = jacobian(spec, p)
    return sample.J_inv @ np.asarray(vector_field(distort_point(spec, p)), dtype=float)


def pull_gradient(gradient_field, spec, p, compressed=True):
    """Covariant transport: J^T g(f(p))."""
    sample = jacobian(spec, p, compressed)
    return sample.J_T @ np.asarray(gradient_field(distort_point(spec, p)), dtype=float)


def magnitude_noise_spec(ax, axis_seed):
    """The NS block and seed for one axis, for direct noise inspection."""
    return axis_block(ax)[1:], np.uint64(axis_seed)
