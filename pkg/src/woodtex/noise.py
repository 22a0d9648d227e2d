"""Sparse convolution noise: single/multi-band, 1D and 3D, optionally
oriented by a frame field, returning value and analytic gradient.

Band i uses kernels (and search cells) scaled by band_factor**i and
amplitudes scaled by band_factor**(dropoff*i).  Density is the mean
impulse count per natural cell (a cell matching the kernel extents), so
changing the search-cell aspect never changes the texture statistics.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _fast
from ._layout import (
    NS_SE0, NS_H0, NS_LAM, NS_NB, NS_BETA, NS_GAMMA, NS_ALPHA, NS_SIGNED,
    NS_KIND, NS_SHARP, NS_ORIENTED, NS_SIZE,
    N1_ALPHA, N1_SCALE, N1_LAM, N1_NB, N1_BETA, N1_GAMMA, N1_SIZE,
)
from .kernels import KernelShape
from .params import ParameterError, Noise1DParams

_IDENTITY = np.eye(3)


@dataclass(frozen=True)
class NoiseSpec:
    shape: KernelShape = field(default_factory=KernelShape)
    base_scale: tuple = (1.0, 1.0, 1.0)   # kernel semi-axes (frame coords)
    density: float = 2.0                  # mean impulses per natural cell
    magnitude: float = 1.0
    bands: int = 1
    band_factor: float = 0.5
    dropoff: float = 1.0
    orientation: str = "axis_aligned"     # axis_aligned | frame_field
    cell_aspect: tuple = None             # search-cell half-extents / max semi-axis
    signed: bool = False
    seed: int = 0

    def validate(self, path="noise"):
        self.shape.validate(path + ".shape")
        if len(self.base_scale) != 3 or any(s <= 0 for s in self.base_scale):
            raise ParameterError(path + ".base_scale", "semi-axes must be > 0")
        if self.density <= 0:
            raise ParameterError(path + ".density", "must be > 0")
        if self.bands < 1:
            raise ParameterError(path + ".bands", "must be >= 1")
        if not 0.0 < self.band_factor < 1.0:
            raise ParameterError(path + ".band_factor", "must be in (0, 1)")
        if self.orientation not in ("axis_aligned", "frame_field"):
            raise ParameterError(path + ".orientation",
                                 "must be axis_aligned or frame_field")
        if self.cell_aspect is not None:
            if len(self.cell_aspect) != 3 or any(a <= 0 for a in self.cell_aspect):
                raise ParameterError(path + ".cell_aspect", "components must be > 0")
        return self


def ns_array(spec):
    """Pack a NoiseSpec into the flat NS layout of the jitted core."""
    se = np.asarray(spec.base_scale, dtype=float)
    m = float(se.max())
    if spec.cell_aspect is not None:
        aspect = np.asarray(spec.cell_aspect, dtype=float)
    elif spec.orientation == "frame_field":
        aspect = np.ones(3)                # conservative: sphere-bound cubes
    else:
        aspect = se / m                    # natural: cells match the kernel
    h = m * aspect
    lam_cell = spec.density * float(np.prod(h / se))
    ns = np.zeros(NS_SIZE)
    ns[NS_SE0:NS_SE0 + 3] = se
    ns[NS_H0:NS_H0 + 3] = h
    ns[NS_LAM] = lam_cell
    ns[NS_NB] = spec.bands
    ns[NS_BETA] = spec.band_factor
    ns[NS_GAMMA] = spec.dropoff
    ns[NS_ALPHA] = spec.magnitude
    ns[NS_SIGNED] = 1.0 if spec.signed else 0.0
    ns[NS_KIND] = 0.0 if spec.shape.kind == "wyvill" else 1.0
    ns[NS_SHARP] = spec.shape.sharpness
    ns[NS_ORIENTED] = 1.0 if spec.orientation == "frame_field" else 0.0
    return ns


def _resolve_frame(frame, p):
    if frame is None:
        return _IDENTITY
    if callable(frame):
        return np.ascontiguousarray(frame(p), dtype=float)
    return np.ascontiguousarray(frame, dtype=float)


def _run(spec, band0, band1, p, frame):
    ns = ns_array(spec)
    seed = np.uint64(spec.seed)
    pts = np.asarray(p, dtype=float)
    if pts.ndim == 1:
        r = _resolve_frame(frame, pts)
        v, gx, gy, gz, _ = _fast.noise3(ns, r, seed, band0, band1,
                                        pts[0], pts[1], pts[2], 1.0)
        return v, np.array([gx, gy, gz])
    vals = np.empty(pts.shape[0])
    grads = np.empty((pts.shape[0], 3))
    fixed = None if callable(frame) else _resolve_frame(frame, None)
    for i in range(pts.shape[0]):
        r = _resolve_frame(frame, pts[i]) if fixed is None else fixed
        v, gx, gy, gz, _ = _fast.noise3(ns, r, seed, band0, band1,
                                        pts[i, 0], pts[i, 1], pts[i, 2], 1.0)
        vals[i] = v
        grads[i, 0] = gx
        grads[i, 1] = gy
        grads[i, 2] = gz
    return vals, grads


def noise_band(spec, band, p, frame=None):
    """One band of noise at p (or an (N,3) batch): (value, gradient)."""
    spec.validate()
    if not 0 <= band < spec.bands:
        raise ParameterError("band", "must be in [0, bands)")
    return _run(spec, band, band + 1, p, frame)


def noise_eval(spec, p, frame=None):
    """All bands summed: (value, gradient)."""
    spec.validate()
    return _run(spec, 0, spec.bands, p, frame)


def noise_considered(spec, p, frame=None):
    """Impulses examined (not necessarily contributing) for one query."""
    spec.validate()
    ns = ns_array(spec)
    pts = np.asarray(p, dtype=float)
    r = _resolve_frame(frame, pts)
    _, _, _, _, n = _fast.noise3(ns, r, np.uint64(spec.seed), 0, spec.bands,
                                 pts[0], pts[1], pts[2], 1.0)
    return int(n)


def n1_array(spec):
    arr = np.zeros(N1_SIZE)
    arr[N1_ALPHA] = spec.magnitude
    arr[N1_SCALE] = spec.kernel_width
    arr[N1_LAM] = spec.density
    arr[N1_NB] = spec.bands
    arr[N1_BETA] = spec.band_factor
    arr[N1_GAMMA] = spec.dropoff
    return arr


def noise_1d(spec, t, seed=0):
    """Signed multiband 1D noise: (value, derivative).

    Wyvill kernels on interval cells; impulses carry hashed +-1 signs so
    the noise is zero-mean.
    """
    if isinstance(spec, Noise1DParams):
        spec.validate()
    arr = n1_array(spec)
    ts = np.asarray(t, dtype=float)
    useed = np.uint64(seed)
    if ts.ndim == 0:
        return _fast.noise1(arr, useed, float(ts))
    vals = np.empty(ts.shape[0])
    ders = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        vals[i], ders[i] = _fast.noise1(arr, useed, ts[i])
    return vals, ders
