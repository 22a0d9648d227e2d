"""The wood volume model: from a 3D point to a full set of BSDF inputs.

Evaluation order per point: distort the lookup, read cylindrical
coordinates at the source point, turn radius into growth time, drive the
ring/highlight/porosity waves, rotate the frame for interlocked grain,
stamp pore and ray masks, apply Beer's-law color, and transport the fiber
directions back through the distortion Jacobian.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _fast, waves
from ._layout import (
    NS_SE0, NS_H0, NS_LAM, NS_NB, NS_BETA, NS_GAMMA, NS_ALPHA, NS_SIGNED,
    NS_KIND, NS_SHARP, NS_ORIENTED, NS_SIZE, TW_SIZE, RW_SIZE,
    PF_RING_WIDTH, PF_RING_POROUSNESS, PF_SIGMA, PF_ELL0, PF_ELLG,
    PF_FIBER_SCALE, PF_BUMP_SCALE, PF_PORE_ELLP, PF_TRI, PF_RING_WAVE,
    PF_HI_WAVE, PF_POR_WAVE, PF_DIST_R, PF_DIST_T, PF_DIST_Z, PF_GROWTH,
    PF_INTERLOCK, PF_PORE, PF_RAY, PF_ETA, PF_COAT_KIND, PF_ROUGH, PF_SIZE,
    RAY_SIZE_, RAY_ASPECT, RAY_LAM, RAY_SHARP, RAY_DR, RAY_DZ, RAY_VT,
    PU_SEED, PU_DIST_R, PU_DIST_T, PU_DIST_Z, PU_GROWTH, PU_INTERLOCK,
    PU_PORE, PU_RAY, PU_SIZE,
    ROLE_DIST_R, ROLE_DIST_T, ROLE_DIST_Z, ROLE_GROWTH, ROLE_INTERLOCK,
    ROLE_PORE, ROLE_RAY,
)
from .distortion import axis_block
from .hashing import hash_u64
from .noise import n1_array
from .params import WoodParams, ParameterError


@dataclass(frozen=True)
class Frame:
    radial: np.ndarray
    circumferential: np.ndarray
    longitudinal: np.ndarray

    def matrix(self):
        """Columns are (radial, circumferential, longitudinal)."""
        return np.column_stack([self.radial, self.circumferential, self.longitudinal])


@dataclass(frozen=True)
class ShadingRecord:
    diffuse_color: np.ndarray
    fiber_color: np.ndarray
    highlight_width: float
    fiber_dir_longitudinal: np.ndarray
    fiber_dir_radial: np.ndarray
    ray_mask: float
    pore_mask: float
    bump_height: float


class ShadingBatch:
    """Struct-of-arrays result of a batched evaluation."""

    __slots__ = ("diffuse_color", "fiber_color", "fiber_dir_longitudinal",
                 "fiber_dir_radial", "ray_mask", "pore_mask",
                 "highlight_width", "bump_height", "ring_value", "twist_angle")

    def __init__(self, n):
        self.diffuse_color = np.empty((n, 3))
        self.fiber_color = np.empty((n, 3))
        self.fiber_dir_longitudinal = np.empty((n, 3))
        self.fiber_dir_radial = np.empty((n, 3))
        self.ray_mask = np.empty(n)
        self.pore_mask = np.empty(n)
        self.highlight_width = np.empty(n)
        self.bump_height = np.empty(n)
        self.ring_value = np.empty(n)
        self.twist_angle = np.empty(n)

    def record(self, i):
        return ShadingRecord(
            diffuse_color=self.diffuse_color[i].copy(),
            fiber_color=self.fiber_color[i].copy(),
            highlight_width=float(self.highlight_width[i]),
            fiber_dir_longitudinal=self.fiber_dir_longitudinal[i].copy(),
            fiber_dir_radial=self.fiber_dir_radial[i].copy(),
            ray_mask=float(self.ray_mask[i]),
            pore_mask=float(self.pore_mask[i]),
            bump_height=float(self.bump_height[i]),
        )


# --- packing -----------------------------------------------------------------------

def pack_params(params):
    """Flatten a validated WoodParams tree into (PF, PU) for the jitted core."""
    params.validate()
    pf = np.zeros(PF_SIZE)
    pu = np.zeros(PU_SIZE, dtype=np.uint64)
    pf[PF_RING_WIDTH] = params.mean_ring_width
    pf[PF_RING_POROUSNESS] = params.ring_porousness
    pf[PF_SIGMA:PF_SIGMA + 3] = params.sigma
    pf[PF_ELL0] = params.path_offset
    pf[PF_ELLG] = params.path_ring
    pf[PF_FIBER_SCALE] = params.fiber_color_scale
    pf[PF_BUMP_SCALE] = params.bump_scale
    pf[PF_PORE_ELLP] = params.pores.darken_scale
    pf[PF_TRI:PF_TRI + TW_SIZE] = waves.compile_growth_triangle(params.growth_wave)
    pf[PF_RING_WAVE:PF_RING_WAVE + RW_SIZE] = waves.compile_rect(params.ring_wave)
    pf[PF_HI_WAVE:PF_HI_WAVE + RW_SIZE] = waves.compile_rect(params.highlight_width)
    pf[PF_POR_WAVE:PF_POR_WAVE + RW_SIZE] = waves.compile_rect(params.porosity_wave,
                                                               invert=True)
    pf[PF_DIST_R:PF_DIST_R + 1 + NS_SIZE] = axis_block(params.distortion_r)
    pf[PF_DIST_T:PF_DIST_T + 1 + NS_SIZE] = axis_block(params.distortion_theta)
    pf[PF_DIST_Z:PF_DIST_Z + 1 + NS_SIZE] = axis_block(params.distortion_z)
    pf[PF_GROWTH:PF_GROWTH + 6] = n1_array(params.growth_noise)
    pf[PF_INTERLOCK:PF_INTERLOCK + 6] = n1_array(params.interlock)

    # pores: bump kernels elongated along the (interlocked) longitudinal axis.
    # Cells sit partway between cubes and the kernel aspect so mildly tilted
    # kernels still fit after the bounding shrink.
    po = params.pores
    se = np.array([po.size, po.size, po.size * po.aspect])
    root = math.sqrt(po.aspect)
    h = np.array([po.size * root, po.size * root, po.size * po.aspect])
    lam_cell = po.density * float(np.prod(h / se))
    block = np.zeros(NS_SIZE)
    block[NS_SE0:NS_SE0 + 3] = se
    block[NS_H0:NS_H0 + 3] = h
    block[NS_LAM] = lam_cell
    block[NS_NB] = 1
    block[NS_BETA] = 0.5
    block[NS_GAMMA] = 1.0
    block[NS_ALPHA] = 1.0
    block[NS_SIGNED] = 0.0
    block[NS_KIND] = 1.0
    block[NS_SHARP] = po.sharpness
    block[NS_ORIENTED] = 1.0
    pf[PF_PORE:PF_PORE + NS_SIZE] = block

    # rays: cylindrical cells sized to the kernel so the per-cell density
    # equals the natural density
    ra = params.rays
    pf[PF_RAY + RAY_SIZE_] = ra.size
    pf[PF_RAY + RAY_ASPECT] = ra.aspect
    pf[PF_RAY + RAY_LAM] = ra.density
    pf[PF_RAY + RAY_SHARP] = ra.sharpness
    pf[PF_RAY + RAY_DR] = 2.0 * ra.size * ra.aspect
    pf[PF_RAY + RAY_DZ] = 2.0 * ra.size
    pf[PF_RAY + RAY_VT] = 8.0 * ra.size ** 3 * ra.aspect

    pf[PF_ETA] = params.coating.eta
    pf[PF_COAT_KIND] = {"none": 0.0, "smooth": 1.0, "beckmann": 2.0}[params.coating.kind]
    pf[PF_ROUGH] = params.coating.roughness

    seed = int(params.seed)
    pu[PU_SEED] = seed
    pu[PU_DIST_R] = hash_u64(seed, [ROLE_DIST_R])
    pu[PU_DIST_T] = hash_u64(seed, [ROLE_DIST_T])
    pu[PU_DIST_Z] = hash_u64(seed, [ROLE_DIST_Z])
    pu[PU_GROWTH] = hash_u64(seed, [ROLE_GROWTH])
    pu[PU_INTERLOCK] = hash_u64(seed, [ROLE_INTERLOCK])
    pu[PU_PORE] = hash_u64(seed, [ROLE_PORE])
    pu[PU_RAY] = hash_u64(seed, [ROLE_RAY])
    return pf, pu


# --- individual DAG stages (random access, shared with the batched core) -----------

def cylindrical_coords(p):
    """(r, theta, z, frame); on the axis the frame falls back to (x, y, z)."""
    x, y, z = (float(v) for v in p)
    r = math.hypot(x, y)
    if r > _fast.AXIS_EPS:
        radial = np.array([x / r, y / r, 0.0])
        circ = np.array([-y / r, x / r, 0.0])
    else:
        radial = np.array([1.0, 0.0, 0.0])
        circ = np.array([0.0, 1.0, 0.0])
    return r, math.atan2(y, x), z, Frame(radial, circ, np.array([0.0, 0.0, 1.0]))


def time_volume(r, params):
    """Growth time at radius r: scaled radius + seasonal wave + 1D noise."""
    tri = waves.compile_growth_triangle(params.growth_wave)
    rr = float(r) / params.mean_ring_width
    phase = rr - math.floor(rr)
    t_pre = rr + _fast.tri_eval(tri, phase)[0]
    if params.growth_noise.magnitude != 0.0:
        seed = hash_u64(params.seed, [ROLE_GROWTH])
        n, _ = _fast.noise1(n1_array(params.growth_noise), np.uint64(seed), t_pre)
        return t_pre + n
    return t_pre


def interlock_angle(r, params):
    if params.interlock.magnitude == 0.0:
        return 0.0
    seed = hash_u64(params.seed, [ROLE_INTERLOCK])
    v, _ = _fast.noise1(n1_array(params.interlock), np.uint64(seed), float(r))
    return v


def interlocked_frame(p, params):
    """Cylindrical frame rotated about r-hat; +angle tilts z toward +theta-hat."""
    r, _, _, frame = cylindrical_coords(p)
    phi = interlock_angle(r, params)
    c, s = math.cos(phi), math.sin(phi)
    circ = c * frame.circumferential - s * frame.longitudinal
    longi = s * frame.circumferential + c * frame.longitudinal
    return Frame(frame.radial, circ, longi)


def ring_porosity(t, params):
    """Pore-size factor: the seasonal wave blended with a uniform size.

    The wave runs inverted against the ring-darkness wave: pores are at
    their maximum in the earlywood phase and shrink to the minimum in the
    latewood plateau.
    """
    por = waves.smoothed_rect_wave(t, params.porosity_wave, invert=True)
    return (1.0 - params.ring_porousness) + params.ring_porousness * por


def pore_mask(p, params):
    """Occupancy of pore kernels at an (undistorted) point, clamped to [0,1]."""
    pf, pu = pack_params(params)
    x, y, z = (float(v) for v in p)
    t = time_volume(math.hypot(x, y), params)
    porosity = ring_porosity(t, params)
    rm = interlocked_frame(p, params).matrix()
    v, _, _, _, _ = _fast.noise3(pf[PF_PORE:PF_PORE + NS_SIZE], rm, pu[PU_PORE],
                                 0, 1, x, y, z, float(porosity))
    return min(1.0, v)


def ray_mask(p, params):
    """Occupancy of ray kernels; the search runs on the cylindrical grid."""
    pf, pu = pack_params(params)
    x, y, z = (float(v) for v in p)
    r = math.hypot(x, y)
    theta = math.atan2(y, x)
    rm = interlocked_frame(p, params).matrix()
    v = _fast.ray_noise(pf[PF_RAY:PF_RAY + 7], rm, pu[PU_RAY], x, y, z, r, theta, z)
    return min(1.0, v)


def color_volume(ring_value, pore, params):
    """Beer's law: per-channel exponential absorption over the path length."""
    path = params.path_offset + params.path_ring * ring_value \
        + params.pores.darken_scale * pore
    return np.exp(-np.asarray(params.sigma, dtype=float) * path)


# --- full evaluation ------------------------------------------------------------------

def evaluate_points(points, params, packed=None):
    """Evaluate the whole DAG at an (N,3) batch; pure in (points, params)."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ParameterError("points", "expected an (N, 3) array")
    pf, pu = pack_params(params) if packed is None else packed
    out = ShadingBatch(pts.shape[0])
    _fast.evaluate_batch(pts, pf, pu,
                         out.diffuse_color, out.fiber_color,
                         out.fiber_dir_longitudinal, out.fiber_dir_radial,
                         out.ray_mask, out.pore_mask, out.highlight_width,
                         out.bump_height, out.ring_value, out.twist_angle)
    return out


def evaluate_point(p, params):
    """Single-point convenience wrapper returning a ShadingRecord."""
    batch = evaluate_points(np.asarray(p, dtype=float).reshape(1, 3), params)
    return batch.record(0)


# --- color estimation from a photo ---------------------------------------------------

@dataclass(frozen=True)
class ColorEstimate:
    sigma: np.ndarray
    path_offset: float
    path_ring: float
    earlywood: np.ndarray
    latewood: np.ndarray


def estimate_color_params(image):
    """Bootstrap absorption parameters from one photo.

    The 75th/25th per-channel percentiles stand in for earlywood and
    latewood colors.  The absorption triple carries the per-channel
    contrast under the gauge (ell_0, ell_g) = (0, 1); a contrast-free
    image degenerates to (1, 0) with sigma reproducing the flat color.
    """
    img = np.asarray(image, dtype=float)
    if img.size == 0:
        raise ParameterError("photo", "image is empty")
    if img.ndim == 2:
        img = img[:, :, None]
    if img.shape[-1] == 1:
        img = np.repeat(img, 3, axis=-1)
    if img.shape[-1] > 3:
        img = img[..., :3]
    flat = np.clip(img.reshape(-1, img.shape[-1]), 1.0 / 255.0, 1.0)
    early = np.percentile(flat, 75, axis=0)
    late = np.percentile(flat, 25, axis=0)
    contrast = np.log(early / late)
    if np.max(np.abs(contrast)) < 1e-6:
        return ColorEstimate(sigma=-np.log(early), path_offset=1.0, path_ring=0.0,
                             earlywood=early, latewood=late)
    return ColorEstimate(sigma=contrast, path_offset=0.0, path_ring=1.0,
                         earlywood=early, latewood=late)
