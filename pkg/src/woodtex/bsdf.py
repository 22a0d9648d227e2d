"""Wood surface reflectance.

A Lambertian diffuse term plus a fiber-reflection specular lobe for two
fiber populations (trunk fibers and rays) blended by the ray mask, all
under a refractive interface with Fresnel transmission, optionally
topped by a rough (Beckmann) coating lobe.  Functions broadcast over
leading axes; direction vectors live in the last axis.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .params import CoatingParams, ParameterError

INV_PI = 1.0 / math.pi


@dataclass(frozen=True)
class FiberSpecParams:
    direction: np.ndarray          # unit fiber direction
    color: np.ndarray              # fiber reflection color
    width: float                   # highlight width (radians)

    def __post_init__(self):
        if self.width <= 0.0:
            raise ParameterError("fiber.width", "must be > 0")


@dataclass(frozen=True)
class SurfaceInterface:
    eta: float = 1.5
    normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    coating: CoatingParams = field(default_factory=CoatingParams)

    def __post_init__(self):
        if self.eta < 1.0:
            raise ParameterError("interface.eta", "must be >= 1")


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def fiber_angles(u, v_i, v_r):
    """Inclination angles of both directions against the fiber axis.

    Returns (psi_i, psi_r, psi_d, psi_h) with the dot products clamped to
    the arcsin domain.
    """
    u = np.asarray(u, dtype=float)
    psi_i = np.arcsin(np.clip(_dot(np.asarray(v_i, dtype=float), u), -1.0, 1.0))
    psi_r = np.arcsin(np.clip(_dot(np.asarray(v_r, dtype=float), u), -1.0, 1.0))
    return psi_i, psi_r, psi_r - psi_i, psi_r + psi_i


def normalized_gaussian(sigma, x):
    """Unit-area Gaussian density."""
    if np.any(np.asarray(sigma) <= 0.0):
        raise ParameterError("sigma", "must be > 0")
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / (2.0 * sigma * sigma)) / (sigma * math.sqrt(2.0 * math.pi))


def fiber_brdf(params, v_i, v_r):
    """Fiber lobe: color * g(width, psi_h) / cos^2(psi_d / 2).

    Scattering concentrates on the cone psi_r = -psi_i with Gaussian
    spread; symmetric in (v_i, v_r).
    """
    _, _, psi_d, psi_h = fiber_angles(params.direction, v_i, v_r)
    lobe = normalized_gaussian(params.width, psi_h) / np.cos(psi_d / 2.0) ** 2
    return np.asarray(params.color, dtype=float) * lobe[..., None]


def interface_adjust(iface, v):
    """Refract an outside direction through the surface and give its
    unpolarized Fresnel transmittance.

    v points away from the surface; the returned direction is the
    in-material continuation expressed on the same side convention.
    """
    v = np.asarray(v, dtype=float)
    n = np.asarray(iface.normal, dtype=float)
    eta = float(iface.eta)
    cos_i = np.clip(_dot(v, n), 0.0, 1.0)
    if eta == 1.0:
        return v, np.ones_like(cos_i)
    sin2_t = (1.0 - cos_i * cos_i) / (eta * eta)
    cos_t = np.sqrt(np.clip(1.0 - sin2_t, 0.0, 1.0))
    v_tan = v - cos_i[..., None] * n
    v_refr = v_tan / eta + cos_t[..., None] * n
    r_s = (cos_i - eta * cos_t) / (cos_i + eta * cos_t)
    r_p = (eta * cos_i - cos_t) / (eta * cos_i + cos_t)
    return v_refr, 1.0 - 0.5 * (r_s * r_s + r_p * r_p)


def _beckmann_lobe(n, eta, roughness, v_i, v_r):
    cos_i = np.clip(_dot(v_i, n), 1e-9, 1.0)
    cos_r = np.clip(_dot(v_r, n), 1e-9, 1.0)
    h = v_i + v_r
    h = h / np.linalg.norm(h, axis=-1, keepdims=True)
    cos_h = np.clip(_dot(h, n), 1e-9, 1.0)
    tan2 = (1.0 - cos_h * cos_h) / (cos_h * cos_h)
    m2 = roughness * roughness
    d = np.exp(-tan2 / m2) / (math.pi * m2 * cos_h ** 4)

    def g1(cos_v):
        tan_v = np.sqrt(np.clip(1.0 - cos_v * cos_v, 0.0, 1.0)) / cos_v
        a = 1.0 / (roughness * np.maximum(tan_v, 1e-12))
        rational = (3.535 * a + 2.181 * a * a) / (1.0 + 2.276 * a + 2.577 * a * a)
        return np.where(a < 1.6, rational, 1.0)

    # Fresnel reflectance of the coating at the half vector
    cos_hi = np.clip(_dot(v_i, h), 0.0, 1.0)
    sin2_t = (1.0 - cos_hi * cos_hi) / (eta * eta)
    cos_t = np.sqrt(np.clip(1.0 - sin2_t, 0.0, 1.0))
    r_s = (cos_hi - eta * cos_t) / (cos_hi + eta * cos_t)
    r_p = (eta * cos_hi - cos_t) / (eta * cos_hi + cos_t)
    fres = 0.5 * (r_s * r_s + r_p * r_p)
    return fres * d * g1(cos_i) * g1(cos_r) / (4.0 * cos_i * cos_r)


def wood_bsdf_eval(record, iface, v_i, v_r):
    """Full wood BSDF for one shading record: RGB reflectance density.

    The diffuse and both fiber lobes are evaluated with refracted
    directions and scaled by both Fresnel transmittances; the ray mask
    linearly blends the two fiber BSDFs (not the directions).  A Beckmann
    coating adds a reciprocal surface lobe on top.
    """
    vi_in, t_i = interface_adjust(iface, v_i)
    vr_in, t_r = interface_adjust(iface, v_r)
    longitudinal = FiberSpecParams(record.fiber_dir_longitudinal,
                                   record.fiber_color, record.highlight_width)
    radial = FiberSpecParams(record.fiber_dir_radial,
                             record.fiber_color, record.highlight_width)
    fibers = ((1.0 - record.ray_mask) * fiber_brdf(longitudinal, vi_in, vr_in)
              + record.ray_mask * fiber_brdf(radial, vi_in, vr_in))
    base = np.asarray(record.diffuse_color, dtype=float) * INV_PI + fibers
    out = np.asarray(t_i * t_r)[..., None] * base
    if iface.coating.kind == "beckmann":
        spec = _beckmann_lobe(np.asarray(iface.normal, dtype=float),
                              iface.coating.eta, iface.coating.roughness,
                              np.asarray(v_i, dtype=float), np.asarray(v_r, dtype=float))
        out = out + np.asarray(spec)[..., None]
    return out


def shade_batch(batch, normals, coating, v_i, v_r):
    """Vectorized direct-lighting shading used by the renderer.

    batch: ShadingBatch arrays; normals (N,3) possibly bump-perturbed;
    v_i / v_r unit directions (shared by all points).  Returns (N,3)
    radiance for a unit-intensity directional light (cosine included).
    """
    n = np.asarray(normals, dtype=float)
    eta = coating.eta
    v_i = np.broadcast_to(np.asarray(v_i, dtype=float), n.shape)
    v_r = np.broadcast_to(np.asarray(v_r, dtype=float), n.shape)

    cos_i = np.clip(_dot(v_i, n), 0.0, 1.0)
    if eta > 1.0:
        iface = SurfaceInterface(eta, n, coating)
        vi_in, t_i = interface_adjust(iface, v_i)
        vr_in, t_r = interface_adjust(iface, v_r)
    else:
        vi_in, t_i = v_i, np.ones(n.shape[0])
        vr_in, t_r = v_r, np.ones(n.shape[0])

    def lobe(dirs):
        psi_i = np.arcsin(np.clip(_dot(vi_in, dirs), -1.0, 1.0))
        psi_r = np.arcsin(np.clip(_dot(vr_in, dirs), -1.0, 1.0))
        width = batch.highlight_width
        g = np.exp(-(psi_r + psi_i) ** 2 / (2.0 * width * width)) \
            / (width * math.sqrt(2.0 * math.pi))
        return g / np.cos((psi_r - psi_i) / 2.0) ** 2

    fl = lobe(batch.fiber_dir_longitudinal)
    fr = lobe(batch.fiber_dir_radial)
    fiber = batch.fiber_color * ((1.0 - batch.ray_mask) * fl
                                 + batch.ray_mask * fr)[:, None]
    base = batch.diffuse_color * INV_PI + fiber
    out = (t_i * t_r)[:, None] * base
    if coating.kind == "beckmann":
        out = out + _beckmann_lobe(n, eta, coating.roughness, v_i, v_r)[:, None]
    return out * cos_i[:, None]
