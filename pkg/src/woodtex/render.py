"""Slab renderer, light sweeps, board mapping and texture baking.

The renderer is orthographic and direct-lit: each pixel maps to a tree
point (through a cut plane or a board function), the volume model is
evaluated there, and the BSDF is shaded with one directional light.
Pixels are independent, so the image is identical for any worker count
or evaluation order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from PIL import Image

from . import _fast, bsdf
from .hashing import hash_u64
from .model import ShadingBatch, pack_params
from .params import ParameterError

BOARD_TAG = 7001


@dataclass(frozen=True)
class SlabScene:
    origin: tuple = (6.0, 0.0, 0.0)
    u_axis: tuple = (0.0, 1.0, 0.0)
    v_axis: tuple = (0.0, 0.0, 1.0)
    extent: tuple = (4.0, 4.0)
    width: int = 256
    height: int = 256
    light_elevation: float = 45.0   # degrees above the slab plane
    light_azimuth: float = 90.0     # degrees from the u axis
    exposure: float = 1.0

    def validate(self):
        u = np.asarray(self.u_axis, dtype=float)
        v = np.asarray(self.v_axis, dtype=float)
        if abs(np.linalg.norm(u) - 1.0) > 1e-9 or abs(np.linalg.norm(v) - 1.0) > 1e-9 \
                or abs(float(u @ v)) > 1e-9:
            raise ParameterError("scene.axes", "tangent frame must be orthonormal")
        if self.width < 1 or self.height < 1:
            raise ParameterError("scene.resolution", "must be >= 1")
        if self.extent[0] <= 0 or self.extent[1] <= 0:
            raise ParameterError("scene.extent", "must be > 0")
        return self

    def normal(self):
        return np.cross(np.asarray(self.u_axis, dtype=float),
                        np.asarray(self.v_axis, dtype=float))


def cut_scene(kind, offset=6.0, size=4.0, width=512, height=512, **kw):
    """Scene on one of the principal planes of the log.

    tangential: perpendicular to the radius (flat-sawn face);
    radial: contains the axis (quarter-sawn face);
    transverse: perpendicular to the axis (end grain).
    """
    if kind == "tangential":
        axes = dict(origin=(offset, 0.0, 0.0), u_axis=(0.0, 1.0, 0.0),
                    v_axis=(0.0, 0.0, 1.0))
    elif kind == "radial":
        axes = dict(origin=(offset, 0.0, 0.0), u_axis=(0.0, 0.0, 1.0),
                    v_axis=(1.0, 0.0, 0.0))
    elif kind == "transverse":
        axes = dict(origin=(offset, 0.0, 0.0), u_axis=(1.0, 0.0, 0.0),
                    v_axis=(0.0, 1.0, 0.0))
    else:
        raise ParameterError("cut", f"unknown cut {kind!r}")
    return SlabScene(extent=(size, size), width=width, height=height, **axes, **kw)


@dataclass(frozen=True)
class BoardPattern:
    kind: str = "parallel"               # parallel | nested_square
    board_dims: tuple = (1.0, 4.0)       # width (across grain), length (along)
    grain_rotation: float = 0.0          # radians, applied per board
    region_min: tuple = (4.0, -1.5, -8.0)
    region_max: tuple = (9.0, 1.5, 8.0)

    def validate(self):
        if self.kind not in ("parallel", "nested_square"):
            raise ParameterError("board.kind", "must be parallel or nested_square")
        if self.board_dims[0] <= 0 or self.board_dims[1] <= 0:
            raise ParameterError("board.board_dims", "must be > 0")
        return self


def _hash_origin(pattern, seed, parts):
    h = hash_u64(seed, [BOARD_TAG] + list(parts))
    scale = 1.0 / 2097152.0
    u = np.array([(h & 0x1FFFFF) * scale,
                  ((h >> 21) & 0x1FFFFF) * scale,
                  ((h >> 42) & 0x1FFFFF) * scale])
    lo = np.asarray(pattern.region_min, dtype=float)
    hi = np.asarray(pattern.region_max, dtype=float)
    return lo + u * (hi - lo)


def board_map(pattern, surface_point, seed):
    """Map a surface point to a tree point through the board function.

    Board indexes hash to a board origin inside the candidate region; the
    offset from the board's corner, rotated by the grain angle, is laid
    onto the tree's (theta-ish, longitudinal) plane at that origin.
    """
    pattern.validate()
    sp = np.asarray(surface_point, dtype=float)
    single = sp.ndim == 1
    sp = np.atleast_2d(sp)
    out = np.empty((sp.shape[0], 3))
    bw, bl = pattern.board_dims
    for n in range(sp.shape[0]):
        sx, sy = sp[n]
        if pattern.kind == "parallel":
            i = math.floor(sx / bw)
            j = math.floor(sy / bl)
            off = np.array([sx - i * bw, sy - j * bl])
            rot = pattern.grain_rotation
            parts = (i, j)
        else:
            cell = bl
            ci = math.floor(sx / cell)
            cj = math.floor(sy / cell)
            lx = sx - ci * cell
            ly = sy - cj * cell
            ring = int(min(lx, ly, cell - lx, cell - ly) / bw)
            edge = int(np.argmin([ly, cell - lx, cell - ly, lx]))  # bottom,right,top,left
            inner = ring * bw
            if edge == 0:
                off = np.array([lx - inner, ly - inner])
                rot = pattern.grain_rotation
            elif edge == 2:
                off = np.array([(cell - inner) - lx, (cell - inner) - ly])
                rot = pattern.grain_rotation
            elif edge == 1:
                off = np.array([ly - inner, (cell - inner) - lx])
                rot = pattern.grain_rotation + math.pi / 2.0
            else:
                off = np.array([(cell - inner) - ly, lx - inner])
                rot = pattern.grain_rotation + math.pi / 2.0
            parts = (ci, cj, ring, edge)
        c, s = math.cos(rot), math.sin(rot)
        ox = c * off[0] - s * off[1]
        oy = s * off[0] + c * off[1]
        origin = _hash_origin(pattern, seed, parts)
        # board plane in the tree: across-grain along +y, grain along +z
        out[n] = origin + np.array([0.0, ox, oy])
    return out[0] if single else out


def _pixel_grid(scene):
    u = (np.arange(scene.width) + 0.5) / scene.width - 0.5
    v = (np.arange(scene.height) + 0.5) / scene.height - 0.5
    uu, vv = np.meshgrid(u * scene.extent[0], v * scene.extent[1])
    return uu.ravel(), vv.ravel()


def _evaluate_chunked(points, packed, workers):
    batch = ShadingBatch(points.shape[0])
    outs = (batch.diffuse_color, batch.fiber_color, batch.fiber_dir_longitudinal,
            batch.fiber_dir_radial, batch.ray_mask, batch.pore_mask,
            batch.highlight_width, batch.bump_height, batch.ring_value,
            batch.twist_angle)
    pf, pu = packed
    n = points.shape[0]
    if workers <= 1 or n < 2048:
        _fast.evaluate_batch(points, pf, pu, *outs)
        return batch
    bounds = np.linspace(0, n, workers + 1).astype(int)

    def run(a, b):
        _fast.evaluate_batch(points[a:b], pf, pu, *(o[a:b] for o in outs))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run, bounds[i], bounds[i + 1])
                   for i in range(workers) if bounds[i] < bounds[i + 1]]
        for f in futures:
            f.result()
    return batch


def evaluate_scene(scene, params, board=None, workers=1):
    """Evaluate the volume model on the scene's pixel grid."""
    scene.validate()
    uu, vv = _pixel_grid(scene)
    o = np.asarray(scene.origin, dtype=float)
    ua = np.asarray(scene.u_axis, dtype=float)
    va = np.asarray(scene.v_axis, dtype=float)
    if board is None:
        pts = o[None, :] + uu[:, None] * ua[None, :] + vv[:, None] * va[None, :]
    else:
        pts = board_map(board, np.column_stack([uu, vv]), params.seed)
    pts = np.ascontiguousarray(pts)
    return _evaluate_chunked(pts, pack_params(params), workers)


def _bump_normals(scene, batch):
    h = batch.bump_height.reshape(scene.height, scene.width)
    du = scene.extent[0] / scene.width
    dv = scene.extent[1] / scene.height
    ghv, ghu = np.gradient(h, dv, du)
    n0 = scene.normal()
    ua = np.asarray(scene.u_axis, dtype=float)
    va = np.asarray(scene.v_axis, dtype=float)
    n = (n0[None, :] - ghu.ravel()[:, None] * ua[None, :]
         - ghv.ravel()[:, None] * va[None, :])
    return n / np.linalg.norm(n, axis=1, keepdims=True)


def light_direction(scene, elevation=None):
    el = math.radians(scene.light_elevation if elevation is None else elevation)
    az = math.radians(scene.light_azimuth)
    ua = np.asarray(scene.u_axis, dtype=float)
    va = np.asarray(scene.v_axis, dtype=float)
    return (math.cos(el) * (math.cos(az) * ua + math.sin(az) * va)
            + math.sin(el) * scene.normal())


def srgb_encode(linear):
    x = np.clip(linear, 0.0, 1.0)
    return np.where(x <= 0.0031308, 12.92 * x, 1.055 * np.power(x, 1.0 / 2.4) - 0.055)


def render_slab(scene, params, board=None, workers=1, hdr=False, elevation=None):
    """Render the slab under one directional light.

    Returns (height, width, 3) uint8 sRGB, or linear float when hdr.
    """
    batch = evaluate_scene(scene, params, board=board, workers=workers)
    normals = _bump_normals(scene, batch)
    v_i = light_direction(scene, elevation)
    v_r = scene.normal()
    radiance = bsdf.shade_batch(batch, normals, params.coating, v_i, v_r)
    img = (radiance * scene.exposure).reshape(scene.height, scene.width, 3)
    if hdr:
        return img
    return np.round(srgb_encode(img) * 255.0).astype(np.uint8)


def light_sweep(scene, params, n_frames, arc=(10.0, 170.0), workers=1):
    """Render frames with the light elevation sweeping the arc."""
    if n_frames < 1:
        raise ParameterError("frames", "must be >= 1")
    if n_frames == 1:
        elevations = [float(arc[0])]
    else:
        elevations = list(np.linspace(arc[0], arc[1], n_frames))
    return [render_slab(scene, params, workers=workers, elevation=el)
            for el in elevations]


def bake_textures(params, scene, workers=1):
    """Bake all parameter maps from one evaluation pass over the scene grid.

    Directions are kept as float arrays in [-1, 1]; `save_texture_set`
    encodes them as 0.5*(d+1) PNGs and writes the scale sidecar.
    """
    batch = evaluate_scene(scene, params, workers=workers)
    h, w = scene.height, scene.width
    return {
        "diffuse": batch.diffuse_color.reshape(h, w, 3),
        "fiber": batch.fiber_color.reshape(h, w, 3),
        "dir_longitudinal": batch.fiber_dir_longitudinal.reshape(h, w, 3),
        "dir_radial": batch.fiber_dir_radial.reshape(h, w, 3),
        "ray_mask": batch.ray_mask.reshape(h, w),
        "pore_mask": batch.pore_mask.reshape(h, w),
        "bump": batch.bump_height.reshape(h, w),
        "highlight": batch.highlight_width.reshape(h, w),
    }


def save_png(path, array):
    """8-bit PNG from float [0,1] (gray or RGB) or uint8 data."""
    a = np.asarray(array)
    if a.dtype != np.uint8:
        a = np.round(np.clip(a, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(a).save(path)


def encode_direction_map(dirs):
    """Quantize unit directions to 8-bit 0.5*(d+1) texels.

    Plain per-channel rounding can push the decoded norm sqrt(3)/255 off
    unity; a corrective pass nudges the dominant channel until each texel
    decodes to a norm within 1/255.
    """
    q = np.round((0.5 * (np.asarray(dirs) + 1.0)) * 255.0)
    for _ in range(4):
        dec = q / 255.0 * 2.0 - 1.0
        err = np.linalg.norm(dec, axis=-1) - 1.0
        bad = np.abs(err) > 1.0 / 255.0
        if not np.any(bad):
            break
        k = np.argmax(np.abs(dec), axis=-1)
        rows = np.nonzero(bad)
        kk = k[bad]
        dom = dec[rows + (kk,)]
        step = -np.sign(err[bad] * dom)
        q[rows + (kk,)] = np.clip(q[rows + (kk,)] + step, 0, 255)
    return q.astype(np.uint8)


def save_pfm(path, array):
    """Portable float map (color), row order bottom-to-top, little endian."""
    a = np.asarray(array, dtype=np.float32)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ParameterError("pfm", "expected an (h, w, 3) array")
    with open(path, "wb") as f:
        f.write(b"PF\n")
        f.write(f"{a.shape[1]} {a.shape[0]}\n".encode())
        f.write(b"-1.0\n")
        f.write(np.ascontiguousarray(a[::-1]).tobytes())


def load_pfm(path):
    with open(path, "rb") as f:
        if f.readline().strip() != b"PF":
            raise ValueError("not a color PFM")
        w, h = (int(x) for x in f.readline().split())
        scale = float(f.readline())
        data = np.frombuffer(f.read(), dtype="<f4" if scale < 0 else ">f4")
    return data.reshape(h, w, 3)[::-1].copy()


def save_texture_set(textures, out_dir, params):
    """Write the baked maps as PNGs plus a JSON sidecar of decode scales."""
    import json
    import os
    os.makedirs(out_dir, exist_ok=True)
    bump_scale = max(float(params.bump_scale), 1e-9)
    meta = {"bump_scale": bump_scale, "highlight_scale": math.pi / 2.0,
            "direction_encoding": "0.5*(d+1)"}
    save_png(os.path.join(out_dir, "diffuse.png"), srgb_encode(textures["diffuse"]))
    save_png(os.path.join(out_dir, "fiber.png"), srgb_encode(textures["fiber"]))
    for name in ("dir_longitudinal", "dir_radial"):
        save_png(os.path.join(out_dir, f"{name}.png"),
                 encode_direction_map(textures[name]))
    save_png(os.path.join(out_dir, "ray_mask.png"), textures["ray_mask"])
    save_png(os.path.join(out_dir, "pore_mask.png"), textures["pore_mask"])
    save_png(os.path.join(out_dir, "bump.png"),
             0.5 + textures["bump"] / (2.0 * bump_scale))
    save_png(os.path.join(out_dir, "highlight.png"),
             textures["highlight"] / (math.pi / 2.0))
    with open(os.path.join(out_dir, "textures.json"), "w") as f:
        json.dump(meta, f, indent=2)
    return meta
