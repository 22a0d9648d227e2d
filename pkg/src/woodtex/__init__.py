"""woodtex: random-access procedural solid wood materials.

Evaluate a full set of wood-BSDF inputs (colors, fiber directions, masks,
bump height) at any 3D point in constant time, render and bake slabs, or
drive the interactive designer through the bundled HTTP service.
"""

from .params import (WoodParams, TriangleWaveParams, RectWaveParams, Noise1DParams,
                     AxisDistortionParams, PoreParams, RayParams, CoatingParams,
                     ParameterError)
from .model import (Frame, ShadingRecord, ShadingBatch, evaluate_point,
                    evaluate_points, estimate_color_params, cylindrical_coords,
                    time_volume, interlocked_frame, ring_porosity, pore_mask,
                    ray_mask, color_volume)
from .presets import preset, preset_names, PRESETS
from .render import (SlabScene, BoardPattern, cut_scene, render_slab, light_sweep,
                     bake_textures, board_map, save_png, save_pfm)
from .bsdf import (FiberSpecParams, SurfaceInterface, fiber_angles,
                   normalized_gaussian, fiber_brdf, interface_adjust,
                   wood_bsdf_eval)

__version__ = "0.1.0"

__all__ = [
    "WoodParams", "TriangleWaveParams", "RectWaveParams", "Noise1DParams",
    "AxisDistortionParams", "PoreParams", "RayParams", "CoatingParams",
    "ParameterError", "Frame", "ShadingRecord", "ShadingBatch",
    "evaluate_point", "evaluate_points", "estimate_color_params",
    "cylindrical_coords", "time_volume", "interlocked_frame", "ring_porosity",
    "pore_mask", "ray_mask", "color_volume", "preset", "preset_names", "PRESETS",
    "SlabScene", "BoardPattern", "cut_scene", "render_slab", "light_sweep",
    "bake_textures", "board_map", "save_png", "save_pfm", "FiberSpecParams",
    "SurfaceInterface", "fiber_angles", "normalized_gaussian", "fiber_brdf",
    "interface_adjust", "wood_bsdf_eval",
]
