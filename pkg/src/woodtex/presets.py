"""Named wood presets.

Values are tuned by eye against slab renders; they are starting points
for the designer UI, not measurements.
"""

import math

from .params import (WoodParams, RectWaveParams, Noise1DParams,
                     AxisDistortionParams, PoreParams, RayParams, CoatingParams)


def _deg(x):
    return math.radians(x)


def default_preset():
    return WoodParams()


def mahogany():
    # interlocked grain with broad stripes; warm red-brown; diffuse-porous
    return WoodParams(
        mean_ring_width=1.4,
        sigma=(0.45, 1.5, 2.1),
        path_offset=0.55,
        path_ring=0.7,
        fiber_color_scale=0.55,
        interlock=Noise1DParams(magnitude=0.55, kernel_width=5.0),
        pores=PoreParams(size=0.09, aspect=10.0, density=0.5, sharpness=2.0,
                         darken_scale=0.8),
        rays=RayParams(size=0.035, aspect=5.0, density=0.25, sharpness=2.0),
        distortion_r=AxisDistortionParams(enabled=True, magnitude=0.25,
                                          kernel_size=(2.5, 2.5, 2.5)),
        highlight_width=RectWaveParams(minimum=_deg(13), maximum=_deg(13)),
        coating=CoatingParams(kind="beckmann", roughness=0.15),
        seed=11,
    )


def curly_maple():
    # tangential waves: curly figure correlated across the rings
    return WoodParams(
        mean_ring_width=0.8,
        sigma=(0.35, 0.8, 1.6),
        path_offset=0.3,
        path_ring=0.55,
        fiber_color_scale=0.5,
        growth_noise=Noise1DParams(magnitude=0.12, kernel_width=3.0),
        pores=PoreParams(size=0.03, aspect=8.0, density=0.3, sharpness=3.0,
                         darken_scale=0.3),
        rays=RayParams(size=0.04, aspect=6.0, density=0.5, sharpness=2.5),
        distortion_r=AxisDistortionParams(enabled=True, magnitude=0.1,
                                          kernel_size=(1.5, 1.5, 1.5)),
        distortion_theta=AxisDistortionParams(enabled=True, magnitude=0.5,
                                              kernel_size=(1.2, 1.2, 0.5)),
        highlight_width=RectWaveParams(minimum=_deg(11), maximum=_deg(11)),
        coating=CoatingParams(kind="beckmann", roughness=0.1),
        seed=23,
    )


def padauk():
    # fast radial variation against theta: jagged growth rings
    return WoodParams(
        mean_ring_width=1.2,
        sigma=(0.3, 1.9, 2.6),
        path_offset=0.5,
        path_ring=0.6,
        fiber_color_scale=0.6,
        pores=PoreParams(size=0.08, aspect=9.0, density=0.45, sharpness=2.0,
                         darken_scale=0.7),
        rays=RayParams(size=0.03, aspect=5.0, density=0.3, sharpness=2.0),
        distortion_r=AxisDistortionParams(enabled=True, magnitude=0.6,
                                          kernel_size=(2.0, 0.45, 2.0)),
        highlight_width=RectWaveParams(minimum=_deg(14), maximum=_deg(14)),
        coating=CoatingParams(kind="beckmann", roughness=0.2),
        seed=37,
    )


def yellowheart():
    # stripe figure from interlocked grain on a fine, even texture
    return WoodParams(
        mean_ring_width=0.9,
        sigma=(0.25, 0.55, 2.3),
        path_offset=0.45,
        path_ring=0.35,
        fiber_color_scale=0.45,
        interlock=Noise1DParams(magnitude=0.5, kernel_width=3.0),
        pores=PoreParams(size=0.03, aspect=8.0, density=0.3, sharpness=3.0,
                         darken_scale=0.25),
        rays=RayParams(size=0.03, aspect=5.0, density=0.3, sharpness=2.0),
        distortion_r=AxisDistortionParams(enabled=True, magnitude=0.15,
                                          kernel_size=(2.0, 2.0, 2.0)),
        highlight_width=RectWaveParams(minimum=_deg(12), maximum=_deg(12)),
        coating=CoatingParams(kind="beckmann", roughness=0.12),
        seed=41,
    )


def ring_porous_oak():
    # earlywood-only pores: the pore rows draw the rings
    return WoodParams(
        mean_ring_width=1.6,
        sigma=(0.5, 1.0, 1.7),
        path_offset=0.4,
        path_ring=0.5,
        fiber_color_scale=0.55,
        ring_porousness=1.0,
        porosity_wave=RectWaveParams(minimum=0.02, maximum=1.0,
                                     low=0.4, rise=0.12, high=0.36, fall=0.12),
        pores=PoreParams(size=0.12, aspect=7.0, density=0.6, sharpness=1.5,
                         darken_scale=0.9),
        rays=RayParams(size=0.06, aspect=8.0, density=0.6, sharpness=2.5),
        distortion_r=AxisDistortionParams(enabled=True, magnitude=0.3,
                                          kernel_size=(2.5, 2.5, 2.5)),
        highlight_width=RectWaveParams(minimum=_deg(12), maximum=_deg(12)),
        coating=CoatingParams(kind="beckmann", roughness=0.25),
        seed=53,
    )


PRESETS = {
    "default": default_preset,
    "mahogany": mahogany,
    "curly_maple": curly_maple,
    "padauk": padauk,
    "yellowheart": yellowheart,
    "ring_porous_oak": ring_porous_oak,
}


def preset(name):
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    return PRESETS[name]()


def preset_names():
    return sorted(PRESETS)
