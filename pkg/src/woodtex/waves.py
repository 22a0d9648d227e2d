"""Smoothed periodic waves for seasonal growth and ring structure.

The triangle wave (growth rate) is C1: two linear segments joined by
quadratic blends.  The rectangle wave (ring color / highlight width /
porosity) is C2: two plateaus joined by quintic smootherstep ramps.
"""

import math

import numpy as np

from . import _fast
from ._layout import (
    TW_S1, TW_S2, TW_S3, TW_MF, TW_MR, TW_W0, TW_W1, TW_W2, TW_W3,
    TW_T1, TW_T2, TW_SIZE,
    RW_B_RISE, RW_B_HIGH, RW_B_FALL, RW_VMIN, RW_VMAX, RW_P_RISE, RW_P_FALL,
    RW_SIZE,
)
from .params import ParameterError


def triangle_segment_lengths(params):
    """Solve the linear-segment lengths from slopes and transition lengths.

    The wave must close over one period: the net change of the two linear
    segments plus the two quadratic blends is zero.
    """
    sf = params.fall_slope
    sr = params.rise_slope
    t1 = params.fall_transition
    t2 = params.rise_transition
    span = 1.0 - t1 - t2
    lf = (-(sf + sr) * (t1 + t2) / 2.0 - sr * span) / (sf - sr)
    lr = span - lf
    if lf <= 0.0 or lr <= 0.0:
        raise ParameterError("growth_wave", "slopes/transitions leave no room for "
                                            "both linear segments")
    return lf, lr


def growth_median_scale(params):
    """Amplitude factor making the median growth rate equal the mean.

    Growth rate is dr/dt = 1/(1 + w'); scaling w by c leaves the sign
    pattern of w' alone, so the time spent above/below the mean rate is
    linear in c and the balance point has a closed form.
    """
    sf = params.fall_slope
    sr = params.rise_slope
    t1 = params.fall_transition
    t2 = params.rise_transition
    lf, _ = triangle_segment_lengths(params)
    rho = -sf / (sr - sf)                  # transition fraction with negative slope
    fast_span = lf + rho * (t1 + t2)       # radius fraction growing faster than mean
    if fast_span <= 0.5:
        raise ParameterError("growth_wave", "growing-season span must exceed half "
                                            "the ring for the median rate to match the mean")
    w_neg = sf * lf - (t1 + t2) * sf * sf / (2.0 * (sr - sf))
    return (fast_span - 0.5) / -w_neg


def compile_triangle(params, scale=1.0):
    """Pack a triangle wave into the flat layout used by the jitted core.

    The packed wave is zero-mean over its period so that adding it to the
    scaled radius preserves the mean ring spacing.
    """
    lf, lr = triangle_segment_lengths(params)
    t1 = params.fall_transition
    t2 = params.rise_transition
    mf = params.fall_slope * scale
    mr = params.rise_slope * scale
    w = np.zeros(TW_SIZE)
    w[TW_S1] = lf
    w[TW_S2] = lf + t1
    w[TW_S3] = lf + t1 + lr
    w[TW_MF] = mf
    w[TW_MR] = mr
    w[TW_T1] = t1
    w[TW_T2] = t2
    # boundary values with w(0) = 0, then shift to zero mean
    w1 = mf * lf
    w2 = w1 + t1 * (mf + mr) / 2.0
    w3 = w2 + mr * lr
    total = (mf * lf * lf / 2.0
             + t1 * w1 + t1 * t1 * (mf / 2.0 + (mr - mf) / 6.0)
             + lr * w2 + mr * lr * lr / 2.0
             + t2 * w3 + t2 * t2 * (mr / 2.0 + (mf - mr) / 6.0))
    w0 = -total
    w[TW_W0] = w0
    w[TW_W1] = w0 + w1
    w[TW_W2] = w0 + w2
    w[TW_W3] = w0 + w3
    return w


def compile_growth_triangle(params):
    """Median-scaled triangle wave; also checks the time volume stays monotone."""
    c = growth_median_scale(params)
    if abs(params.fall_slope) * c >= 1.0:
        raise ParameterError("growth_wave", "median-scaled fall slope reaches -1; "
                                            "time would run backwards")
    return compile_triangle(params, c)


def compile_rect(params, invert=False):
    """Pack a rectangle wave; `invert` swaps the plateau values so the wave
    starts on the maximum (porosity is high in the earlywood phase)."""
    w = np.zeros(RW_SIZE)
    w[RW_B_RISE] = params.low
    w[RW_B_HIGH] = params.low + params.rise
    w[RW_B_FALL] = params.low + params.rise + params.high
    w[RW_VMIN] = params.maximum if invert else params.minimum
    w[RW_VMAX] = params.minimum if invert else params.maximum
    w[RW_P_RISE] = params.rise
    w[RW_P_FALL] = params.fall
    return w


def smoothed_triangle_wave(x, params):
    """Zero-mean C1 triangle wave, periodic with period 1."""
    w = compile_triangle(params)
    xs = np.asarray(x, dtype=np.float64)
    phase = xs - np.floor(xs)
    if phase.ndim == 0:
        return _fast.tri_eval(w, float(phase))[0]
    out = np.empty(phase.shape)
    flat = phase.ravel()
    oflat = out.ravel()
    for i in range(flat.size):
        oflat[i] = _fast.tri_eval(w, flat[i])[0]
    return out


def smoothed_rect_wave(t, params, invert=False):
    """Plateau wave in [minimum, maximum], periodic with period 1, C2."""
    w = compile_rect(params, invert)
    ts = np.asarray(t, dtype=np.float64)
    phase = ts - np.floor(ts)
    if phase.ndim == 0:
        return _fast.rect_eval(w, float(phase))
    out = np.empty(phase.shape)
    flat = phase.ravel()
    oflat = out.ravel()
    for i in range(flat.size):
        oflat[i] = _fast.rect_eval(w, flat[i])
    return out


def triangle_wave_slope(x, params, scale=1.0):
    """Analytic slope of the (optionally scaled) triangle wave."""
    w = compile_triangle(params, scale)
    phase = float(x) - math.floor(float(x))
    return _fast.tri_eval(w, phase)[1]
