"""Wood material parameter tree.

The tree mirrors the JSON document the CLI / preview service exchange
(see `schema.py`).  Construction is cheap; `validate()` raises
`ParameterError` with a dotted field path so callers can surface exact
locations to a UI.
"""

import math
from dataclasses import dataclass, field, replace


class ParameterError(ValueError):
    """Invalid parameter value; `path` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _require(cond, path, message):
    if not cond:
        raise ParameterError(path, message)


@dataclass(frozen=True)
class TriangleWaveParams:
    """Growth-rate wave over one ring: fall = growing season, rise = dormant."""
    fall_slope: float = -0.8
    rise_slope: float = 2.4
    fall_transition: float = 0.08
    rise_transition: float = 0.08

    def validate(self, path="growth_wave"):
        _require(self.fall_slope < 0.0, path + ".fall_slope", "must be < 0")
        _require(self.rise_slope > 0.0, path + ".rise_slope", "must be > 0")
        _require(self.fall_transition > 0.0, path + ".fall_transition", "must be > 0")
        _require(self.rise_transition > 0.0, path + ".rise_transition", "must be > 0")
        _require(self.fall_transition + self.rise_transition < 1.0, path,
                 "transitions must total less than one period")


@dataclass(frozen=True)
class RectWaveParams:
    """Plateau wave over one ring year, C2-smooth transitions."""
    minimum: float = 0.0
    maximum: float = 1.0
    low: float = 0.45
    rise: float = 0.15
    high: float = 0.25
    fall: float = 0.15

    def validate(self, path="wave"):
        _require(self.minimum <= self.maximum, path, "minimum must be <= maximum")
        for name in ("low", "rise", "high", "fall"):
            _require(getattr(self, name) > 0.0, f"{path}.{name}", "must be > 0")
        total = self.low + self.rise + self.high + self.fall
        _require(abs(total - 1.0) < 1e-9, path, "proportions must sum to 1")


@dataclass(frozen=True)
class Noise1DParams:
    magnitude: float = 0.0
    kernel_width: float = 1.0
    density: float = 2.0
    bands: int = 1
    band_factor: float = 0.5
    dropoff: float = 1.0

    def validate(self, path="noise1d"):
        _require(self.kernel_width > 0.0, path + ".kernel_width", "must be > 0")
        _require(self.density > 0.0, path + ".density", "must be > 0")
        _require(self.bands >= 1, path + ".bands", "must be >= 1")
        _require(0.0 < self.band_factor < 1.0, path + ".band_factor", "must be in (0, 1)")


@dataclass(frozen=True)
class AxisDistortionParams:
    """One cylindrical-direction distortion: magnitude noise and envelope."""
    enabled: bool = False
    magnitude: float = 0.3
    kernel_size: tuple = (2.0, 2.0, 2.0)  # semi-axes along (r, theta, z)
    density: float = 2.0
    bands: int = 4
    band_factor: float = 0.5
    dropoff: float = 1.0

    def validate(self, path="distortion"):
        _require(len(self.kernel_size) == 3, path + ".kernel_size", "needs 3 components")
        for v in self.kernel_size:
            _require(v > 0.0, path + ".kernel_size", "components must be > 0")
        _require(self.density > 0.0, path + ".density", "must be > 0")
        _require(self.bands >= 1, path + ".bands", "must be >= 1")
        _require(0.0 < self.band_factor < 1.0, path + ".band_factor", "must be in (0, 1)")
        _require(self.magnitude >= 0.0, path + ".magnitude", "must be >= 0")


@dataclass(frozen=True)
class PoreParams:
    size: float = 0.06
    aspect: float = 8.0        # elongation along the longitudinal axis
    density: float = 0.4       # mean impulses per natural cell
    sharpness: float = 3.0
    darken_scale: float = 0.5  # extra absorption path per unit mask

    def validate(self, path="pores"):
        _require(self.size > 0.0, path + ".size", "must be > 0")
        _require(self.aspect >= 1.0, path + ".aspect", "must be >= 1")
        _require(self.density >= 0.0, path + ".density", "must be >= 0")
        _require(self.sharpness >= 0.0, path + ".sharpness", "must be >= 0")
        _require(self.darken_scale >= 0.0, path + ".darken_scale", "must be >= 0")


@dataclass(frozen=True)
class RayParams:
    size: float = 0.05
    aspect: float = 6.0        # elongation along the radial axis
    density: float = 0.4
    sharpness: float = 2.0

    def validate(self, path="rays"):
        _require(self.size > 0.0, path + ".size", "must be > 0")
        _require(self.aspect >= 1.0, path + ".aspect", "must be >= 1")
        _require(self.density >= 0.0, path + ".density", "must be >= 0")
        _require(self.sharpness >= 0.0, path + ".sharpness", "must be >= 0")


@dataclass(frozen=True)
class CoatingParams:
    kind: str = "none"          # none | smooth | beckmann
    roughness: float = 0.1
    eta: float = 1.5

    def validate(self, path="coating"):
        _require(self.kind in ("none", "smooth", "beckmann"), path + ".kind",
                 "must be none, smooth or beckmann")
        _require(self.roughness > 0.0, path + ".roughness", "must be > 0")
        _require(self.eta >= 1.0, path + ".eta", "must be >= 1")


@dataclass(frozen=True)
class WoodParams:
    mean_ring_width: float = 1.0
    growth_wave: TriangleWaveParams = field(default_factory=TriangleWaveParams)
    growth_noise: Noise1DParams = field(default_factory=lambda: Noise1DParams(
        magnitude=0.1, kernel_width=4.0))
    ring_wave: RectWaveParams = field(default_factory=RectWaveParams)
    # plateau values in radians; around 10-15 degrees for typical woods
    highlight_width: RectWaveParams = field(default_factory=lambda: RectWaveParams(
        minimum=math.radians(12.0), maximum=math.radians(12.0)))
    porosity_wave: RectWaveParams = field(default_factory=lambda: RectWaveParams(
        minimum=0.02, maximum=1.0, low=0.45, rise=0.15, high=0.25, fall=0.15))
    ring_porousness: float = 0.0
    interlock: Noise1DParams = field(default_factory=lambda: Noise1DParams(
        magnitude=0.0, kernel_width=4.0))
    pores: PoreParams = field(default_factory=PoreParams)
    rays: RayParams = field(default_factory=RayParams)
    sigma: tuple = (0.6, 1.3, 2.2)
    path_offset: float = 0.35   # ell_0
    path_ring: float = 1.0      # ell_g
    fiber_color_scale: float = 0.6
    bump_scale: float = 0.02
    distortion_r: AxisDistortionParams = field(default_factory=lambda: AxisDistortionParams(
        enabled=True))
    distortion_theta: AxisDistortionParams = field(default_factory=AxisDistortionParams)
    distortion_z: AxisDistortionParams = field(default_factory=AxisDistortionParams)
    coating: CoatingParams = field(default_factory=CoatingParams)
    seed: int = 1

    def validate(self):
        _require(self.mean_ring_width > 0.0, "mean_ring_width", "must be > 0")
        self.growth_wave.validate("growth_wave")
        self.growth_noise.validate("growth_noise")
        self.ring_wave.validate("ring_wave")
        _require(self.ring_wave.minimum >= 0.0, "ring_wave.minimum", "must be >= 0")
        self.highlight_width.validate("highlight_width")
        _require(self.highlight_width.minimum > 0.0, "highlight_width.minimum",
                 "must be > 0 radians")
        self.porosity_wave.validate("porosity_wave")
        _require(self.porosity_wave.minimum >= 0.0, "porosity_wave.minimum", "must be >= 0")
        _require(0.0 <= self.ring_porousness <= 1.0, "ring_porousness", "must be in [0, 1]")
        self.interlock.validate("interlock")
        self.pores.validate("pores")
        self.rays.validate("rays")
        _require(len(self.sigma) == 3, "sigma", "needs 3 channels")
        for v in self.sigma:
            _require(v >= 0.0, "sigma", "channels must be >= 0")
        _require(self.path_offset >= 0.0, "path_offset", "must be >= 0")
        _require(self.path_ring >= 0.0, "path_ring", "must be >= 0")
        _require(self.fiber_color_scale >= 0.0, "fiber_color_scale", "must be >= 0")
        _require(self.bump_scale >= 0.0, "bump_scale", "must be >= 0")
        self.distortion_r.validate("distortion_r")
        self.distortion_theta.validate("distortion_theta")
        self.distortion_z.validate("distortion_z")
        self.coating.validate("coating")
        _require(0 <= int(self.seed) < 2 ** 64, "seed", "must fit in 64 bits")
        return self

    def with_seed(self, seed):
        return replace(self, seed=int(seed))
