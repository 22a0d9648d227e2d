"""JSON schema and (de)serialization for the parameter tree.

The wire document mirrors `WoodParams`; highlight widths travel in
degrees.  Validation is two-stage: structural (JSON schema, unknown
fields rejected with their path) then semantic (dataclass validators).
"""

import math

import jsonschema

from .params import (WoodParams, TriangleWaveParams, RectWaveParams, Noise1DParams,
                     AxisDistortionParams, PoreParams, RayParams, CoatingParams,
                     ParameterError)

SCHEMA_VERSION = 1


def _num(minimum=None, maximum=None, exclusive_min=None):
    out = {"type": "number"}
    if minimum is not None:
        out["minimum"] = minimum
    if exclusive_min is not None:
        out["exclusiveMinimum"] = exclusive_min
    if maximum is not None:
        out["maximum"] = maximum
    return out


def _obj(props, required=None):
    return {
        "type": "object",
        "properties": props,
        "additionalProperties": False,
        **({"required": required} if required else {}),
    }


_WAVE = _obj({
    "minimum": _num(),
    "maximum": _num(),
    "low": _num(exclusive_min=0.0),
    "rise": _num(exclusive_min=0.0),
    "high": _num(exclusive_min=0.0),
    "fall": _num(exclusive_min=0.0),
})

_HIGHLIGHT = _obj({
    "min_degrees": _num(exclusive_min=0.0, maximum=90.0),
    "max_degrees": _num(exclusive_min=0.0, maximum=90.0),
    "low": _num(exclusive_min=0.0),
    "rise": _num(exclusive_min=0.0),
    "high": _num(exclusive_min=0.0),
    "fall": _num(exclusive_min=0.0),
})

_NOISE1D = _obj({
    "magnitude": _num(),
    "kernel_width": _num(exclusive_min=0.0),
    "density": _num(exclusive_min=0.0),
    "bands": {"type": "integer", "minimum": 1},
    "band_factor": _num(exclusive_min=0.0, maximum=0.999),
    "dropoff": _num(),
})

_AXIS = _obj({
    "enabled": {"type": "boolean"},
    "magnitude": _num(minimum=0.0),
    "kernel_size": {"type": "array", "items": _num(exclusive_min=0.0),
                    "minItems": 3, "maxItems": 3},
    "density": _num(exclusive_min=0.0),
    "bands": {"type": "integer", "minimum": 1},
    "band_factor": _num(exclusive_min=0.0, maximum=0.999),
    "dropoff": _num(),
})

PARAMS_SCHEMA = _obj({
    "schema_version": {"type": "integer"},
    "mean_ring_width": _num(exclusive_min=0.0),
    "growth_wave": _obj({
        "fall_slope": _num(),
        "rise_slope": _num(),
        "fall_transition": _num(exclusive_min=0.0),
        "rise_transition": _num(exclusive_min=0.0),
    }),
    "growth_noise": _NOISE1D,
    "ring_wave": _WAVE,
    "highlight_width": _HIGHLIGHT,
    "porosity_wave": _WAVE,
    "ring_porousness": _num(minimum=0.0, maximum=1.0),
    "interlock": _NOISE1D,
    "pores": _obj({
        "size": _num(exclusive_min=0.0),
        "aspect": _num(minimum=1.0),
        "density": _num(minimum=0.0),
        "sharpness": _num(minimum=0.0),
        "darken_scale": _num(minimum=0.0),
    }),
    "rays": _obj({
        "size": _num(exclusive_min=0.0),
        "aspect": _num(minimum=1.0),
        "density": _num(minimum=0.0),
        "sharpness": _num(minimum=0.0),
    }),
    "sigma": {"type": "array", "items": _num(minimum=0.0),
              "minItems": 3, "maxItems": 3},
    "path_offset": _num(minimum=0.0),
    "path_ring": _num(minimum=0.0),
    "fiber_color_scale": _num(minimum=0.0),
    "bump_scale": _num(minimum=0.0),
    "distortion": _obj({"r": _AXIS, "theta": _AXIS, "z": _AXIS}),
    "coating": _obj({
        "kind": {"enum": ["none", "smooth", "beckmann"]},
        "roughness": _num(exclusive_min=0.0),
        "eta": _num(minimum=1.0),
    }),
    "seed": {"type": "integer", "minimum": 0},
})

SCENE_SCHEMA = _obj({
    "cut": {"enum": ["tangential", "radial", "transverse"]},
    "offset": _num(),
    "size": _num(),
    "width": {"type": "integer"},
    "height": {"type": "integer"},
    "light_elevation": _num(),
    "light_azimuth": _num(),
    "exposure": _num(),
})


def validate_document(doc, schema=PARAMS_SCHEMA):
    """Structural validation; raises ParameterError with the field path."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: e.json_path)
    if errors:
        e = errors[0]
        path = e.json_path.lstrip("$").lstrip(".")
        if e.validator == "additionalProperties" and isinstance(e.instance, dict):
            allowed = set(e.schema.get("properties", {}))
            unknown = sorted(set(e.instance) - allowed)
            if unknown:
                path = f"{path}.{unknown[0]}" if path else unknown[0]
        raise ParameterError(path or "<root>", e.message)
    return doc


def _wave_to_json(w):
    return {"minimum": w.minimum, "maximum": w.maximum, "low": w.low,
            "rise": w.rise, "high": w.high, "fall": w.fall}


def _wave_from_json(d, base):
    return RectWaveParams(**{**_wave_to_json(base), **d})


def _noise1d_to_json(n):
    return {"magnitude": n.magnitude, "kernel_width": n.kernel_width,
            "density": n.density, "bands": n.bands, "band_factor": n.band_factor,
            "dropoff": n.dropoff}


def _noise1d_from_json(d, base):
    return Noise1DParams(**{**_noise1d_to_json(base), **d})


def _axis_to_json(a):
    return {"enabled": a.enabled, "magnitude": a.magnitude,
            "kernel_size": list(a.kernel_size), "density": a.density,
            "bands": a.bands, "band_factor": a.band_factor, "dropoff": a.dropoff}


def _axis_from_json(d, base):
    merged = {**_axis_to_json(base), **d}
    merged["kernel_size"] = tuple(merged["kernel_size"])
    return AxisDistortionParams(**merged)


def params_to_json(p):
    hw = p.highlight_width
    return {
        "schema_version": SCHEMA_VERSION,
        "mean_ring_width": p.mean_ring_width,
        "growth_wave": {
            "fall_slope": p.growth_wave.fall_slope,
            "rise_slope": p.growth_wave.rise_slope,
            "fall_transition": p.growth_wave.fall_transition,
            "rise_transition": p.growth_wave.rise_transition,
        },
        "growth_noise": _noise1d_to_json(p.growth_noise),
        "ring_wave": _wave_to_json(p.ring_wave),
        "highlight_width": {
            "min_degrees": math.degrees(hw.minimum),
            "max_degrees": math.degrees(hw.maximum),
            "low": hw.low, "rise": hw.rise, "high": hw.high, "fall": hw.fall,
        },
        "porosity_wave": _wave_to_json(p.porosity_wave),
        "ring_porousness": p.ring_porousness,
        "interlock": _noise1d_to_json(p.interlock),
        "pores": {"size": p.pores.size, "aspect": p.pores.aspect,
                  "density": p.pores.density, "sharpness": p.pores.sharpness,
                  "darken_scale": p.pores.darken_scale},
        "rays": {"size": p.rays.size, "aspect": p.rays.aspect,
                 "density": p.rays.density, "sharpness": p.rays.sharpness},
        "sigma": list(p.sigma),
        "path_offset": p.path_offset,
        "path_ring": p.path_ring,
        "fiber_color_scale": p.fiber_color_scale,
        "bump_scale": p.bump_scale,
        "distortion": {"r": _axis_to_json(p.distortion_r),
                       "theta": _axis_to_json(p.distortion_theta),
                       "z": _axis_to_json(p.distortion_z)},
        "coating": {"kind": p.coating.kind, "roughness": p.coating.roughness,
                    "eta": p.coating.eta},
        "seed": int(p.seed),
    }


def params_from_json(doc, validate=True):
    """Build WoodParams from a JSON document; missing fields take defaults."""
    if validate:
        validate_document(doc)
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParameterError("schema_version",
                             f"expected {SCHEMA_VERSION}, got {version}")
    base = WoodParams()
    kw = {}
    for name in ("mean_ring_width", "ring_porousness", "path_offset", "path_ring",
                 "fiber_color_scale", "bump_scale", "seed"):
        if name in doc:
            kw[name] = doc[name]
    if "sigma" in doc:
        kw["sigma"] = tuple(doc["sigma"])
    if "growth_wave" in doc:
        kw["growth_wave"] = TriangleWaveParams(**{
            "fall_slope": base.growth_wave.fall_slope,
            "rise_slope": base.growth_wave.rise_slope,
            "fall_transition": base.growth_wave.fall_transition,
            "rise_transition": base.growth_wave.rise_transition,
            **doc["growth_wave"]})
    if "growth_noise" in doc:
        kw["growth_noise"] = _noise1d_from_json(doc["growth_noise"], base.growth_noise)
    if "ring_wave" in doc:
        kw["ring_wave"] = _wave_from_json(doc["ring_wave"], base.ring_wave)
    if "highlight_width" in doc:
        d = dict(doc["highlight_width"])
        hw = base.highlight_width
        merged = {"min_degrees": math.degrees(hw.minimum),
                  "max_degrees": math.degrees(hw.maximum),
                  "low": hw.low, "rise": hw.rise, "high": hw.high, "fall": hw.fall}
        merged.update(d)
        kw["highlight_width"] = RectWaveParams(
            minimum=math.radians(merged["min_degrees"]),
            maximum=math.radians(merged["max_degrees"]),
            low=merged["low"], rise=merged["rise"],
            high=merged["high"], fall=merged["fall"])
    if "porosity_wave" in doc:
        kw["porosity_wave"] = _wave_from_json(doc["porosity_wave"], base.porosity_wave)
    if "interlock" in doc:
        kw["interlock"] = _noise1d_from_json(doc["interlock"], base.interlock)
    if "pores" in doc:
        kw["pores"] = PoreParams(**{
            "size": base.pores.size, "aspect": base.pores.aspect,
            "density": base.pores.density, "sharpness": base.pores.sharpness,
            "darken_scale": base.pores.darken_scale, **doc["pores"]})
    if "rays" in doc:
        kw["rays"] = RayParams(**{
            "size": base.rays.size, "aspect": base.rays.aspect,
            "density": base.rays.density, "sharpness": base.rays.sharpness,
            **doc["rays"]})
    dist = doc.get("distortion", {})
    if "r" in dist:
        kw["distortion_r"] = _axis_from_json(dist["r"], base.distortion_r)
    if "theta" in dist:
        kw["distortion_theta"] = _axis_from_json(dist["theta"], base.distortion_theta)
    if "z" in dist:
        kw["distortion_z"] = _axis_from_json(dist["z"], base.distortion_z)
    if "coating" in doc:
        kw["coating"] = CoatingParams(**{
            "kind": base.coating.kind, "roughness": base.coating.roughness,
            "eta": base.coating.eta, **doc["coating"]})
    params = WoodParams(**kw)
    params.validate()
    return params


def schema_endpoint_payload():
    from .presets import PRESETS
    return {
        "schema_version": SCHEMA_VERSION,
        "schema": PARAMS_SCHEMA,
        "scene_schema": SCENE_SCHEMA,
        "defaults": params_to_json(WoodParams()),
        "presets": {name: params_to_json(make()) for name, make in PRESETS.items()},
    }
