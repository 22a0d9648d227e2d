import math

import pytest

from woodtex.params import WoodParams, ParameterError
from woodtex.presets import PRESETS, preset
from woodtex.schema import (SCHEMA_VERSION, validate_document,
                            params_to_json, params_from_json,
                            schema_endpoint_payload)


def test_default_round_trip():
    doc = params_to_json(WoodParams())
    validate_document(doc)
    back = params_from_json(doc)
    assert params_to_json(back) == doc


def test_all_presets_validate_and_round_trip():
    for name in PRESETS:
        doc = params_to_json(preset(name))
        validate_document(doc)
        back = params_from_json(doc)
        assert params_to_json(back) == doc


def test_unknown_field_rejected_with_path():
    doc = params_to_json(WoodParams())
    doc["pores"]["diameter"] = 1.0
    with pytest.raises(ParameterError) as exc:
        validate_document(doc)
    assert "pores" in exc.value.path or "pores" in str(exc.value)


def test_unknown_top_level_field_rejected():
    doc = params_to_json(WoodParams())
    doc["grain_count"] = 7
    with pytest.raises(ParameterError):
        validate_document(doc)


def test_bad_highlight_named_in_error():
    doc = params_to_json(WoodParams())
    doc["highlight_width"]["min_degrees"] = 0.0
    with pytest.raises(ParameterError) as exc:
        params_from_json(doc)
    assert "highlight_width" in str(exc.value)


def test_partial_document_takes_defaults():
    p = params_from_json({"mean_ring_width": 2.5, "seed": 9})
    assert p.mean_ring_width == 2.5
    assert p.seed == 9
    assert p.sigma == WoodParams().sigma


def test_highlight_degrees_radians():
    doc = params_to_json(WoodParams())
    doc["highlight_width"]["min_degrees"] = 10.0
    doc["highlight_width"]["max_degrees"] = 15.0
    p = params_from_json(doc)
    assert p.highlight_width.minimum == pytest.approx(math.radians(10.0))
    assert p.highlight_width.maximum == pytest.approx(math.radians(15.0))


def test_schema_version_mismatch():
    doc = params_to_json(WoodParams())
    doc["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ParameterError) as exc:
        params_from_json(doc)
    assert "schema_version" in str(exc.value)


def test_semantic_validation_after_structure():
    doc = params_to_json(WoodParams())
    doc["ring_wave"]["low"] = 0.9   # proportions no longer sum to 1
    with pytest.raises(ParameterError) as exc:
        params_from_json(doc)
    assert "ring_wave" in str(exc.value)


def test_endpoint_payload_self_consistent():
    payload = schema_endpoint_payload()
    assert payload["schema_version"] == SCHEMA_VERSION
    validate_document(payload["defaults"])
    for name, doc in payload["presets"].items():
        validate_document(doc)
        params_from_json(doc).validate()
