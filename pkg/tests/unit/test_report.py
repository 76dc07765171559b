"""Unit tests for report normalization and rendering."""

import json

import numpy as np
import pytest

from src.cli.report import emit_report, normalize_results
from src.core.i18n import I18n
from src.measurement.instruments import SchemeCheck


class TestNormalizeResults:
    """Conversion to plain JSON types."""

    @pytest.mark.unit
    def test_numpy_and_complex(self):
        out = normalize_results({"a": np.array([1.0, 2.0]), "z": 1 + 2j, "n": np.int64(3), "b": np.bool_(True)})
        assert out == {"a": [1.0, 2.0], "z": [1.0, 2.0], "n": 3, "b": True}

    @pytest.mark.unit
    def test_floats_fixed_to_twelve_digits(self):
        assert normalize_results(0.1 + 0.2) == 0.3
        assert normalize_results(-0.0) == 0.0

    @pytest.mark.unit
    def test_tuple_keys_joined(self):
        assert normalize_results({("chi1", "std"): 1}) == {"chi1,std": 1}

    @pytest.mark.unit
    def test_to_dict_objects(self):
        assert normalize_results(SchemeCheck(True, 0.0, 0.0))["passed"] is True

    @pytest.mark.unit
    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="not finite"):
            normalize_results({"x": float("nan")})

    @pytest.mark.unit
    def test_unknown_type_rejected(self):
        with pytest.raises(TypeError):
            normalize_results({"x": object()})


class TestEmitReport:
    """Byte-level determinism and text rendering."""

    @pytest.mark.unit
    def test_json_is_sorted_and_deterministic(self):
        results = {"b": 1, "a": np.array([0.5])}
        first = emit_report(results)
        assert first == emit_report(dict(reversed(list(results.items()))))
        assert list(json.loads(first)) == ["a", "b"]
        assert first.endswith(b"\n")

    @pytest.mark.unit
    def test_floats_are_json_numbers_at_fixed_precision(self):
        payload = emit_report({"third": 1 / 3, "two_thirds": 2 / 3, "tiny": 1.234567890123456e-17})
        assert b'"third": 0.333333333333' in payload
        assert b'"two_thirds": 0.6666666666667' in payload
        decoded = json.loads(payload)
        for key, value in {"third": 1 / 3, "two_thirds": 2 / 3, "tiny": 1.234567890123456e-17}.items():
            assert decoded[key] == float('%.12e' % value)

    @pytest.mark.unit
    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report({}, "xml")

    @pytest.mark.unit
    def test_generic_text(self):
        text = emit_report({"value": 1.5}, "text", I18n("en_US")).decode("utf-8")
        assert text.startswith("SSB sectors report")
        assert "- value: 1.5" in text

    @pytest.mark.unit
    def test_measurement_text(self):
        report = {
            "command": "measure",
            "scenario": "qubit",
            "spectrum": [-1.0, 1.0],
            "distribution": [0.64, 0.36],
            "scheme_check": SchemeCheck(False, 1.0, 1.0),
            "reachability": {"distances": [1.0, 0.0], "reached": True},
            "verification": {"passed": False, "failures": ["scheme_check"]},
        }
        text = emit_report(report, "text", I18n("en_US")).decode("utf-8")
        assert "Measurement scenario: qubit" in text
        assert "- -1: 0.64" in text
        assert "Measurement scheme: FAIL (residual 1)" in text
        assert "- t=1: 0" in text
        assert "Verification: FAIL" in text
        assert "- scheme_check" in text
