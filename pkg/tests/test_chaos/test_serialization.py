"""Tests for the JSON wire form of chaos objects."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from wienerflow.chaos import ChaosError, ChaosField, ChaosPoly, GaussianSpace
from wienerflow.chaos.random import random_field, random_matrix, random_poly
from wienerflow.chaos.serialization import dump_file, dumps, load_file, loads

SPACE = GaussianSpace(2, 3, (1.0, 0.5))


class TestWireForm:
    """Tests for dumps and loads."""

    def test_poly_document_layout(self):
        """A poly is written with dense multi-indices."""
        p = ChaosPoly.from_terms(SPACE, [([1, 2], 0.25)])
        raw = json.loads(dumps(p))
        assert raw == {"dim": 2, "cap": 3, "weights": [1.0, 0.5], "terms": [{"alpha": [1, 2], "c": 0.25}]}

    @pytest.mark.parametrize("build", [random_poly, random_field, random_matrix])
    def test_round_trip_is_exact(self, build):
        """Coefficients survive a round trip bit for bit."""
        obj = build(np.random.default_rng(7), SPACE)
        assert loads(dumps(obj)) == obj

    def test_hex_coefficients_accepted(self):
        """Hex-float strings parse exactly."""
        text = json.dumps({"dim": 1, "cap": 2, "terms": [{"alpha": [2], "c": (0.1).hex()}]})
        p = loads(text)
        assert p.coefficient(next(iter(p.coeffs))) == 0.1

    def test_field_from_document(self):
        """A components payload gives a ChaosField."""
        text = json.dumps(
            {"dim": 2, "cap": 2, "components": [[{"alpha": [0, 1], "c": 1.0}], []]}
        )
        v = loads(text)
        assert isinstance(v, ChaosField)
        assert v[1].is_zero

    def test_wrong_index_length(self):
        """Multi-indices must have one entry per direction."""
        text = json.dumps({"dim": 2, "cap": 2, "terms": [{"alpha": [1], "c": 1.0}]})
        with pytest.raises(ChaosError):
            loads(text)

    def test_unknown_payload(self):
        """Documents without a payload key are rejected."""
        with pytest.raises(ChaosError):
            loads(json.dumps({"dim": 2, "cap": 2}))

    def test_extra_keys_forbidden(self):
        """Unknown keys fail validation."""
        with pytest.raises(ValidationError):
            loads(json.dumps({"dim": 1, "cap": 1, "terms": [], "note": "x"}))

    def test_file_round_trip(self, tmp_path):
        """dump_file and load_file agree."""
        p = random_poly(np.random.default_rng(8), SPACE)
        path = tmp_path / "poly.json"
        dump_file(p, path)
        assert load_file(path) == p
