"""Tests for the Hodge-type decomposition and antisymmetric potentials."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerflow.calculus import divergence, gradient, matrix_transpose, op_divergence
from wienerflow.chaos import ChaosField, GaussianSpace, l2_inner
from wienerflow.chaos.random import random_field, random_poly
from wienerflow.chaos.serialization import field_from_doc, matrix_from_doc
from wienerflow.hodge import (
    NotDivergenceFreeError,
    antisym_representation,
    hodge_bundle,
    hodge_decompose,
    random_divergence_free_field,
    require_divergence_free,
)

SPACE = GaussianSpace(3, 5)


class TestHodgeDecompose:
    """Tests for hodge_decompose."""

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_parts_have_their_properties(self, seed):
        """v0 is divergence-free, ve is a gradient and they sum to v."""
        v = random_field(np.random.default_rng(seed), SPACE, 3)
        dec = hodge_decompose(v)
        assert dec.reconstruct().allclose(v, atol=1e-12)
        assert divergence(dec.v0).l2_norm() < 1e-10
        assert dec.ve.allclose(gradient(dec.psi))
        assert dec.psi.mean == 0.0

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_parts_are_orthogonal(self, seed):
        """E<v0, ve> = 0."""
        v = random_field(np.random.default_rng(seed), SPACE, 3)
        dec = hodge_decompose(v)
        inner = sum(l2_inner(a, b) for a, b in zip(dec.v0.components, dec.ve.components))
        assert inner == pytest.approx(0.0, abs=1e-10)

    def test_gradient_field_is_exact(self):
        """A gradient decomposes with no divergence-free part."""
        phi = random_poly(np.random.default_rng(41), SPACE, max_degree=4, terms=5, zero_mean=True)
        dec = hodge_decompose(gradient(phi))
        assert dec.v0.l2_norm() < 1e-12
        assert dec.psi.allclose(phi, atol=1e-12)

    def test_divergence_free_field_untouched(self):
        """A divergence-free field is its own v0."""
        v = random_divergence_free_field(np.random.default_rng(42), SPACE)
        dec = hodge_decompose(v)
        assert dec.v0 == v
        assert dec.ve.is_zero
        assert dec.psi.is_zero


class TestAntisymmetricRepresentation:
    """Tests for antisym_representation."""

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_represents_divergence_free_part(self, seed):
        """dd A = v0 with A + A^T = 0 exactly."""
        v = random_field(np.random.default_rng(seed), SPACE, 3)
        v0 = hodge_decompose(v).v0
        a = antisym_representation(v0)
        assert (a + matrix_transpose(a)).is_zero
        assert op_divergence(a).allclose(v0, atol=1e-10)

    def test_rejects_non_divergence_free(self):
        """Fields with delta v != 0 raise."""
        with pytest.raises(NotDivergenceFreeError):
            antisym_representation(ChaosField.identity(SPACE))

    def test_require_divergence_free_accepts_rotation(self):
        """(-x1, x0, 0) is divergence-free."""
        identity = ChaosField.identity(SPACE)
        rotation = ChaosField(SPACE, (-identity[1], identity[0], identity[2] * 0.0))
        require_divergence_free(rotation)


class TestHodgeBundle:
    """Tests for the serialized bundle."""

    def test_bundle_round_trip(self):
        """Documents decode back to the decomposition."""
        v = random_field(np.random.default_rng(43), SPACE, 3)
        dec = hodge_decompose(v)
        a = antisym_representation(dec.v0)
        bundle = hodge_bundle(dec, a)
        assert field_from_doc(bundle.v0) == dec.v0
        assert matrix_from_doc(bundle.A) == a

    def test_bundle_without_potential(self):
        """A is optional."""
        dec = hodge_decompose(ChaosField.zero(SPACE))
        assert hodge_bundle(dec, None).A is None
