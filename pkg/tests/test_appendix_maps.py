"""
Tests for the quaternion maps of S^3 x S^3.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from rinfinity.appendix_maps import (
    I_UNIT,
    J_UNIT,
    K_UNIT,
    TorusMapSpec,
    appendix_pairs,
    check_pair,
    h_map,
    induced_h3_matrix,
    parse_word,
    quat_conj,
    quat_mul,
    random_unit_quaternions,
    space_versus_group,
    verify_inverse_pair,
)
from rinfinity.config import COMPOSITION_TOLERANCE
from rinfinity.errors import MalformedInput, MatrixMismatch
from rinfinity.exact_linear import IntMatrix, inverse_unimodular, mat_det, mat_mul


def test_hamilton_product():
    """Test the Hamilton product on basis quaternions."""
    assert np.allclose(quat_mul(I_UNIT, J_UNIT), K_UNIT)
    assert np.allclose(quat_mul(J_UNIT, I_UNIT), -K_UNIT)
    assert np.allclose(quat_mul(I_UNIT, I_UNIT), [-1, 0, 0, 0])


def test_conjugate_is_inverse_on_unit_sphere():
    """Test that the conjugate inverts unit quaternions."""
    q = random_unit_quaternions(50, np.random.default_rng(1))
    assert np.allclose(quat_mul(q, quat_conj(q)), [1, 0, 0, 0])


def test_parse_word():
    """Test parsing of q1/q2 words and rejection of malformed ones."""
    assert parse_word("q1^4 q2") == [(1, 4), (2, 1)]
    assert parse_word("q2 q1^-1") == [(2, 1), (1, -1)]
    for bad in ("q3", "q1 x", "", "q1^"):
        with pytest.raises(MalformedInput):
            parse_word(bad)


def test_forward_map_on_basis_quaternions():
    """Test h_map on the basis quaternions i and j."""
    forward = appendix_pairs()[0].forward
    p1, p2 = h_map(forward, I_UNIT, J_UNIT)
    assert np.allclose(p1, K_UNIT)
    assert np.allclose(p2, -J_UNIT)


def test_induced_matrices():
    """Test exponent-sum matrices and the mismatch error."""
    for pair in appendix_pairs():
        assert induced_h3_matrix(pair.forward) == pair.forward.matrix
        assert induced_h3_matrix(pair.inverse) == pair.inverse.matrix
    with pytest.raises(MatrixMismatch):
        induced_h3_matrix(TorusMapSpec(("q1", "q2"), IntMatrix.of(2, 1, 1, 1)))


def test_pairs_compose_to_identity():
    """Test that both reference pairs compose to the identity."""
    for pair in appendix_pairs():
        report = check_pair(pair, n=200, seed=5)
        assert report.induced_product_is_identity
        assert report.max_deviation < COMPOSITION_TOLERANCE
        assert report.passed


def test_wrong_inverse_is_detected():
    """Test that a wrong inverse gives a large deviation."""
    pair = appendix_pairs()[0]
    assert verify_inverse_pair(pair.forward, pair.forward, n=20) > 0.1
    with pytest.raises(MalformedInput):
        verify_inverse_pair(pair.forward, pair.inverse, n=0)


def test_det_minus_one_gluing_gives_space_r_infinity():
    """Test that the det -1 gluing matrix admits no reverser."""
    comparison = space_versus_group(appendix_pairs()[0].forward)
    assert comparison.reverser_exists is False
    assert comparison.reverser is None
    assert comparison.space_r_infinity is True
    assert comparison.group_r_infinity is False


def test_second_gluing_matrix_is_reversed_by_det_minus_one():
    """Test that (4 1; 3 1) is reversed by (-1 1; 0 1)."""
    comparison = space_versus_group(appendix_pairs()[1].forward)
    a = comparison.matrix
    assert comparison.reverser_exists is True
    assert comparison.reverser == IntMatrix.of(-1, 1, 0, 1)
    assert mat_det(comparison.reverser) == -1
    assert mat_mul(mat_mul(comparison.reverser, a), comparison.reverser) == inverse_unimodular(a)
    assert comparison.space_r_infinity is False
    assert comparison.group_r_infinity is False
