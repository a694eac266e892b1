"""
Tests for exact integer matrix arithmetic.

Tests:
1. INFINITE ordering and absorption
2. Products, powers, determinants and unimodular inverses
3. Anosov classification for both determinants
4. Smith normal form invariants and cokernel orders
5. CLI/JSON matrix parsing
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from rinfinity.errors import MalformedInput, NotUnimodular
from rinfinity.exact_linear import (
    INFINITE,
    IntMatrix,
    add_counts,
    cokernel_order,
    format_matrix,
    inverse_unimodular,
    is_anosov,
    mat_det,
    mat_mul,
    mat_pow,
    mat_product,
    mat_trace,
    matrix_from_nested,
    parse_matrix,
    smith_normal_form,
)

A0 = IntMatrix.of(2, 1, 1, 1)


def _random_unimodular(rng, n=2, steps=12):
    """Product of random elementary and sign matrices."""
    m = IntMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        rows[i][j] = int(rng.integers(-3, 4))
        if rng.random() < 0.2:
            rows[i][i] = -1
        m = mat_mul(m, IntMatrix(tuple(tuple(r) for r in rows)))
    return m


def test_infinite_is_above_every_integer():
    """Test INFINITE ordering and rendering."""
    assert INFINITE > 10 ** 100
    assert not INFINITE < 5
    assert INFINITE == INFINITE
    assert str(INFINITE) == "infinite"


def test_add_counts_absorbs_infinite():
    """Test that INFINITE absorbs addition."""
    assert add_counts(2, 3) == 5
    assert add_counts(2, INFINITE) is INFINITE
    assert add_counts(INFINITE, 7) is INFINITE
    assert add_counts() == 0


def test_matrix_must_be_square():
    """Test that non-square matrices are rejected."""
    with pytest.raises(MalformedInput):
        IntMatrix(((1, 2), (3,)))
    with pytest.raises(MalformedInput):
        IntMatrix.of(1, 2, 3)


def test_basic_arithmetic():
    """Test powers, determinants, traces and operators."""
    t = IntMatrix.of(1, 1, 0, 1)
    assert mat_pow(t, 5) == IntMatrix.of(1, 5, 0, 1)
    assert mat_pow(t, -2) == IntMatrix.of(1, -2, 0, 1)
    assert mat_pow(A0, 0) == IntMatrix.identity(2)
    assert mat_det(IntMatrix.diag(2, 3, 4)) == 24
    assert mat_trace(A0) == 3
    assert A0 @ IntMatrix.identity(2) == A0
    assert 2 * A0 - A0 == A0


def test_inverse_unimodular():
    """Test unimodular inverses and the non-unimodular error."""
    assert inverse_unimodular(A0) == IntMatrix.of(1, -1, -1, 2)
    minus = -IntMatrix.identity(3)
    assert inverse_unimodular(minus) == minus
    with pytest.raises(NotUnimodular):
        inverse_unimodular(IntMatrix.of(2, 0, 0, 1))


def test_inverse_of_random_unimodular_matrices():
    """Test inverses of random unimodular matrices."""
    rng = np.random.default_rng(7)
    for n in (2, 3):
        for _ in range(25):
            m = _random_unimodular(rng, n)
            assert mat_mul(m, inverse_unimodular(m)) == IntMatrix.identity(n)


def test_entries_are_unbounded():
    """Test arithmetic with entries beyond machine integers."""
    big = IntMatrix.of(10 ** 30, 1, 10 ** 30 - 1, 1)
    assert mat_det(big) == 1
    assert format_matrix(big)[0][0] == "1" + "0" * 30


@pytest.mark.parametrize("entries,expected", [
    ((2, 1, 1, 1), True),
    ((1, 1, 0, 1), False),
    ((-3, 1, -1, 0), True),
    ((1, 1, 2, 1), True),
    ((0, 1, 1, 0), False),
    ((2, 0, 0, 1), False),
])
def test_is_anosov(entries, expected):
    """Test Anosov classification for both determinants."""
    assert is_anosov(IntMatrix.of(*entries)) is expected


def test_is_anosov_rejects_other_sizes():
    """Test that 3x3 matrices are never Anosov."""
    assert not is_anosov(-IntMatrix.identity(3))


@pytest.mark.parametrize("entries,invariants", [
    ((2, 4, 6, 8), (2, 4)),
    ((2, 0, 0, 3), (1, 6)),
    ((0, 0, 0, 0), (0, 0)),
    ((1, 0, 0, 0), (1, 0)),
])
def test_smith_normal_form_invariants(entries, invariants):
    """Test Smith invariants of small matrices."""
    assert smith_normal_form(IntMatrix.of(*entries)).invariants == invariants


def test_smith_form_transformations_reproduce_diagonal():
    """Test U * M * V = D on random 3x3 matrices."""
    rng = np.random.default_rng(11)
    for _ in range(30):
        m = IntMatrix(tuple(tuple(int(v) for v in row) for row in rng.integers(-6, 7, size=(3, 3))))
        form = smith_normal_form(m)
        assert mat_mul(mat_mul(form.u, m), form.v) == form.d
        assert abs(mat_det(form.u)) == 1 and abs(mat_det(form.v)) == 1
        product = 1
        for d in form.invariants:
            product *= d
        assert product == abs(mat_det(m))


def test_cokernel_order():
    """Test cokernel orders, finite and infinite."""
    assert cokernel_order(IntMatrix.diag(2, 2, 2)) == 8
    assert cokernel_order(IntMatrix.of(2, 4, 6, 8)) == 8
    assert cokernel_order(IntMatrix.of(1, 0, 0, 0)) is INFINITE


def test_parse_matrix():
    """Test parsing of row-major matrix text."""
    assert parse_matrix("2,1;1,1") == A0
    assert parse_matrix(" -1, 0 ; 0, -1 ") == -IntMatrix.identity(2)
    assert parse_matrix("1,0,0;0,1,0;0,0,1") == IntMatrix.identity(3)
    for text in ("2,1;1", "a,b;c,d", ""):
        with pytest.raises(MalformedInput):
            parse_matrix(text)


def test_matrix_from_nested():
    """Test matrices from nested JSON lists."""
    assert matrix_from_nested([["2", "1"], ["1", "1"]]) == A0
    assert matrix_from_nested([[2, 1], [1, 1]]) == A0
    for bad in ([[True, 0], [0, 1]], [[1.5, 0], [0, 1]], [], "2,1;1,1"):
        with pytest.raises(MalformedInput):
            matrix_from_nested(bad)


def test_power_laws_on_random_unimodular_matrices():
    """Test X^(m+n) = X^m X^n on random matrices."""
    rng = np.random.default_rng(13)
    for _ in range(20):
        x = _random_unimodular(rng, 2, steps=4)
        m, n = (int(v) for v in rng.integers(-10, 11, size=2))
        assert mat_pow(x, m + n) == mat_mul(mat_pow(x, m), mat_pow(x, n))


def test_mat_product():
    """Test products of matrix sequences."""
    t = IntMatrix.of(1, 1, 0, 1)
    assert mat_product([t, t, t]) == IntMatrix.of(1, 3, 0, 1)
    assert mat_product([], n=3) == IntMatrix.identity(3)


def test_cokernel_order_is_absolute_determinant():
    """Test |coker M| = |det M| on random 2x2 and 3x3 matrices, infinite when singular."""
    rng = np.random.default_rng(19)
    for i in range(1000):
        n = 2 + i % 2
        m = IntMatrix(tuple(tuple(int(v) for v in row) for row in rng.integers(-6, 7, size=(n, n))))
        det = abs(mat_det(m))
        assert cokernel_order(m) == (det if det else INFINITE)
