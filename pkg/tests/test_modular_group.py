"""
Tests for PSL(2,Z) word algorithms.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from rinfinity.errors import EmptyWord, MalformedInput, NotSL
from rinfinity.exact_linear import IntMatrix, mat_mul, mat_pow
from rinfinity.modular_group import (
    R,
    S,
    T,
    CyclicWord,
    PslWord,
    centralizer_generator,
    cyclic_lift,
    cyclic_reduce,
    decompose,
    evaluate,
    flip_matrix,
    inverse_word,
    is_hyperbolic_word,
    outer_flip,
    primitive_root_psl,
    psl_conjugator,
    rotate,
)

A0 = IntMatrix.of(2, 1, 1, 1)


def _random_sl2(rng, steps=10):
    m = IntMatrix.identity(2)
    for _ in range(steps):
        k = int(rng.integers(-3, 4))
        factor = IntMatrix.of(1, k, 0, 1) if rng.random() < 0.5 else IntMatrix.of(1, 0, k, 1)
        m = mat_mul(m, factor)
    return m


def test_words_normalize():
    """Test free-product normalization of words."""
    assert PslWord.parse("s s") == PslWord()
    assert PslWord.parse("u u u") == PslWord()
    assert PslWord.parse("u u") == PslWord.parse("U")
    assert str(PslWord.parse("s u U s")) == "1"
    with pytest.raises(MalformedInput):
        PslWord.parse("s x")


def test_translation_is_s_u():
    """Test that s u evaluates to -T."""
    assert evaluate(PslWord.parse("su")) == -T


def test_inverse_word_cancels():
    """Test that a word times its inverse is trivial."""
    w = PslWord.parse("s u s U s u")
    assert len(w + inverse_word(w)) == 0
    assert len(w * -2 + w * 2) == 0


def test_decompose_a0():
    """Test the word of (2 1; 1 1)."""
    lift = decompose(A0)
    assert lift.word == PslWord.parse("s u s U")
    assert lift.sign == -1
    assert evaluate(lift.word) == -A0


def test_decompose_round_trips_random_matrices():
    """Test that decomposed words evaluate back to +-M."""
    rng = np.random.default_rng(3)
    for _ in range(1000):
        m = _random_sl2(rng)
        lift = decompose(m)
        assert evaluate(lift.word) == lift.sign * m


def test_decompose_requires_det_one():
    """Test that decompose rejects det -1."""
    with pytest.raises(NotSL):
        decompose(IntMatrix.of(1, 1, 2, 1))


def test_cyclic_reduce_recombines():
    """Test that cyclic reduction recombines to the input."""
    w = PslWord.parse("u s u s U U")
    cyclic, conjugator = cyclic_reduce(w)
    assert conjugator + cyclic.word + inverse_word(conjugator) == w
    letters = cyclic.letters
    assert len(letters) < 2 or (letters[0] == "s") != (letters[-1] == "s")


def test_rotation_conjugator():
    """Test the rotation certificate of a rotated word."""
    w = CyclicWord(PslWord.parse("s u s U"))
    rotated = rotate(w, 1)
    assert rotated.letters == ("u", "s", "U", "s")
    certificate = psl_conjugator(w, rotated)
    assert certificate.rotation == 1
    assert certificate.conjugator == PslWord.parse("s")


def test_psl_conjugator_rejects_non_rotations():
    """Test non-rotations and the empty word."""
    w1 = CyclicWord(PslWord.parse("s u s U"))
    w2 = CyclicWord(PslWord.parse("s u s u"))
    assert psl_conjugator(w1, w2) is None
    with pytest.raises(EmptyWord):
        psl_conjugator(w1, CyclicWord(PslWord()))


def test_conjugate_matrices_have_rotated_cyclic_words():
    """Test that conjugate matrices give rotated cyclic words."""
    rng = np.random.default_rng(5)
    wa, _, _ = cyclic_lift(A0)
    for _ in range(20):
        p = _random_sl2(rng)
        b = mat_mul(mat_mul(p, A0), IntMatrix.of(p[1, 1], -p[0, 1], -p[1, 0], p[0, 0]))
        wb, _, _ = cyclic_lift(b)
        assert psl_conjugator(wa, wb) is not None


def test_flip():
    """Test the outer flip on words and matrices."""
    assert flip_matrix(T) == IntMatrix.of(1, 0, 1, 1)
    assert outer_flip(PslWord.parse("s u")) == PslWord.parse("s U")
    assert mat_mul(R, R) == IntMatrix.identity(2)
    assert flip_matrix(S) == -S


def test_primitive_root_of_square():
    """Test the primitive root of a square."""
    cyclic, _, _ = cyclic_lift(mat_pow(A0, 2))
    root, k = primitive_root_psl(cyclic)
    assert k == 2
    assert len(root) == 4
    single, _, _ = cyclic_lift(A0)
    assert primitive_root_psl(single)[1] == 1
    with pytest.raises(EmptyWord):
        primitive_root_psl(CyclicWord(PslWord()))


def test_hyperbolic_word():
    """Test hyperbolic word detection."""
    assert is_hyperbolic_word(PslWord.parse("s u s U"))
    assert not is_hyperbolic_word(PslWord.parse("s u"))


def test_primitive_root_of_random_powers():
    """Test primitive roots of random powers."""
    rng = np.random.default_rng(29)
    checked = 0
    while checked < 20:
        length = 2 * int(rng.integers(1, 5))
        letters = tuple("s" if i % 2 == 0 else ("u" if rng.random() < 0.5 else "U") for i in range(length))
        w = CyclicWord(PslWord(letters))
        if primitive_root_psl(w)[1] != 1:
            continue
        k = int(rng.integers(1, 6))
        assert primitive_root_psl(CyclicWord(w.word * k)) == (w, k)
        checked += 1


def test_centralizer_generator_is_primitive_root():
    """Test the centralizer generator of a fourth power."""
    single, _, _ = cyclic_lift(A0)
    fourth, _, _ = cyclic_lift(mat_pow(A0, 4))
    generator = centralizer_generator(fourth)
    assert len(generator) == len(single)
    assert psl_conjugator(single, generator) is not None
    assert centralizer_generator(single) == single
    with pytest.raises(EmptyWord):
        centralizer_generator(CyclicWord(PslWord()))


def test_outer_flip_is_an_involution_matching_r_conjugation():
    """Test iota(iota(w)) = w and evaluate(iota(w)) = +-R evaluate(w) R on random words."""
    rng = np.random.default_rng(37)
    for _ in range(500):
        length = int(rng.integers(1, 13))
        w = PslWord.parse(" ".join(rng.choice(["s", "u", "U"], size=length)))
        flipped = outer_flip(w)
        assert outer_flip(flipped) == w
        expected = flip_matrix(evaluate(w))
        assert evaluate(flipped) in (expected, -expected)
