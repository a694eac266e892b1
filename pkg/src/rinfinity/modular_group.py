"""
Word algorithms in PSL(2,Z) = Z2 * Z3.

Letters are 's' (order 2) and 'u', 'U' (u and its inverse, order 3),
evaluated as S = (0 -1; 1 0), U = ST = (0 -1; 1 1) and U^-1 = (1 1; -1 0).
In PSL(2,Z) the translation T = (1 1; 0 1) is the word "s u".

Handles:
- Decomposition of SL(2,Z) matrices into normal-form words with a sign
- Cyclic reduction, rotation and conjugacy of cyclic words
- Primitive roots and centralizer generators
- The outer automorphism u <-> u^-1 (conjugation by R = (0 -1; -1 0))
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import EmptyWord, MalformedInput, NotSL, verify
from .exact_linear import IntMatrix, mat_det, mat_mul, mat_product, mat_trace

logger = logging.getLogger(__name__)

S = IntMatrix.of(0, -1, 1, 0)
U = IntMatrix.of(0, -1, 1, 1)
U_INV = IntMatrix.of(1, 1, -1, 0)
T = IntMatrix.of(1, 1, 0, 1)
R = IntMatrix.of(0, -1, -1, 0)

LETTER_MATRICES = {"s": S, "u": U, "U": U_INV}
LETTER_INVERSES = {"s": "s", "u": "U", "U": "u"}
# exponent of u carried by each u-type letter, mod 3
_U_EXPONENT = {"u": 1, "U": 2}
_U_LETTER = {1: "u", 2: "U"}


def _normalize(letters: Sequence[str]) -> Tuple[str, ...]:
    stack = []
    for letter in letters:
        if letter not in LETTER_MATRICES:
            raise MalformedInput(f"unknown letter {letter!r}; expected 's', 'u' or 'U'")
        if stack and letter == "s" and stack[-1] == "s":
            stack.pop()
        elif stack and letter != "s" and stack[-1] != "s":
            exponent = (_U_EXPONENT[stack.pop()] + _U_EXPONENT[letter]) % 3
            if exponent:
                stack.append(_U_LETTER[exponent])
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class PslWord:
    """Normal-form word: letters alternate between 's' and a u-letter."""

    letters: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _normalize(self.letters))

    @classmethod
    def parse(cls, text: str) -> "PslWord":
        """Parse "s u U s" (spaces optional)."""
        return cls(tuple(ch for ch in text if not ch.isspace()))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "PslWord") -> "PslWord":
        return PslWord(self.letters + other.letters)

    def __mul__(self, power: int) -> "PslWord":
        if power < 0:
            return inverse_word(self) * (-power)
        return PslWord(self.letters * power)

    def __str__(self) -> str:
        return " ".join(self.letters) if self.letters else "1"


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word; its rotations form one conjugacy class."""

    word: PslWord

    def __post_init__(self):
        letters = self.word.letters
        if len(letters) >= 2:
            verify(
                (letters[0] == "s") != (letters[-1] == "s"),
                f"word {self.word} is not cyclically reduced",
            )

    @property
    def letters(self) -> Tuple[str, ...]:
        return self.word.letters

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return str(self.word)


@dataclass(frozen=True)
class SignedLift:
    """evaluate(word) == sign * matrix, exactly."""

    word: PslWord
    matrix: IntMatrix
    sign: int


@dataclass(frozen=True)
class RotationCertificate:
    """conjugator * w1 * conjugator^-1 == w2 as PSL words."""

    rotation: int
    conjugator: PslWord


def inverse_word(w: PslWord) -> PslWord:
    return PslWord(tuple(LETTER_INVERSES[x] for x in reversed(w.letters)))


def evaluate(w: PslWord) -> IntMatrix:
    """Exact product of the generator matrices of w, left to right."""
    return mat_product((LETTER_MATRICES[x] for x in w.letters), n=2)


def _t_power_letters(q: int) -> Tuple[str, ...]:
    # T = s u and T^-1 = U s in PSL(2,Z)
    return ("s", "u") * q if q >= 0 else ("U", "s") * (-q)


def decompose(m: IntMatrix) -> SignedLift:
    """Write an SL(2,Z) matrix as a normal-form word up to sign.

    Uses the Euclidean reduction M -> S * T^-q * M with q = a // c until
    the lower-left entry vanishes, leaving +-T^n.

    Args:
        m: 2x2 integer matrix with determinant 1

    Returns:
        SignedLift with evaluate(word) == sign * m

    Raises:
        NotSL: if det(m) != 1
    """
    if m.size != 2 or mat_det(m) != 1:
        raise NotSL(f"decompose needs a 2x2 matrix of determinant 1, got {m}")

    letters = []
    a, b, c, d = m.entries
    steps = 0
    while c != 0:
        q = a // c
        letters.extend(_t_power_letters(q))
        letters.append("s")
        # S * T^-q * (a b; c d)
        a, b, c, d = -c, -d, a - q * c, b - q * d
        steps += 1
    # remaining matrix is a * T^(a*b) with a = +-1
    letters.extend(_t_power_letters(a * b))

    word = PslWord(tuple(letters))
    value = evaluate(word)
    sign = 1 if value == m else -1
    verify(value == sign * m, f"decomposition of {m} evaluates to {value}")
    logger.debug(f"decompose {m}: {steps} Euclidean steps, word length {len(word)}")
    return SignedLift(word=word, matrix=m, sign=sign)


def cyclic_reduce(w: PslWord) -> Tuple[CyclicWord, PslWord]:
    """Split w as conjugator * cyclic * conjugator^-1 with cyclic cyclically reduced."""
    core = w.letters
    conjugator = []
    while len(core) >= 2 and (core[0] == "s") == (core[-1] == "s"):
        first, last = core[0], core[-1]
        conjugator.append(first)
        # f x l = f (x l f) f^-1
        core = _normalize(core[1:-1] + (last, first))

    cyclic = CyclicWord(PslWord(core))
    c = PslWord(tuple(conjugator))
    verify(c + cyclic.word + inverse_word(c) == w, f"cyclic reduction of {w} does not recombine")
    return cyclic, c


def rotate(w: CyclicWord, r: int) -> CyclicWord:
    """Cyclic rotation by r letters: x^-1 * w * x where x is the first r letters."""
    if not len(w):
        return w
    r %= len(w)
    return CyclicWord(PslWord(w.letters[r:] + w.letters[:r]))


def psl_conjugator(w1: CyclicWord, w2: CyclicWord) -> Optional[RotationCertificate]:
    """Find a rotation of w1 equal to w2.

    Returns:
        RotationCertificate, or None when the cyclic words are not conjugate

    Raises:
        EmptyWord: if either word is the identity
    """
    if not len(w1) or not len(w2):
        raise EmptyWord("conjugacy of cyclic words needs non-identity inputs")
    if len(w1) != len(w2):
        return None
    for r in range(len(w1)):
        if rotate(w1, r) == w2:
            conjugator = inverse_word(PslWord(w1.letters[:r]))
            verify(
                conjugator + w1.word + inverse_word(conjugator) == w2.word,
                f"rotation certificate {r} fails for {w1} -> {w2}",
            )
            return RotationCertificate(rotation=r, conjugator=conjugator)
    return None


def flip_matrix(m: IntMatrix) -> IntMatrix:
    """R * m * R with R = (0 -1; -1 0), the det -1 involution realised by outer_flip."""
    return mat_mul(mat_mul(R, m), R)


def outer_flip(w: PslWord) -> PslWord:
    """Apply the automorphism s -> s, u -> u^-1 letterwise.

    Letterwise R S R = -S and R U R = U^-1, so evaluate(outer_flip(w)) is
    +-R * evaluate(w) * R. Since R = diag(1, -1) * S this is conjugation
    by diag(1, -1) followed by an inner automorphism.
    """
    flipped = PslWord(tuple(x if x == "s" else LETTER_INVERSES[x] for x in w.letters))
    expected = flip_matrix(evaluate(w))
    value = evaluate(flipped)
    verify(value == expected or value == -expected, f"outer flip of {w} does not match R-conjugation")
    return flipped


def is_hyperbolic_word(w: PslWord) -> bool:
    return abs(mat_trace(evaluate(w))) > 2


def cyclic_lift(m: IntMatrix) -> Tuple[CyclicWord, PslWord, int]:
    """Cyclic word of an SL(2,Z) matrix with its conjugator and sign.

    Returns:
        (cyclic, conjugator, sign) with
        evaluate(conjugator + cyclic + conjugator^-1) == sign * m
    """
    lift = decompose(m)
    cyclic, conjugator = cyclic_reduce(lift.word)
    return cyclic, conjugator, lift.sign


def primitive_root_psl(w: CyclicWord) -> Tuple[CyclicWord, int]:
    """Smallest period of the cyclic letter sequence.

    Returns:
        (root, k) with w == root^k letterwise and k maximal

    Raises:
        EmptyWord: for the identity
    """
    n = len(w)
    if not n:
        raise EmptyWord("the identity has no primitive root")
    letters = w.letters
    for p in range(1, n + 1):
        if n % p == 0 and all(letters[i] == letters[i % p] for i in range(n)):
            root = CyclicWord(PslWord(letters[:p]))
            verify((root.word * (n // p)) == w.word, f"root {root} does not reproduce {w}")
            return root, n // p
    raise AssertionError("unreachable: the full word is always a period")


def centralizer_generator(w: CyclicWord) -> CyclicWord:
    """Generator of the PSL(2,Z) centralizer of a hyperbolic cyclic word."""
    root, _ = primitive_root_psl(w)
    return root
