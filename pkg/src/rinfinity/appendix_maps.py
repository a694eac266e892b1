"""
Monomial self-maps of S^3 x S^3 realising a matrix on H_3.

Quaternions are numpy arrays (..., 4) ordered (w, x, y, z); products are
vectorised over leading axes so a whole sample batch is evaluated at once.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import APPENDIX_SAMPLES, APPENDIX_SEED, COMPOSITION_TOLERANCE, UNIT_NORM_TOLERANCE
from .errors import MalformedInput, MatrixMismatch, verify
from .exact_linear import IntMatrix, inverse_unimodular, mat_mul
from .glz_conjugacy import gl2z_conjugate

logger = logging.getLogger(__name__)

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I_UNIT = np.array([0.0, 1.0, 0.0, 0.0])
J_UNIT = np.array([0.0, 0.0, 1.0, 0.0])
K_UNIT = np.array([0.0, 0.0, 0.0, 1.0])

_LETTER = re.compile(r"q([12])(?:\^(-?\d+))?")


def quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    pw, px, py, pz = np.moveaxis(np.asarray(p, dtype=float), -1, 0)
    qw, qx, qy, qz = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def quat_conj(q: np.ndarray) -> np.ndarray:
    return np.asarray(q, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def normalize(q: np.ndarray) -> np.ndarray:
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def random_unit_quaternions(n: int, rng: np.random.Generator) -> np.ndarray:
    """n points uniform on S^3: normalised 4D Gaussians."""
    return normalize(rng.normal(size=(n, 4)))


def parse_word(word: str) -> List[Tuple[int, int]]:
    """Parse "q1^4 q2" or "q2 q1^-1" into (generator, exponent) pairs."""
    compact = "".join(word.split())
    letters = []
    position = 0
    for match in _LETTER.finditer(compact):
        if match.start() != position:
            break
        letters.append((int(match.group(1)), int(match.group(2) or 1)))
        position = match.end()
    if position != len(compact) or not letters:
        raise MalformedInput(f"malformed word {word!r}; expected letters like q1, q2^-1, q1^4")
    return letters


@dataclass(frozen=True)
class TorusMapSpec:
    """Output words (one per coordinate) and the matrix they should induce."""

    words: Tuple[str, str]
    matrix: IntMatrix

    def letters(self) -> List[List[Tuple[int, int]]]:
        return [parse_word(w) for w in self.words]


def _evaluate_word(letters: List[Tuple[int, int]], qs: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    result = np.broadcast_to(ONE, np.shape(qs[0])).copy()
    for generator, exponent in letters:
        q = qs[generator - 1] if exponent > 0 else quat_conj(qs[generator - 1])
        for _ in range(abs(exponent)):
            result = normalize(quat_mul(result, q))
    return result


def h_map(spec: TorusMapSpec, q1: np.ndarray, q2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate both output words left to right on unit quaternions."""
    first, second = spec.letters()
    return _evaluate_word(first, (q1, q2)), _evaluate_word(second, (q1, q2))


def induced_h3_matrix(spec: TorusMapSpec) -> IntMatrix:
    """Exponent-sum matrix: row i holds the (q1, q2) exponent sums of output word i.

    Raises:
        MatrixMismatch: if it differs from spec.matrix
    """
    rows = []
    for letters in spec.letters():
        sums = [0, 0]
        for generator, exponent in letters:
            sums[generator - 1] += exponent
        rows.append(tuple(sums))
    induced = IntMatrix(tuple(rows))
    if induced != spec.matrix:
        raise MatrixMismatch(f"words {spec.words} induce {induced}, not {spec.matrix}")
    return induced


def verify_inverse_pair(
    spec_a: TorusMapSpec,
    spec_a_inv: TorusMapSpec,
    n: int = APPENDIX_SAMPLES,
    seed: int = APPENDIX_SEED,
) -> float:
    """Maximum deviation from the identity of both compositions.

    Args:
        spec_a: map realising A
        spec_a_inv: map realising A^-1
        n: number of sampled pairs (q1, q2)
        seed: seed for numpy's default generator

    Returns:
        max over samples and both composition orders of the Euclidean
        distance in R^8 between the composite and the input
    """
    if n < 1:
        raise MalformedInput(f"sample count must be positive, got {n}")
    rng = np.random.default_rng(seed)
    q1 = random_unit_quaternions(n, rng)
    q2 = random_unit_quaternions(n, rng)

    deviation = 0.0
    for outer, inner in ((spec_a, spec_a_inv), (spec_a_inv, spec_a)):
        p1, p2 = h_map(outer, *h_map(inner, q1, q2))
        norms = np.linalg.norm(np.concatenate([p1, p2]), axis=-1)
        verify(np.abs(norms - 1.0).max() < UNIT_NORM_TOLERANCE, "composite left the unit sphere")
        distance = np.sqrt(np.sum((p1 - q1) ** 2, axis=-1) + np.sum((p2 - q2) ** 2, axis=-1))
        deviation = max(deviation, float(distance.max()))
    logger.debug(f"composition of {spec_a.words} and {spec_a_inv.words}: max deviation {deviation:.3e}")
    return deviation


@dataclass(frozen=True)
class AppendixPair:
    forward: TorusMapSpec
    inverse: TorusMapSpec


def appendix_pairs() -> List[AppendixPair]:
    """The two reference gluing maps: a det -1 matrix and a det +1 one.

    (4 1; 3 1) is reversed by (-1 1; 0 1), so the degree -1 argument only
    settles the first mapping torus.
    """
    return [
        AppendixPair(
            TorusMapSpec(("q1 q2", "q1^2 q2"), IntMatrix.of(1, 1, 2, 1)),
            TorusMapSpec(("q2 q1^-1", "q1 q2^-1 q1"), IntMatrix.of(-1, 1, 2, -1)),
        ),
        AppendixPair(
            TorusMapSpec(("q1^4 q2", "q1^3 q2"), IntMatrix.of(4, 1, 3, 1)),
            TorusMapSpec(("q1 q2^-1", "q2 q1^-1 q2 q1^-1 q2 q1^-1 q2"), IntMatrix.of(1, -1, -3, 4)),
        ),
    ]


@dataclass
class PairReport:
    matrix: IntMatrix
    induced_product_is_identity: bool
    max_deviation: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.induced_product_is_identity and self.max_deviation < COMPOSITION_TOLERANCE

    def report(self) -> Dict:
        return {
            "matrix": [[str(v) for v in row] for row in self.matrix.rows],
            "induced_product_is_identity": self.induced_product_is_identity,
            "max_deviation": f"{self.max_deviation:.3e}",
            "samples": self.samples,
            "passed": self.passed,
        }


def check_pair(pair: AppendixPair, n: int = APPENDIX_SAMPLES, seed: int = APPENDIX_SEED) -> PairReport:
    """Exact H_3 check plus sampled composition check for one pair."""
    product = mat_mul(induced_h3_matrix(pair.forward), induced_h3_matrix(pair.inverse))
    return PairReport(
        matrix=pair.forward.matrix,
        induced_product_is_identity=product == IntMatrix.identity(2),
        max_deviation=verify_inverse_pair(pair.forward, pair.inverse, n, seed),
        samples=n,
    )


@dataclass(frozen=True)
class SpaceVersusGroup:
    """Mapping torus of h_A: pi_1 = Z never has R-infinity.

    space_r_infinity holds when no B in GL(2,Z) has B*A*B^-1 = A^-1, so
    every homotopy equivalence has degree 1 on the base circle.
    """

    matrix: IntMatrix
    reverser_exists: bool
    space_r_infinity: bool
    group_r_infinity: bool = False
    reverser: Optional[IntMatrix] = None


def space_versus_group(spec: TorusMapSpec) -> SpaceVersusGroup:
    a = induced_h3_matrix(spec)
    found = gl2z_conjugate(a, inverse_unimodular(a))
    if found is not None:
        logger.info(f"{a} is reversed by {found.matrix} (det {found.det})")
    return SpaceVersusGroup(
        matrix=a, reverser_exists=found is not None, space_r_infinity=found is None,
        reverser=found.matrix if found else None,
    )
