"""
GL(2,Z) conjugacy for Anosov matrices and the torus-bundle decision.

Handles:
- The commutant lattice Z*I + Z*M1 of a non-scalar matrix and its units
- Primitive roots and the det -1 root test
- GL(2,Z) conjugacy with verified witnesses (word method)
- Reversers S*A*S^-1 = A^-1 and the symmetric-form test
- The R-infinity decision for Z^2 x|_A Z
- A bounded brute-force conjugator search used as an independent oracle
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Tuple

from sympy import integer_nthroot

from .config import ORACLE_BOUND, UNIT_SEARCH_LIMIT
from .errors import MalformedInput, NotAnosov, ScalarMatrix, WrongDeterminant, verify
from .exact_linear import (
    Count,
    IntMatrix,
    inverse_unimodular,
    is_anosov,
    mat_det,
    mat_mul,
    mat_pow,
    mat_trace,
)
from .modular_group import (
    R,
    cyclic_lift,
    evaluate,
    inverse_word,
    outer_flip,
    primitive_root_psl,
    psl_conjugator,
)
from .reidemeister import SolAut, reidemeister_sol, sol_terms

logger = logging.getLogger(__name__)

I2 = IntMatrix.identity(2)
J = IntMatrix.of(0, -1, 1, 0)
D = IntMatrix.diag(1, -1)


def _require_anosov(a: IntMatrix) -> None:
    if not is_anosov(a):
        raise NotAnosov(f"{a} is not Anosov (hyperbolic with det = +-1)")


def _require_anosov_sl(a: IntMatrix) -> None:
    _require_anosov(a)
    if mat_det(a) != 1:
        raise WrongDeterminant(f"{a} has determinant {mat_det(a)}, expected +1")


def _is_square(n: int) -> Optional[int]:
    if n < 0:
        return None
    root, exact = integer_nthroot(n, 2)
    return int(root) if exact else None


# --- commutant lattice -------------------------------------------------------


@dataclass(frozen=True)
class CommutantLattice:
    """Integer matrices commuting with a non-scalar A: x*I + y*M1.

    With g = gcd(b, c, a - d) and M1 = (A - d*I)/g, the norm form is
    det(x*I + y*M1) = x^2 + trace1*x*y + norm1*y^2.
    """

    base: IntMatrix
    g: int
    m1: IntMatrix

    @property
    def trace1(self) -> int:
        return mat_trace(self.m1)

    @property
    def norm1(self) -> int:
        return mat_det(self.m1)

    @property
    def discriminant(self) -> int:
        return self.trace1 ** 2 - 4 * self.norm1

    def element(self, x: int, y: int) -> IntMatrix:
        return x * I2 + y * self.m1

    def norm(self, x: int, y: int) -> int:
        return x * x + self.trace1 * x * y + self.norm1 * y * y


def commutant_lattice(a: IntMatrix) -> CommutantLattice:
    """Basis {I, M1} of the commutant of a.

    Raises:
        ScalarMatrix: if a is a multiple of the identity
    """
    if a.size != 2:
        raise MalformedInput(f"commutant lattice needs a 2x2 matrix, got {a}")
    if a.is_scalar():
        raise ScalarMatrix(f"{a} is scalar; its commutant is all of M2(Z)")
    (p, q), (r, s) = a.rows
    g = gcd(q, r, p - s)
    m1 = IntMatrix.of((p - s) // g, q // g, r // g, 0)
    verify(mat_mul(m1, a) == mat_mul(a, m1), f"M1 = {m1} does not commute with {a}")
    verify(s * I2 + g * m1 == a, f"{a} != {s}*I + {g}*M1")
    return CommutantLattice(base=a, g=g, m1=m1)


def lattice_coordinates(lattice: CommutantLattice, x: IntMatrix) -> Tuple[int, int]:
    """(x, y) with X = x*I + y*M1.

    Raises:
        MalformedInput: if X does not lie in the lattice
    """
    m1 = lattice.m1
    cx = x[1, 1]
    for (i, j) in ((0, 1), (1, 0), (0, 0)):
        pivot = m1[i, j]
        if pivot:
            numerator = x[i, j] - (cx if i == j else 0)
            if numerator % pivot == 0:
                cy = numerator // pivot
                if lattice.element(cx, cy) == x:
                    return cx, cy
            break
    raise MalformedInput(f"{x} does not commute with {lattice.base}")


# --- roots and units -----------------------------------------------------------


@dataclass(frozen=True)
class PrimitiveRoot:
    """root^exponent == sign * A with root in SL(2,Z), trace(root) > 0."""

    root: IntMatrix
    exponent: int
    sign: int


def primitive_root(a: IntMatrix) -> PrimitiveRoot:
    """Primitive root of an Anosov SL(2,Z) matrix, read off its cyclic word."""
    _require_anosov_sl(a)
    cyclic, conjugator, _ = cyclic_lift(a)
    root_word, k = primitive_root_psl(cyclic)
    root = evaluate(conjugator + root_word.word + inverse_word(conjugator))
    if mat_trace(root) < 0:
        root = -root
    power = mat_pow(root, k)
    sign = 1 if power == a else -1
    verify(power == sign * a, f"primitive root {root}^{k} is not +-{a}")
    logger.debug(f"primitive root of {a}: {root} with exponent {k}, sign {sign}")
    return PrimitiveRoot(root=root, exponent=k, sign=sign)


def _det_minus_one_square_root(x: IntMatrix) -> Optional[IntMatrix]:
    """Y with Y^2 = x, det Y = -1, trace Y > 0, when it exists.

    Cayley-Hamilton gives Y^2 = tau*Y + I with tau = trace Y, so
    trace x = tau^2 + 2 and Y = (x - I)/tau.
    """
    tau = _is_square(mat_trace(x) - 2)
    if not tau:
        return None
    shifted = x - I2
    if any(v % tau for v in shifted.entries):
        return None
    y = IntMatrix(tuple(tuple(v // tau for v in row) for row in shifted.rows))
    if mat_det(y) != -1 or mat_mul(y, y) != x:
        return None
    return y


@dataclass(frozen=True)
class UnitGroup:
    """Units of the commutant lattice: +-epsilon^n. epsilon^exponent == sign * A."""

    lattice: CommutantLattice
    epsilon: IntMatrix
    exponent: int
    sign: int

    @property
    def det(self) -> int:
        return mat_det(self.epsilon)

    def power(self, n: int) -> IntMatrix:
        return mat_pow(self.epsilon, n)


def _positive_trace(x: IntMatrix) -> IntMatrix:
    return -x if mat_trace(x) < 0 else x


def _power_reaching(epsilon: IntMatrix, a: IntMatrix) -> Optional[Tuple[int, int]]:
    """(m, sign) with epsilon^m == sign * a, m >= 1, if any."""
    bound = abs(mat_trace(a))
    p, m = epsilon, 1
    # |trace(epsilon^m)| strictly increases for m >= 1
    while abs(mat_trace(p)) <= bound:
        if p == a:
            return m, 1
        if p == -a:
            return m, -1
        p, m = mat_mul(p, epsilon), m + 1
    return None


def search_unit(lattice: CommutantLattice, limit: int = UNIT_SEARCH_LIMIT) -> Optional[IntMatrix]:
    """Smallest y >= 1 with a unit x*I + y*M1, preferring norm -1, trace > 0.

    x solves x^2 + t*x*y + n*y^2 = N, so disc*y^2 + 4N must be a square.
    Searching y <= g suffices since A = d*I + g*M1 is itself a unit.
    """
    t, disc = lattice.trace1, lattice.discriminant
    for y in range(1, min(lattice.g, limit) + 1):
        for norm in (-1, 1):
            r = _is_square(disc * y * y + 4 * norm)
            if r is not None and (r - t * y) % 2 == 0:
                x = (r - t * y) // 2
                unit = lattice.element(x, y)
                verify(mat_det(unit) == norm, f"search produced a non-unit {unit}")
                return unit
    if lattice.g > limit:
        logger.warning(f"unit search for {lattice.base} stopped at y = {limit} (g = {lattice.g})")
    return None


def fundamental_unit(lattice: CommutantLattice) -> UnitGroup:
    """Fundamental unit of the commutant lattice of an Anosov matrix.

    The det +1 units are +-A1^n for the primitive root A1 (from the
    cyclic word). A det -1 unit exists iff A1 has a det -1 square root,
    which is then the fundamental unit. epsilon is oriented so that
    epsilon^m = +-A with m >= 1 and trace(epsilon) > 0.
    """
    a = lattice.base
    _require_anosov(a)
    b = a if mat_det(a) == 1 else mat_mul(a, a)
    a1 = primitive_root(b).root
    candidate = _det_minus_one_square_root(a1) or a1

    for epsilon in (candidate, _positive_trace(inverse_unimodular(candidate))):
        reached = _power_reaching(epsilon, a)
        if reached:
            m, sign = reached
            break
    else:
        raise AssertionError(f"no power of {candidate} reaches +-{a}")

    verify(mat_pow(epsilon, m) == sign * a, f"{epsilon}^{m} != {sign}*{a}")
    lattice_coordinates(lattice, epsilon)

    searched = search_unit(lattice)
    if searched is not None:
        verify(
            any(searched == s * u for s in (1, -1) for u in (epsilon, inverse_unimodular(epsilon))),
            f"lattice search unit {searched} is not +-{epsilon}^(+-1)",
        )
    logger.debug(f"fundamental unit of {a}: {epsilon} (det {mat_det(epsilon)}), exponent {m}")
    return UnitGroup(lattice=lattice, epsilon=epsilon, exponent=m, sign=sign)


@dataclass(frozen=True)
class RootReport:
    """A det -1 root X with X^exponent == sign * A, when one exists."""

    exists: bool
    root: Optional[IntMatrix] = None
    exponent: Optional[int] = None
    sign: Optional[int] = None


def det_minus_one_root(a: IntMatrix) -> RootReport:
    """Witness for "A or -A equals X^p with det X = -1".

    Any such X commutes with A, so it is a lattice unit +-epsilon^j; a det -1
    one exists iff det(epsilon) = -1, and then X = epsilon, p = m works.
    """
    _require_anosov_sl(a)
    units = fundamental_unit(commutant_lattice(a))
    if units.det != -1:
        return RootReport(exists=False)
    verify(mat_pow(units.epsilon, units.exponent) == units.sign * a, f"root witness fails for {a}")
    return RootReport(exists=True, root=units.epsilon, exponent=units.exponent, sign=units.sign)


def has_det_minus_one_root(a: IntMatrix) -> bool:
    return det_minus_one_root(a).exists


# --- conjugacy ---------------------------------------------------------------


@dataclass(frozen=True)
class Conjugation:
    """matrix * a * matrix^-1 == b."""

    matrix: IntMatrix
    route: str

    @property
    def det(self) -> int:
        return mat_det(self.matrix)


def _sl_conjugator(a: IntMatrix, b: IntMatrix, flip: bool) -> Optional[IntMatrix]:
    """SL-level conjugator from rotations of cyclic words.

    With flip=True the word of R*a*R is taken as the outer flip of a's word,
    and the returned matrix P' satisfies P' * (R a R) * P'^-1 = b.
    """
    wa, ca, _ = cyclic_lift(a)
    wb, cb, _ = cyclic_lift(b)
    if flip:
        wa = type(wa)(outer_flip(wa.word))
        ca = outer_flip(ca)
    certificate = psl_conjugator(wa, wb)
    if certificate is None:
        return None
    return evaluate(cb + certificate.conjugator + inverse_word(ca))


def gl2z_conjugate(a: IntMatrix, b: IntMatrix, prefer_det: int = 1) -> Optional[Conjugation]:
    """Find P in GL(2,Z) with P*a*P^-1 = b.

    For det +1 inputs both the direct route (det P = +1) and the flip route
    through R = (0 -1; -1 0) (det P = -1) are tried, the preferred
    determinant first. Det -1 inputs are reduced to their squares: any
    conjugator of the squares differs from a conjugator of the inputs by a
    unit commuting with a.

    Returns:
        Conjugation, or None when a and b are not conjugate

    Raises:
        NotAnosov: if either input is not Anosov
    """
    _require_anosov(a)
    _require_anosov(b)
    if (mat_det(a), mat_trace(a)) != (mat_det(b), mat_trace(b)):
        return None

    if mat_det(a) == -1:
        squared = gl2z_conjugate(mat_mul(a, a), mat_mul(b, b), prefer_det)
        if squared is None:
            return None
        p = squared.matrix
        if mat_mul(mat_mul(p, a), inverse_unimodular(p)) != b:
            return None
        return Conjugation(matrix=p, route=f"square-{squared.route}")

    routes = (False, True) if prefer_det == 1 else (True, False)
    for flip in routes:
        p = _sl_conjugator(a, b, flip)
        if p is None:
            continue
        if flip:
            p = mat_mul(p, R)
        # equal non-zero traces force the sign to be +1
        verify(
            mat_mul(mat_mul(p, a), inverse_unimodular(p)) == b,
            f"conjugator {p} fails for {a} -> {b}",
        )
        return Conjugation(matrix=p, route="flip" if flip else "direct")
    return None


@dataclass(frozen=True)
class ReverserReport:
    """S1 * A * S1^-1 == A^-1 when exists."""

    exists: bool
    witness: Optional[IntMatrix] = None
    det: Optional[int] = None
    symmetric_conjugate: bool = False


def find_reverser(a: IntMatrix) -> ReverserReport:
    """Reverser of an Anosov SL(2,Z) matrix, det +1 preferred.

    symmetric_conjugate holds when a det +1 reverser exists: either the
    witness has det +1, or a det -1 unit W turns it into W*S1.
    """
    _require_anosov_sl(a)
    a_inv = inverse_unimodular(a)
    found = gl2z_conjugate(a, a_inv, prefer_det=1)
    if found is None:
        logger.info(f"{a} is not conjugate to its inverse")
        return ReverserReport(exists=False)
    s1 = found.matrix
    verify(mat_mul(mat_mul(s1, a), inverse_unimodular(s1)) == a_inv, f"reverser {s1} fails for {a}")
    verify(mat_trace(s1) == 0, f"reverser {s1} of {a} has non-zero trace")
    symmetric = found.det == 1 or fundamental_unit(commutant_lattice(a)).det == -1
    return ReverserReport(exists=True, witness=s1, det=found.det, symmetric_conjugate=symmetric)


def reverser_family(a: IntMatrix, span: int = 2) -> List[IntMatrix]:
    """All reversers +-epsilon^n * S1 with |n| <= span, S1 from find_reverser."""
    report = find_reverser(a)
    if not report.exists:
        return []
    units = fundamental_unit(commutant_lattice(a))
    a_inv = inverse_unimodular(a)
    family = []
    for n in range(-span, span + 1):
        for sign in (1, -1):
            s = sign * mat_mul(units.power(n), report.witness)
            verify(mat_mul(s, a) == mat_mul(a_inv, s), f"{s} is not a reverser of {a}")
            family.append(s)
    return family


def literal_shapes(a: IntMatrix) -> FrozenSet[str]:
    """Which of the normal shapes A0 (symmetric), B0 (equal diagonal),
    C0 (bottom row (u - r, u)) the matrix literally has."""
    (r, s), (t, u) = a.rows
    shapes = set()
    if s == t:
        shapes.add("A0")
    if r == u:
        shapes.add("B0")
    if t == u - r:
        shapes.add("C0")
    return frozenset(shapes)


# --- the torus-bundle decision --------------------------------------------


class SolClause(str, Enum):
    DET_MINUS_ONE = "det_minus_one"
    NOT_REVERSIBLE = "not_reversible"
    SYMMETRIC_CONJUGATE = "symmetric_conjugate"
    DET_MINUS_ONE_ROOT = "det_minus_one_root"
    B0_C0_RINFINITY = "b0_c0_rinfinity"


@dataclass(frozen=True)
class SolCertificate:
    """Automorphism (S, eps = -1) with finite R(phi) = R(S) + R(A*S)."""

    s: IntMatrix
    eps: int
    r_s: Count
    r_as: Count
    reidemeister_number: Count


@dataclass(frozen=True)
class SolVerdict:
    matrix: IntMatrix
    r_infinity: bool
    clause: SolClause
    certificate: Optional[SolCertificate] = None
    reverser: Optional[ReverserReport] = None
    root: Optional[RootReport] = None


def sol_certificate(a: IntMatrix, s: IntMatrix) -> SolCertificate:
    """Certificate for the reverser s: R(phi) = R(S) + R(A*S), verified finite."""
    phi = SolAut(s=s, eps=-1, base=a)
    r_s, r_as = sol_terms(phi)
    total = reidemeister_sol(phi)
    verify(isinstance(total, int), f"reverser {s} of {a} gives infinite R(phi)")
    return SolCertificate(s=s, eps=-1, r_s=r_s, r_as=r_as, reidemeister_number=total)


def root_reverser_certificate(a: IntMatrix, s0: IntMatrix, x0: IntMatrix) -> SolCertificate:
    """Certificate S = S0 * X0 from a det -1 reverser S0 and a det -1 root X0.

    S has det +1 and trace 0, so R(S) = 2 = R(A*S).
    """
    verify(mat_det(s0) == -1 and mat_det(x0) == -1, "S0 and X0 must both have det -1")
    verify(mat_mul(x0, a) == mat_mul(a, x0), f"{x0} does not commute with {a}")
    s = mat_mul(s0, x0)
    certificate = sol_certificate(a, s)
    verify(certificate.reidemeister_number == 4, f"S0*X0 certificate gives {certificate.reidemeister_number}")
    return certificate


def decide_sol_torus_bundle(a: IntMatrix) -> SolVerdict:
    """Decide the R-infinity property of Z^2 x|_A Z for Anosov A.

    Clauses in order: det A = -1; A not conjugate to A^-1; a det +1
    reverser exists (certificate R = 4); A or -A has a det -1 root
    (certificate S0*X0); otherwise R-infinity.
    """
    _require_anosov(a)
    if mat_det(a) == -1:
        logger.info(f"{a}: det -1, R-infinity")
        return SolVerdict(matrix=a, r_infinity=True, clause=SolClause.DET_MINUS_ONE)

    reverser = find_reverser(a)
    if not reverser.exists:
        return SolVerdict(matrix=a, r_infinity=True, clause=SolClause.NOT_REVERSIBLE, reverser=reverser)

    if reverser.det == 1:
        certificate = sol_certificate(a, reverser.witness)
        verify(certificate.reidemeister_number == 4, f"det +1 reverser certificate for {a} is not 4")
        logger.info(f"{a}: det +1 reverser {reverser.witness}, R(phi) = 4")
        return SolVerdict(
            matrix=a, r_infinity=False, clause=SolClause.SYMMETRIC_CONJUGATE,
            certificate=certificate, reverser=reverser,
        )

    # Not reached when find_reverser prefers det +1: a det -1 unit W makes W * S a det +1 reverser.
    root = det_minus_one_root(a)
    if root.exists:
        certificate = root_reverser_certificate(a, reverser.witness, root.root)
        return SolVerdict(
            matrix=a, r_infinity=False, clause=SolClause.DET_MINUS_ONE_ROOT,
            certificate=certificate, reverser=reverser, root=root,
        )

    logger.info(f"{a}: only det -1 reversers and no det -1 root, R-infinity")
    return SolVerdict(
        matrix=a, r_infinity=True, clause=SolClause.B0_C0_RINFINITY, reverser=reverser, root=root,
    )


# --- brute-force oracle ------------------------------------------------------

ORACLE_GENERATORS: Dict[str, IntMatrix] = {
    "S": J,
    "T": IntMatrix.of(1, 1, 0, 1),
    "t": IntMatrix.of(1, -1, 0, 1),
    "D": D,
}


def _mul2(x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
    # row-major 2x2 product on plain tuples, for the search hot loop
    return (
        x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3],
    )


@dataclass(frozen=True)
class BruteForceWitness:
    matrix: IntMatrix
    word: str


def bruteforce_conjugator_search(a: IntMatrix, b: IntMatrix, bound: int = ORACLE_BOUND) -> Optional[BruteForceWitness]:
    """Breadth-first search over words of length <= bound in S, T, T^-1, D.

    Words are visited in shortlex order and each matrix only once, so the
    first witness is deterministic. None means nothing was found within the
    bound, which does not prove non-conjugacy.
    """
    ta, tb = a.entries, b.entries
    generators = [(name, g.entries) for name, g in ORACLE_GENERATORS.items()]
    start = I2.entries
    queue = deque([(start, "")])
    seen = {start}
    visited = 0
    while queue:
        p, word = queue.popleft()
        visited += 1
        if _mul2(p, ta) == _mul2(tb, p):
            return BruteForceWitness(matrix=IntMatrix.of(*p), word=word or "1")
        if len(word) == bound:
            continue
        for name, g in generators:
            q = _mul2(p, g)
            if q not in seen:
                seen.add(q)
                queue.append((q, word + name))
    logger.debug(f"brute-force search {a} -> {b}: {visited} matrices, no witness within {bound}")
    return None
