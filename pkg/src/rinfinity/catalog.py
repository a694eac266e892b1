"""
Geometry catalog and the R-infinity dispatcher.

Handles:
- Descriptors for the eight geometries of finite-volume 3-manifolds
- The ten flat 3-manifold groups, the four S2 x R manifolds and the
  fifteen Nil Seifert-invariant families as static tables
- decide(): one code path per geometry, delegating Sol torus bundles to
  the matrix decision
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from .errors import InvalidDescriptor, OutOfRange
from .exact_linear import INFINITE, Count, IntMatrix, is_anosov
from .glz_conjugacy import SolClause, SolVerdict, decide_sol_torus_bundle
from .reidemeister import LatticeAut, reidemeister_lattice, verify_case6

logger = logging.getLogger(__name__)


class Geometry(str, Enum):
    SPHERICAL = "spherical"
    S2XR = "s2xr"
    EUCLIDEAN = "euclidean"
    NIL = "nil"
    SLTILDE = "sltilde"
    H2XR = "h2xr"
    SOL = "sol"
    HYPERBOLIC = "hyperbolic"


class Holonomy(str, Enum):
    TRIVIAL = "1"
    Z2 = "Z2"
    Z3 = "Z3"
    Z4 = "Z4"
    Z6 = "Z6"
    Z2xZ2 = "Z2xZ2"


class S2xRManifold(str, Enum):
    S2xS1 = "S2xS1"
    S2twistS1 = "S2twistS1"
    RP2xS1 = "RP2xS1"
    RP3connRP3 = "RP3connRP3"


class ReasonCode(str, Enum):
    HYPERBOLIC_ALWAYS = "hyperbolic_always"
    H2XR_ALWAYS = "h2xr_always"
    SLTILDE_ALWAYS = "sltilde_always"
    SAPPHIRE_ALWAYS = "sapphire_always"
    FINITE_GROUP = "finite_group"
    S2XR_TABLE = "s2xr_table"
    FLAT_TABLE = "flat_table"
    NIL_TABLE = "nil_table"
    SOL_TORUS_BUNDLE = "sol_torus_bundle"


# group_r_infinity value for spherical geometry
FINITE_GROUP = "finite_group"

NIL_FAMILIES = tuple(f"M{i}" for i in range(1, 16))


# --- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class Spherical:
    pass


@dataclass(frozen=True)
class S2xR:
    manifold: S2xRManifold

    def __post_init__(self):
        try:
            object.__setattr__(self, "manifold", S2xRManifold(self.manifold))
        except ValueError as e:
            raise InvalidDescriptor(f"unknown S2 x R manifold {self.manifold!r}") from e


@dataclass(frozen=True)
class Euclidean:
    index: int

    def __post_init__(self):
        if isinstance(self.index, bool) or not isinstance(self.index, int) or not 1 <= self.index <= 10:
            raise InvalidDescriptor(f"flat group index must be 1..10, got {self.index!r}")


@dataclass(frozen=True)
class Nil:
    family: str
    k: int

    def __post_init__(self):
        if self.family not in NIL_FAMILIES:
            raise InvalidDescriptor(f"Nil family must be one of M1..M15, got {self.family!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise InvalidDescriptor(
                f"Nil Euler number k must be > 0, got {self.k!r}: invariants with k <= 0 are "
                "either flat manifolds or already homeomorphic to one in the table for k > 0"
            )


@dataclass(frozen=True)
class SLtilde:
    pass


@dataclass(frozen=True)
class H2xR:
    pass


@dataclass(frozen=True)
class SolTorusBundle:
    matrix: IntMatrix

    def __post_init__(self):
        if not is_anosov(self.matrix):
            raise InvalidDescriptor(f"torus bundle monodromy {self.matrix} is not Anosov")


@dataclass(frozen=True)
class SolSapphire:
    """Sapphire manifold; the gluing matrix is carried for reports only."""

    matrix: Optional[IntMatrix] = None

    def __post_init__(self):
        if self.matrix is not None and not is_anosov(self.matrix):
            raise InvalidDescriptor(f"sapphire gluing matrix {self.matrix} is not Anosov")


@dataclass(frozen=True)
class Hyperbolic:
    compact: bool = True


GeometryDescriptor = Union[
    Spherical, S2xR, Euclidean, Nil, SLtilde, H2xR, SolTorusBundle, SolSapphire, Hyperbolic
]


def geometry_of(d: GeometryDescriptor) -> Geometry:
    match d:
        case Spherical():
            return Geometry.SPHERICAL
        case S2xR():
            return Geometry.S2XR
        case Euclidean():
            return Geometry.EUCLIDEAN
        case Nil():
            return Geometry.NIL
        case SLtilde():
            return Geometry.SLTILDE
        case H2xR():
            return Geometry.H2XR
        case SolTorusBundle() | SolSapphire():
            return Geometry.SOL
        case Hyperbolic():
            return Geometry.HYPERBOLIC
    raise InvalidDescriptor(f"not a geometry descriptor: {d!r}")


# --- flat table --------------------------------------------------------------


@dataclass(frozen=True)
class FlatGroupEntry:
    index: int
    generators: Tuple[str, ...]
    relators: Tuple[str, ...]
    presentation: str
    holonomy: Holonomy
    center: str
    orientable: bool
    verdict: bool
    planar_quotient: Optional[str]
    fibration: str
    method: str


_COMMUTE_ALPHA = "a_i a_j = a_j a_i (1 <= i,j <= 3)"
_KLEIN = "b a b^-1 = a^-1"


def _flat(index, generators, relators, holonomy, center, verdict, planar, fibration, method):
    presentation = f"<{', '.join(generators)} | {', '.join(relators)}>"
    return FlatGroupEntry(
        index=index, generators=tuple(generators), relators=tuple(relators),
        presentation=presentation, holonomy=holonomy, center=center,
        orientable=index <= 6, verdict=verdict, planar_quotient=planar,
        fibration=fibration, method=method,
    )


FLAT_TABLE: Tuple[FlatGroupEntry, ...] = (
    _flat(1, ("a1", "a2", "a3"), (_COMMUTE_ALPHA,), Holonomy.TRIVIAL, "Z^3", False, None,
          "3-torus",
          "The 3-torus: -I on Z^3 has R = |det(2I)| = 8."),
    _flat(2, ("a1", "a2", "a3", "t"),
          ("a1 = t^2", "t a2 t^-1 = a2^-1", "t a3 t^-1 = a3^-1", _COMMUTE_ALPHA),
          Holonomy.Z2, "<a1>", False, "G2",
          "central extension of G2 by Z",
          "An explicit automorphism with finite Reidemeister number is known."),
    _flat(3, ("a1", "a2", "a3", "t"),
          ("a1 = t^3", "t a2 t^-1 = a3", "t a3 t^-1 = a2^-1 a3^-1", _COMMUTE_ALPHA),
          Holonomy.Z3, "<a1>", True, "G3",
          "finite holonomy over the characteristic lattice Z^3",
          "Some lift twisted by an inner automorphism has infinite R on Z^3, "
          "and Z^3 is characteristic with finite quotient."),
    _flat(4, ("a1", "a2", "a3", "t"),
          ("a1 = t^4", "t a2 t^-1 = a3", "t a3 t^-1 = a2^-1", _COMMUTE_ALPHA),
          Holonomy.Z4, "<a1>", True, "G4",
          "central extension of G4 by Z",
          "The centre is characteristic and the quotient G4 has the R-infinity property."),
    _flat(5, ("a1", "a2", "a3", "t"),
          ("a1 = t^6", "t a2 t^-1 = a3", "t a3 t^-1 = a2^-1 a3", _COMMUTE_ALPHA),
          Holonomy.Z6, "<a1>", True, "G6",
          "central extension of G6 by Z",
          "The centre is characteristic and the quotient G6 has the R-infinity property."),
    _flat(6, ("a1", "a2", "a3", "t1", "t2", "t3"),
          ("a1 a3 = t3 t2 t1", "a_i = t_i^2", "t_i a_j t_i^-1 = a_j^-1 (i != j)", _COMMUTE_ALPHA),
          Holonomy.Z2xZ2, "trivial", False, None,
          "finite holonomy over the characteristic lattice Z^3",
          "Hantzsche-Wendt group: all four holonomy lifts of phi' have R = 2, so R(phi) is finite."),
    _flat(7, ("a", "b", "t"), (_KLEIN, "t a = a t", "t b = b t"),
          Holonomy.Z2, "<b^2, t> = Z^2", True, None,
          "Klein bottle times circle",
          "pi_1(Klein bottle) x Z is known to have the R-infinity property."),
    _flat(8, ("a", "b", "t"), (_KLEIN, "t a t^-1 = a", "t b t^-1 = a b"),
          Holonomy.Z2, "<b^2> = Z", True, None,
          "finite holonomy over the characteristic lattice Z^3",
          "Some lift twisted by an inner automorphism has infinite R on Z^3, "
          "and Z^3 is characteristic with finite quotient."),
    _flat(9, ("a", "b", "t"), (_KLEIN, "t a t^-1 = a", "t b t^-1 = b^-1"),
          Holonomy.Z2xZ2, "<t^2> = Z", True, None,
          "Klein bottle bundle over the circle",
          "pi_1(Klein bottle) is characteristic; the base map is +-id and "
          "the fibre classes inject, so R is infinite."),
    _flat(10, ("a", "b", "t"), (_KLEIN, "t a t^-1 = a", "t b t^-1 = a b^-1"),
          Holonomy.Z2xZ2, "<t^2> = Z", True, None,
          "Klein bottle bundle over the circle",
          "pi_1(Klein bottle) is characteristic; the base map is +-id and "
          "the fibre classes inject, so R is infinite."),
)


def flat_entry(i: int) -> FlatGroupEntry:
    """Row i (1..10) of the flat 3-manifold group table.

    Raises:
        OutOfRange: if i is not in 1..10
    """
    if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= 10:
        raise OutOfRange(f"flat group index must be 1..10, got {i!r}")
    return FLAT_TABLE[i - 1]


# --- Nil table ---------------------------------------------------------------


@dataclass(frozen=True)
class NilEntry:
    family: str
    type: str
    invariant: str
    holonomy: Holonomy
    verdict: bool

    def render(self, k: int) -> str:
        """Seifert invariant with the Euler number k substituted."""
        def substitute(match):
            offset = int(match.group(1) or 0)
            return f"{{{k - offset},"
        return re.sub(r"^\{k(?:-(\d))?,", substitute, self.invariant)


def _nil(family, type_, invariant, holonomy):
    return NilEntry(family=family, type=type_, invariant=invariant, holonomy=holonomy,
                    verdict=family not in ("M1", "M2"))


NIL_TABLE: Tuple[NilEntry, ...] = (
    _nil("M1", "i", "{k,(o1,1);}", Holonomy.TRIVIAL),
    _nil("M2", "ii", "{k-2,(o1,0);(2,1),(2,1),(2,1),(2,1)}", Holonomy.Z2),
    _nil("M3", "iii", "{k,(n2,2);}", Holonomy.Z2),
    _nil("M4", "iv", "{k-1,(n2,1);(2,1),(2,1)}", Holonomy.Z2xZ2),
    _nil("M5", "v", "{k-2,(o1,0);(4,3),(4,3),(2,1)}", Holonomy.Z4),
    _nil("M6", "v", "{k-1,(o1,0);(4,1),(4,1),(2,1)}", Holonomy.Z4),
    _nil("M7", "v", "{k-2,(o1,0);(4,3),(4,1),(2,1)}", Holonomy.Z4),
    _nil("M8", "vi", "{k-2,(o1,0);(3,2),(3,2),(3,2)}", Holonomy.Z3),
    _nil("M9", "vi", "{k-1,(o1,0);(3,1),(3,1),(3,1)}", Holonomy.Z3),
    _nil("M10", "vi", "{k-2,(o1,0);(3,2),(3,1),(3,1)}", Holonomy.Z3),
    _nil("M11", "vi", "{k-2,(o1,0);(3,2),(3,2),(3,1)}", Holonomy.Z3),
    _nil("M12", "vii", "{k-2,(o1,0);(6,5),(3,2),(2,1)}", Holonomy.Z6),
    _nil("M13", "vii", "{k-1,(o1,0);(6,1),(3,1),(2,1)}", Holonomy.Z6),
    _nil("M14", "vii", "{k-2,(o1,0);(6,1),(3,2),(2,1)}", Holonomy.Z6),
    _nil("M15", "vii", "{k-2,(o1,0);(6,5),(3,1),(2,1)}", Holonomy.Z6),
)


def nil_table() -> List[NilEntry]:
    return list(NIL_TABLE)


def nil_entry(family: str) -> NilEntry:
    for entry in NIL_TABLE:
        if entry.family == family:
            return entry
    raise OutOfRange(f"Nil family must be one of M1..M15, got {family!r}")


# --- S2 x R table ------------------------------------------------------------


@dataclass(frozen=True)
class S2xREntry:
    manifold: S2xRManifold
    group_name: str
    group_r_infinity: bool
    manifold_r_infinity: bool


S2XR_TABLE: Dict[S2xRManifold, S2xREntry] = {
    S2xRManifold.S2xS1: S2xREntry(S2xRManifold.S2xS1, "Z", False, False),
    S2xRManifold.RP2xS1: S2xREntry(S2xRManifold.RP2xS1, "Z2xZ", False, False),
    S2xRManifold.S2twistS1: S2xREntry(S2xRManifold.S2twistS1, "Z", False, False),
    S2xRManifold.RP3connRP3: S2xREntry(S2xRManifold.RP3connRP3, "Z2*Z2", True, True),
}


def s2xr_entry(m: S2xRManifold) -> S2xREntry:
    try:
        return S2XR_TABLE[S2xRManifold(m)]
    except ValueError as e:
        raise InvalidDescriptor(f"unknown S2 x R manifold {m!r}") from e


# --- verdicts ----------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Evidence that an infinite group lacks the R-infinity property.

    Either a concrete automorphism with its finite Reidemeister number, or
    a pointer to the published construction when none is computed here.
    """

    kind: str
    description: str
    reidemeister_number: Optional[Count] = None
    matrix: Optional[IntMatrix] = None
    terms: Tuple[Count, ...] = ()


@dataclass(frozen=True)
class Verdict:
    descriptor: GeometryDescriptor
    group_r_infinity: Union[bool, str]
    manifold_r_infinity: bool
    reason_code: ReasonCode
    citations: Tuple[str, ...]
    certificate: Optional[Certificate] = None
    clause: Optional[SolClause] = None
    sol: Optional[SolVerdict] = None


CITATIONS = {
    "hyperbolic_compact": "Compact hyperbolic 3-manifold groups are non-elementary word-hyperbolic, "
                          "and such groups have the R-infinity property.",
    "hyperbolic_cusped": "Finite-volume cusped hyperbolic 3-manifold groups are relatively hyperbolic "
                         "with respect to the cusp groups, and such groups have the R-infinity property.",
    "h2xr": "For H2 x R the centre is characteristic and the quotient is a non-elementary "
            "Fuchsian group with the R-infinity property.",
    "sltilde": "For SL~(2,R) the fibre subgroup is characteristic and the base orbifold group "
               "is a non-elementary Fuchsian group with the R-infinity property.",
    "sapphire": "For sapphire manifolds the index 2 subgroup L is characteristic, which forces "
                "infinitely many twisted classes.",
    "spherical": "The fundamental group is finite, so every automorphism has at most |G| twisted classes.",
    "s2xr": "S2 x R groups: Z, Z2 x Z and Z lack the R-infinity property; D_infinity = Z2 * Z2 has it.",
    "s2xr_space": "The three fibre bundles over S1 admit fibre-preserving maps reflecting the base, "
                  "so the induced map has finite Reidemeister number.",
    "flat_theorem": "Flat groups (3), (4), (5), (7), (8), (9), (10) have the R-infinity property; "
                    "(1), (2), (6) admit automorphisms with finite Reidemeister number.",
    "flat_holonomy": "Equivalently the exceptions are the orientable flat manifolds with holonomy "
                     "1, Z2 or Z2 x Z2.",
    "nil_table": "A closed infranil-manifold has the R-infinity property iff it is not of type i or ii.",
    "sol_main": "Z^2 x|_A Z has the R-infinity property iff det A = -1, or A is not GL(2,Z)-conjugate "
                "to A^-1, or A is not conjugate to a symmetric matrix and no det -1 matrix X has X^p = +-A.",
    "addition_formula": "Addition formula for the characteristic fibre Z^2: R(phi) = R(S) + R(A*S) "
                        "when phi induces -id on the base.",
}


def _lattice_certificate(matrix: IntMatrix, description: str, factor: int = 1) -> Certificate:
    value = reidemeister_lattice(LatticeAut(matrix))
    if value is not INFINITE:
        value = factor * value
    return Certificate(kind="lattice_automorphism", description=description,
                       reidemeister_number=value, matrix=matrix)


def _s2xr_verdict(d: S2xR) -> Verdict:
    entry = s2xr_entry(d.manifold)
    certificate = None
    if d.manifold in (S2xRManifold.S2xS1, S2xRManifold.S2twistS1):
        certificate = _lattice_certificate(IntMatrix.of(-1), "x -> -x on Z")
    elif d.manifold is S2xRManifold.RP2xS1:
        certificate = _lattice_certificate(
            IntMatrix.of(-1), "identity on Z2 times x -> -x on Z (2 classes in Z2)", factor=2
        )
    return Verdict(
        descriptor=d, group_r_infinity=entry.group_r_infinity,
        manifold_r_infinity=entry.manifold_r_infinity, reason_code=ReasonCode.S2XR_TABLE,
        citations=(CITATIONS["s2xr"], CITATIONS["s2xr_space"]), certificate=certificate,
    )


def _flat_certificate(entry: FlatGroupEntry) -> Optional[Certificate]:
    if entry.verdict:
        return None
    if entry.index == 1:
        return _lattice_certificate(IntMatrix.diag(-1, -1, -1), "-I on Z^3")
    if entry.index == 6:
        report = verify_case6()
        return Certificate(
            kind="holonomy_lifts",
            description="phi' = (0 1 0; 0 0 -1; 1 0 0) and its three sign-matrix lifts, addition formula",
            reidemeister_number=report.total, matrix=report.phi_prime,
            terms=tuple(report.lift_values),
        )
    return Certificate(kind="citation", description=entry.method)


def _sol_verdict(d: SolTorusBundle) -> Verdict:
    sol = decide_sol_torus_bundle(d.matrix)
    certificate = None
    if sol.certificate is not None:
        c = sol.certificate
        certificate = Certificate(
            kind="sol_reverser",
            description=f"phi = (S, eps = {c.eps}) with S A S^-1 = A^-1",
            reidemeister_number=c.reidemeister_number, matrix=c.s, terms=(c.r_s, c.r_as),
        )
    citations = (CITATIONS["sol_main"],) + ((CITATIONS["addition_formula"],) if certificate else ())
    return Verdict(
        descriptor=d, group_r_infinity=sol.r_infinity, manifold_r_infinity=sol.r_infinity,
        reason_code=ReasonCode.SOL_TORUS_BUNDLE, citations=citations,
        certificate=certificate, clause=sol.clause, sol=sol,
    )


def _always(d: GeometryDescriptor, code: ReasonCode, *citations: str) -> Verdict:
    return Verdict(descriptor=d, group_r_infinity=True, manifold_r_infinity=True,
                   reason_code=code, citations=tuple(citations))


def decide(d: GeometryDescriptor) -> Verdict:
    """R-infinity verdict for the fundamental group of a geometric 3-manifold.

    Args:
        d: geometry descriptor

    Returns:
        Verdict at group and manifold level, with certificate and citations

    Raises:
        InvalidDescriptor: if d is not a descriptor
    """
    match d:
        case Hyperbolic(compact=compact):
            verdict = _always(d, ReasonCode.HYPERBOLIC_ALWAYS,
                              CITATIONS["hyperbolic_compact" if compact else "hyperbolic_cusped"])
        case H2xR():
            verdict = _always(d, ReasonCode.H2XR_ALWAYS, CITATIONS["h2xr"])
        case SLtilde():
            verdict = _always(d, ReasonCode.SLTILDE_ALWAYS, CITATIONS["sltilde"])
        case SolSapphire():
            verdict = _always(d, ReasonCode.SAPPHIRE_ALWAYS, CITATIONS["sapphire"])
        case Spherical():
            verdict = Verdict(descriptor=d, group_r_infinity=FINITE_GROUP, manifold_r_infinity=False,
                              reason_code=ReasonCode.FINITE_GROUP, citations=(CITATIONS["spherical"],))
        case S2xR():
            verdict = _s2xr_verdict(d)
        case Euclidean(index=index):
            entry = flat_entry(index)
            verdict = Verdict(
                descriptor=d, group_r_infinity=entry.verdict, manifold_r_infinity=entry.verdict,
                reason_code=ReasonCode.FLAT_TABLE,
                citations=(CITATIONS["flat_theorem"], CITATIONS["flat_holonomy"]),
                certificate=_flat_certificate(entry),
            )
        case Nil(family=family):
            entry = nil_entry(family)
            certificate = None
            if not entry.verdict:
                certificate = Certificate(
                    kind="citation",
                    description=f"type {entry.type}: the Reidemeister spectrum contains finite values",
                )
            verdict = Verdict(
                descriptor=d, group_r_infinity=entry.verdict, manifold_r_infinity=entry.verdict,
                reason_code=ReasonCode.NIL_TABLE, citations=(CITATIONS["nil_table"],),
                certificate=certificate,
            )
        case SolTorusBundle():
            verdict = _sol_verdict(d)
        case _:
            raise InvalidDescriptor(f"not a geometry descriptor: {d!r}")
    logger.info(f"decide {d}: group {verdict.group_r_infinity}, reason {verdict.reason_code.value}")
    return verdict


# --- summaries ---------------------------------------------------------------


GEOMETRY_RULES = (
    (Geometry.SPHERICAL, "finite group", False, False),
    (Geometry.S2XR, "table (four manifolds)", False, False),
    (Geometry.EUCLIDEAN, "table (ten flat groups)", True, False),
    (Geometry.NIL, "table (fifteen Seifert families)", True, False),
    (Geometry.SLTILDE, "always R-infinity", True, True),
    (Geometry.H2XR, "always R-infinity", True, True),
    (Geometry.SOL, "torus bundles: matrix decision; sapphires: always R-infinity", True, False),
    (Geometry.HYPERBOLIC, "always R-infinity", True, True),
)


def geometry_summary() -> List[Dict]:
    """One row per geometry: the deciding rule, asphericity, non-compact members."""
    return [
        {"geometry": g.value, "rule": rule, "aspherical": aspherical, "non_compact_possible": open_}
        for g, rule, aspherical, open_ in GEOMETRY_RULES
    ]


def exceptions() -> List[Dict]:
    """Every descriptor family whose group lacks the R-infinity property."""
    rows = [
        {"geometry": Geometry.S2XR.value, "family": e.manifold.value, "note": f"pi_1 = {e.group_name}"}
        for e in S2XR_TABLE.values() if not e.group_r_infinity
    ]
    rows += [
        {"geometry": Geometry.EUCLIDEAN.value, "family": str(e.index), "note": f"holonomy {e.holonomy.value}"}
        for e in FLAT_TABLE if not e.verdict
    ]
    rows += [
        {"geometry": Geometry.NIL.value, "family": e.family, "note": f"type {e.type}"}
        for e in NIL_TABLE if not e.verdict
    ]
    rows.append({
        "geometry": Geometry.SOL.value, "family": "torus bundle",
        "note": "det A = 1, A conjugate to A^-1, and A symmetric-conjugate or with a det -1 root",
    })
    return rows
