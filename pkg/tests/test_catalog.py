"""
Tests for the geometry catalog and the decide() dispatcher.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from rinfinity.catalog import (
    FINITE_GROUP,
    FLAT_TABLE,
    NIL_TABLE,
    Euclidean,
    H2xR,
    Holonomy,
    Hyperbolic,
    Nil,
    ReasonCode,
    S2xR,
    SLtilde,
    SolSapphire,
    SolTorusBundle,
    Spherical,
    decide,
    exceptions,
    flat_entry,
    geometry_summary,
    nil_entry,
    s2xr_entry,
)
from rinfinity.errors import InvalidDescriptor, OutOfRange
from rinfinity.exact_linear import IntMatrix
from rinfinity.glz_conjugacy import SolClause


@pytest.mark.parametrize("descriptor,code", [
    (Hyperbolic(), ReasonCode.HYPERBOLIC_ALWAYS),
    (Hyperbolic(compact=False), ReasonCode.HYPERBOLIC_ALWAYS),
    (H2xR(), ReasonCode.H2XR_ALWAYS),
    (SLtilde(), ReasonCode.SLTILDE_ALWAYS),
    (SolSapphire(), ReasonCode.SAPPHIRE_ALWAYS),
])
def test_always_r_infinity(descriptor, code):
    """Test the geometries whose groups always have R-infinity."""
    verdict = decide(descriptor)
    assert verdict.group_r_infinity is True
    assert verdict.manifold_r_infinity is True
    assert verdict.reason_code is code
    assert verdict.citations


def test_spherical_is_finite():
    """Test that spherical groups are reported as finite."""
    verdict = decide(Spherical())
    assert verdict.group_r_infinity == FINITE_GROUP
    assert verdict.manifold_r_infinity is False


@pytest.mark.parametrize("manifold,expected,certificate_value", [
    ("S2xS1", False, 2),
    ("S2twistS1", False, 2),
    ("RP2xS1", False, 4),
    ("RP3connRP3", True, None),
])
def test_s2xr(manifold, expected, certificate_value):
    """Test the four S2 x R verdicts and certificates."""
    verdict = decide(S2xR(manifold))
    assert verdict.group_r_infinity is expected
    assert verdict.manifold_r_infinity is expected
    if certificate_value is None:
        assert verdict.certificate is None
    else:
        assert verdict.certificate.reidemeister_number == certificate_value


def test_s2xr_rejects_unknown_manifold():
    """Test that an unknown S2 x R manifold is rejected."""
    with pytest.raises(InvalidDescriptor):
        S2xR("S3")


def test_flat_verdicts():
    """Test the ten flat group verdicts."""
    verdicts = [decide(Euclidean(i)).group_r_infinity for i in range(1, 11)]
    assert verdicts == [False, False, True, True, True, False, True, True, True, True]


def test_flat_exceptions_are_orientable_with_small_holonomy():
    """Test the orientable small-holonomy description of flat exceptions."""
    for entry in FLAT_TABLE:
        small = entry.holonomy in (Holonomy.TRIVIAL, Holonomy.Z2, Holonomy.Z2xZ2)
        assert entry.verdict is not (entry.orientable and small)


def test_flat_certificates():
    """Test the certificates of flat groups 1 and 6."""
    torus = decide(Euclidean(1)).certificate
    assert torus.reidemeister_number == 8
    assert torus.matrix == -IntMatrix.identity(3)
    hantzsche_wendt = decide(Euclidean(6)).certificate
    assert hantzsche_wendt.reidemeister_number == 8
    assert hantzsche_wendt.terms == (2, 2, 2, 2)
    assert decide(Euclidean(2)).certificate.kind == "citation"
    assert decide(Euclidean(3)).certificate is None


def test_flat_index_range():
    """Test that flat indices outside 1..10 are rejected."""
    assert flat_entry(4).planar_quotient == "G4"
    for bad in (0, 11, True):
        with pytest.raises(OutOfRange):
            flat_entry(bad)
    with pytest.raises(InvalidDescriptor):
        Euclidean(11)


def test_nil_table():
    """Test the fifteen Nil families and their verdicts."""
    assert len(NIL_TABLE) == 15
    for entry in NIL_TABLE:
        verdict = decide(Nil(entry.family, 1))
        assert verdict.group_r_infinity is (entry.type not in ("i", "ii"))
    assert decide(Nil("M2", 3)).group_r_infinity is False
    assert decide(Nil("M7", 2)).group_r_infinity is True


def test_nil_invariant_rendering():
    """Test Seifert invariant rendering with k substituted."""
    assert nil_entry("M1").render(3) == "{3,(o1,1);}"
    assert nil_entry("M2").render(1) == "{-1,(o1,0);(2,1),(2,1),(2,1),(2,1)}"
    assert nil_entry("M13").render(4) == "{3,(o1,0);(6,1),(3,1),(2,1)}"


@pytest.mark.parametrize("family,k", [("M16", 1), ("M1", 0), ("M1", -2), ("M3", True)])
def test_nil_rejects_bad_parameters(family, k):
    """Test rejection of bad Nil family names and k."""
    with pytest.raises(InvalidDescriptor):
        Nil(family, k)


def test_sol_torus_bundle_verdicts():
    """Test Sol torus bundle verdicts through decide."""
    det_minus = decide(SolTorusBundle(IntMatrix.of(1, 1, 2, 1)))
    assert det_minus.group_r_infinity is True
    assert det_minus.clause is SolClause.DET_MINUS_ONE
    symmetric = decide(SolTorusBundle(IntMatrix.of(2, 1, 1, 1)))
    assert symmetric.group_r_infinity is False
    assert symmetric.certificate.reidemeister_number == 4
    assert symmetric.certificate.terms == (2, 2)


def test_sol_requires_anosov_matrix():
    """Test that Sol descriptors need an Anosov matrix."""
    with pytest.raises(InvalidDescriptor):
        SolTorusBundle(IntMatrix.of(1, 1, 0, 1))
    with pytest.raises(InvalidDescriptor):
        SolSapphire(IntMatrix.identity(2))


def test_decide_rejects_non_descriptors():
    """Test that decide rejects non-descriptors."""
    with pytest.raises(InvalidDescriptor):
        decide("hyperbolic")


def test_summary_and_exceptions():
    """Test the geometry summary and the exception list."""
    rows = geometry_summary()
    assert [r["geometry"] for r in rows] == [
        "spherical", "s2xr", "euclidean", "nil", "sltilde", "h2xr", "sol", "hyperbolic",
    ]
    families = {(r["geometry"], r["family"]) for r in exceptions()}
    assert ("euclidean", "6") in families
    assert ("nil", "M2") in families
    assert ("s2xr", "RP3connRP3") not in families


def test_s2xr_entry_lookup():
    """Test S2 x R table lookup by name."""
    entry = s2xr_entry("RP2xS1")
    assert entry.group_name == "Z2xZ"
    assert not entry.group_r_infinity
    assert s2xr_entry("RP3connRP3").manifold_r_infinity
    with pytest.raises(InvalidDescriptor):
        s2xr_entry("S3")
