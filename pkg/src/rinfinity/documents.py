"""
Input and report documents, and the static tables as DataFrames.

Handles:
- Parsing JSON input documents into geometry descriptors
- Building report dictionaries with a fixed key order
- Rendering the same dictionaries as JSON or as indented text
- Table frames (flat, Nil, S2 x R, geometry summary) and CSV export
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from .catalog import (
    FLAT_TABLE,
    NIL_TABLE,
    S2XR_TABLE,
    Certificate,
    Euclidean,
    GeometryDescriptor,
    H2xR,
    Hyperbolic,
    Nil,
    S2xR,
    SLtilde,
    SolSapphire,
    SolTorusBundle,
    Spherical,
    Verdict,
    exceptions,
    geometry_of,
    geometry_summary,
    nil_entry,
)
from .errors import InvalidDescriptor, MalformedInput
from .exact_linear import INFINITE, Count, IntMatrix, format_matrix, matrix_from_nested
from .glz_conjugacy import ReverserReport, RootReport

logger = logging.getLogger(__name__)

# Allowed keys per geometry discriminator
INPUT_SCHEMA = {
    "spherical": set(),
    "s2xr": {"manifold"},
    "euclidean": {"index"},
    "nil": {"family", "k"},
    "sltilde": set(),
    "h2xr": set(),
    "sol": {"kind", "matrix"},
    "hyperbolic": {"compact"},
}


def _require(doc: Dict, key: str) -> Any:
    if key not in doc:
        raise MalformedInput(f"input document for {doc.get('geometry')!r} needs {key!r}")
    return doc[key]


def descriptor_from_document(doc: Any) -> GeometryDescriptor:
    """Build a descriptor from a parsed input document.

    Raises:
        MalformedInput: on schema violations
        InvalidDescriptor: when the parameters violate descriptor invariants
    """
    if not isinstance(doc, dict) or "geometry" not in doc:
        raise MalformedInput("input document must be an object with a 'geometry' field")
    geometry = doc["geometry"]
    if geometry not in INPUT_SCHEMA:
        raise MalformedInput(f"unknown geometry {geometry!r}; expected one of {sorted(INPUT_SCHEMA)}")
    extra = set(doc) - INPUT_SCHEMA[geometry] - {"geometry"}
    if extra:
        raise MalformedInput(f"unexpected fields for {geometry!r}: {sorted(extra)}")

    if geometry == "spherical":
        return Spherical()
    if geometry == "s2xr":
        return S2xR(_require(doc, "manifold"))
    if geometry == "euclidean":
        return Euclidean(_require(doc, "index"))
    if geometry == "nil":
        return Nil(_require(doc, "family"), _require(doc, "k"))
    if geometry == "sltilde":
        return SLtilde()
    if geometry == "h2xr":
        return H2xR()
    if geometry == "hyperbolic":
        compact = doc.get("compact", True)
        if not isinstance(compact, bool):
            raise MalformedInput(f"'compact' must be a boolean, got {compact!r}")
        return Hyperbolic(compact)

    kind = doc.get("kind", "torus_bundle")
    matrix = matrix_from_nested(doc["matrix"]) if "matrix" in doc else None
    if matrix is not None and matrix.size != 2:
        raise InvalidDescriptor(f"Sol matrices are 2x2, got {matrix}")
    if kind == "torus_bundle":
        if matrix is None:
            raise MalformedInput("a Sol torus bundle needs 'matrix'")
        return SolTorusBundle(matrix)
    if kind == "sapphire":
        return SolSapphire(matrix)
    raise MalformedInput(f"unknown Sol kind {kind!r}; expected 'torus_bundle' or 'sapphire'")


def load_input(text: str) -> GeometryDescriptor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"input is not valid JSON: {e.msg} at line {e.lineno}") from e
    return descriptor_from_document(doc)


# --- report documents ----------------------------------------------------------


def count_value(value: Optional[Count]) -> Union[int, str, None]:
    """Integers stay integers; INFINITE becomes "infinite"."""
    if value is None:
        return None
    return "infinite" if value is INFINITE else int(value)


def matrix_value(m: Optional[IntMatrix]) -> Optional[List[List[str]]]:
    return None if m is None else format_matrix(m)


def descriptor_document(d: GeometryDescriptor) -> Dict:
    doc: Dict[str, Any] = {"geometry": geometry_of(d).value}
    match d:
        case S2xR(manifold=manifold):
            doc["manifold"] = manifold.value
        case Euclidean(index=index):
            doc["index"] = index
        case Nil(family=family, k=k):
            entry = nil_entry(family)
            doc.update({
                "family": family, "k": k, "type": entry.type,
                "seifert_invariant": entry.render(k), "holonomy": entry.holonomy.value,
            })
        case SolTorusBundle(matrix=matrix):
            doc.update({"kind": "torus_bundle", "matrix": format_matrix(matrix)})
        case SolSapphire(matrix=matrix):
            doc.update({"kind": "sapphire", "matrix": matrix_value(matrix)})
        case Hyperbolic(compact=compact):
            doc["compact"] = compact
    return doc


def certificate_document(c: Optional[Certificate]) -> Optional[Dict]:
    if c is None:
        return None
    return {
        "kind": c.kind,
        "description": c.description,
        "automorphism": matrix_value(c.matrix),
        "terms": [count_value(t) for t in c.terms],
        "reidemeister_number": count_value(c.reidemeister_number),
    }


def reverser_document(r: Optional[ReverserReport]) -> Optional[Dict]:
    if r is None:
        return None
    return {
        "exists": r.exists,
        "witness": matrix_value(r.witness),
        "det": r.det,
        "symmetric_conjugate": r.symmetric_conjugate,
    }


def root_document(r: Optional[RootReport]) -> Optional[Dict]:
    if r is None:
        return None
    return {"exists": r.exists, "root": matrix_value(r.root), "exponent": r.exponent, "sign": r.sign}


def verdict_document(v: Verdict) -> Dict:
    """Report for decide/sol with a fixed key order."""
    doc = {
        "descriptor": descriptor_document(v.descriptor),
        "group_r_infinity": v.group_r_infinity,
        "manifold_r_infinity": v.manifold_r_infinity,
        "reason_code": v.reason_code.value,
        "clause": v.clause.value if v.clause is not None else None,
        "certificate": certificate_document(v.certificate),
        "citations": list(v.citations),
    }
    if v.sol is not None:
        doc["reverser"] = reverser_document(v.sol.reverser)
        doc["det_minus_one_root"] = root_document(v.sol.root)
    return doc


def to_json(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _scalar_text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list) and value and all(isinstance(row, list) for row in value):
        return "(" + "; ".join(" ".join(str(x) for x in row) for row in value) + ")"
    return str(value)


def to_text(doc: Any, indent: int = 0) -> str:
    """Indented "key: value" rendering of a report dictionary."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key, value in doc.items():
            if isinstance(value, dict):
                lines.append(f"{pad}{key}:")
                lines.append(to_text(value, indent + 1).rstrip("\n"))
            elif isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
                lines.append(f"{pad}{key}:")
                for item in value:
                    lines.append(to_text(item, indent + 1).rstrip("\n"))
                    lines.append("")
            elif isinstance(value, list) and value and not isinstance(value[0], list):
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  - {_scalar_text(x)}" for x in value)
            else:
                lines.append(f"{pad}{key}: {_scalar_text(value)}")
    else:
        lines.append(f"{pad}{_scalar_text(doc)}")
    return "\n".join(line for line in lines if line is not None) + "\n"


# --- table frames --------------------------------------------------------------


def flat_frame() -> pd.DataFrame:
    return pd.DataFrame([
        {
            "index": e.index,
            "presentation": e.presentation,
            "holonomy": e.holonomy.value,
            "center": e.center,
            "orientable": e.orientable,
            "planar_quotient": e.planar_quotient,
            "fibration": e.fibration,
            "r_infinity": e.verdict,
            "method": e.method,
        }
        for e in FLAT_TABLE
    ])


def nil_frame(k: Optional[int] = None) -> pd.DataFrame:
    """Nil families; with k given the Seifert invariants are rendered for that k."""
    return pd.DataFrame([
        {
            "family": e.family,
            "type": e.type,
            "seifert_invariant": e.render(k) if k is not None else e.invariant,
            "holonomy": e.holonomy.value,
            "r_infinity": e.verdict,
        }
        for e in NIL_TABLE
    ])


def s2xr_frame() -> pd.DataFrame:
    return pd.DataFrame([
        {
            "manifold": e.manifold.value,
            "fundamental_group": e.group_name,
            "group_r_infinity": e.group_r_infinity,
            "manifold_r_infinity": e.manifold_r_infinity,
        }
        for e in S2XR_TABLE.values()
    ])


def summary_frame() -> pd.DataFrame:
    return pd.DataFrame(geometry_summary())


def exceptions_frame() -> pd.DataFrame:
    return pd.DataFrame(exceptions())


TABLES = {
    "flat": flat_frame,
    "nil": nil_frame,
    "s2xr": s2xr_frame,
    "summary": summary_frame,
    "exceptions": exceptions_frame,
}


def table_frame(name: str) -> pd.DataFrame:
    if name not in TABLES:
        raise MalformedInput(f"unknown table {name!r}; expected one of {sorted(TABLES)}")
    return TABLES[name]()


def frame_records(df: pd.DataFrame) -> List[Dict]:
    """JSON-safe records: numpy scalars and NaN converted to plain values."""
    return json.loads(df.to_json(orient="records"))


def write_csv(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Export a table frame to CSV.

    Args:
        df: table frame
        path: output file; parent directories are created

    Returns:
        Path to written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path
