"""JSON document formats and machine-readable serializations.

Documents:
  matrix  {"dim": n, "entries": n x n array of [re, im] pairs}
  vector  {"dim": n, "amplitudes": n array of [re, im] pairs}
  context {"atoms": [matrix, matrix, ...]}

Vector loaders reject matrix-shaped documents explicitly: density matrices
(mixed states) are out of scope and the error says so.

All emitted numbers are rounded to 12 significant digits, which the package
treats as exact for round-tripping (comparisons happen at tolerance 1e-9).
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .contexts import Context, ContextPoset
from .errors import ParseError, UnsupportedFeatureError
from .linalg import HermitianOperator, Projection
from .operators import OperatorArrow
from .presheaf import ClopenSubobject
from .states import ContainmentReport, UnitVector, ValueSubobject

__all__ = [
    "round12",
    "load_document",
    "matrix_to_doc",
    "matrix_from_doc",
    "projection_from_doc",
    "vector_to_doc",
    "vector_from_doc",
    "context_to_doc",
    "context_from_doc",
    "poset_to_doc",
    "subobject_to_doc",
    "arrow_to_doc",
    "value_to_doc",
    "report_to_doc",
    "load_matrix",
    "load_projection",
    "load_vector",
    "load_context",
]


def round12(x: float) -> float:
    """Round to 12 significant digits (the package's emission precision)."""
    return float(f"{float(x):.12g}")


def load_document(path: str) -> Any:
    """Parse a JSON file, turning syntax errors into ParseError with location."""
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _pair_to_complex(pair, where: str) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(x, (int, float)) for x in pair)
    ):
        raise ParseError(f"{where}: expected a [re, im] number pair, got {pair!r}")
    return complex(pair[0], pair[1])


def matrix_from_doc(doc: Any, tol: float | None = None) -> HermitianOperator:
    """Read a matrix document into a self-adjoint operator."""
    if not isinstance(doc, dict):
        raise ParseError(f"matrix document must be an object, got {type(doc).__name__}")
    if "amplitudes" in doc and "entries" not in doc:
        raise ParseError("found a vector document where a matrix was expected")
    try:
        dim = int(doc["dim"])
        rows = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matrix document needs integer 'dim' and 'entries': {exc}") from exc
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"'entries' must be a list of {dim} rows")
    matrix = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"row {i} must be a list of {dim} [re, im] pairs")
        for j, pair in enumerate(row):
            matrix[i, j] = _pair_to_complex(pair, f"entry ({i}, {j})")
    return HermitianOperator(matrix, tol)


def projection_from_doc(doc: Any, tol: float | None = None) -> Projection:
    op = matrix_from_doc(doc, tol)
    return Projection(op.matrix, tol)


def matrix_to_doc(a: HermitianOperator) -> dict:
    return {
        "dim": a.dim,
        "entries": [
            [[round12(z.real), round12(z.imag)] for z in row] for row in a.matrix
        ],
    }


def vector_from_doc(doc: Any, tol: float | None = None) -> UnitVector:
    """Read a vector document into a unit vector.

    A matrix document here means the caller supplied a density matrix; that is
    an unsupported feature, not a parse error, and the message says so.
    """
    if not isinstance(doc, dict):
        raise ParseError(f"vector document must be an object, got {type(doc).__name__}")
    if "entries" in doc:
        raise UnsupportedFeatureError(
            "density matrices (mixed states) are not supported; "
            "provide a unit vector document with 'amplitudes'"
        )
    try:
        dim = int(doc["dim"])
        amps = doc["amplitudes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"vector document needs integer 'dim' and 'amplitudes': {exc}") from exc
    if not isinstance(amps, list) or len(amps) != dim:
        raise ParseError(f"'amplitudes' must be a list of {dim} [re, im] pairs")
    vec = np.empty(dim, dtype=np.complex128)
    for i, pair in enumerate(amps):
        vec[i] = _pair_to_complex(pair, f"amplitude {i}")
    return UnitVector(vec, tol)


def vector_to_doc(psi: UnitVector) -> dict:
    return {
        "dim": psi.dim,
        "amplitudes": [[round12(z.real), round12(z.imag)] for z in psi.amplitudes],
    }


def context_from_doc(doc: Any, tol: float | None = None) -> Context:
    if not isinstance(doc, dict) or "atoms" not in doc:
        raise ParseError("context document must be an object with an 'atoms' list")
    atoms_doc = doc["atoms"]
    if not isinstance(atoms_doc, list):
        raise ParseError("'atoms' must be a list of matrix documents")
    atoms = [projection_from_doc(item, tol) for item in atoms_doc]
    return Context(atoms, tol)


def context_to_doc(v: Context) -> dict:
    return {"id": v.id, "atoms": [matrix_to_doc(a) for a in v.atoms]}


def poset_to_doc(poset: ContextPoset) -> dict:
    """Contexts (with full atom matrices, so the output round-trips) plus the
    strict inclusion pairs."""
    return {
        "contexts": [context_to_doc(v) for v in poset],
        "order": [[sub, sup] for sub, sup in poset.strict_pairs()],
    }


def subobject_to_doc(s: ClopenSubobject) -> dict:
    return {"components": s.to_doc()}


def arrow_to_doc(arrow: OperatorArrow) -> dict:
    """context id -> point index -> {mu, nu} with 12 significant digits."""
    out: dict[str, dict[str, dict]] = {}
    for v in arrow.poset:
        per_point = {}
        for index in range(v.n_atoms):
            pair = arrow.pair(v.id, index)
            per_point[str(index)] = {
                "mu": {cid: round12(lo) for cid, lo, _ in pair.intervals()},
                "nu": {cid: round12(hi) for cid, _, hi in pair.intervals()},
            }
        out[v.id] = per_point
    return {"arrow": out}


def value_to_doc(val: ValueSubobject) -> dict:
    out: dict[str, list] = {}
    for v in val.poset:
        out[v.id] = [
            {
                "mu": {cid: round12(lo) for cid, lo, _ in pair.intervals()},
                "nu": {cid: round12(hi) for cid, _, hi in pair.intervals()},
            }
            for pair in val.component(v.id)
        ]
    return {"value": out}


def report_to_doc(report: ContainmentReport) -> dict:
    return {
        "expectation": round12(report.expectation),
        "ok": report.ok,
        "rows": [
            {
                "context": row.context_id,
                "point": row.point_index,
                "intervals": {
                    cid: [round12(lo), round12(hi)] for cid, lo, hi in row.intervals
                },
                "violations": list(row.violations),
            }
            for row in report.rows
        ],
    }


def load_matrix(path: str, tol: float | None = None) -> HermitianOperator:
    return matrix_from_doc(load_document(path), tol)


def load_projection(path: str, tol: float | None = None) -> Projection:
    return projection_from_doc(load_document(path), tol)


def load_vector(path: str, tol: float | None = None) -> UnitVector:
    return vector_from_doc(load_document(path), tol)


def load_context(path: str, tol: float | None = None) -> Context:
    return context_from_doc(load_document(path), tol)
