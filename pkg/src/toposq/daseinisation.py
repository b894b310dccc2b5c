"""Daseinisation of projections: outer and inner approximation to contexts.

The outer approximation of P at a context V is the smallest projection of V
above P; over an atomic partition it is the sum of the atoms that are not
orthogonal to P. The inner approximation is the largest projection of V below
P: the sum of the atoms dominated by P. Collecting the outer approximations
over a whole poset of contexts (as point sets) yields a clopen subobject of
the spectral presheaf.
"""

from __future__ import annotations

from .config import resolve_tolerance
from .contexts import Context, ContextPoset
from .errors import DimensionMismatchError
from .linalg import Projection, operator_norm, proj_leq
from .presheaf import ClopenSubobject

__all__ = [
    "outer_projection",
    "inner_projection",
    "outer_component_indices",
    "daseinise_projection",
]


def _require_dim(p: Projection, v: Context) -> None:
    if p.dim != v.dim:
        raise DimensionMismatchError(f"dimensions differ: {p.dim} vs {v.dim}")


def outer_component_indices(
    p: Projection, v: Context, tol: float | None = None
) -> tuple[int, ...]:
    """Indices of the atoms of v not orthogonal to p."""
    tol = resolve_tolerance(tol)
    _require_dim(p, v)
    return tuple(
        i for i, atom in enumerate(v.atoms) if operator_norm(atom.matrix @ p.matrix) > tol
    )


def outer_projection(p: Projection, v: Context, tol: float | None = None) -> Projection:
    """Smallest projection of v above p (sum of the atoms overlapping p)."""
    return v.sum_of_atoms(outer_component_indices(p, v, tol), tol)


def inner_projection(p: Projection, v: Context, tol: float | None = None) -> Projection:
    """Largest projection of v below p (sum of the atoms dominated by p)."""
    tol = resolve_tolerance(tol)
    _require_dim(p, v)
    indices = [i for i, atom in enumerate(v.atoms) if proj_leq(atom, p, tol)]
    return v.sum_of_atoms(indices, tol)


def daseinise_projection(
    p: Projection, poset: ContextPoset, tol: float | None = None
) -> ClopenSubobject:
    """The clopen subobject collecting the outer approximations of p.

    The component at each context is the point set of the outer approximation
    under the lattice isomorphism with the context's projections. The result
    is restriction-closed by construction; the subobject validator re-checks.
    """
    tol = resolve_tolerance(tol)
    components = {
        v.id: outer_component_indices(p, v, tol) for v in poset
    }
    return ClopenSubobject(poset, components)
