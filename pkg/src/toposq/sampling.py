"""Seeded random generators for operators, projections, contexts and posets.

Everything takes a numpy Generator, so a fixed seed reproduces identical
objects (and identical canonical ids) across runs.
"""

from __future__ import annotations

import numpy as np

from .contexts import Context, ContextPoset, build_poset
from .linalg import HermitianOperator, Projection
from .states import UnitVector

__all__ = [
    "haar_unitary",
    "random_hermitian",
    "random_unit_vector",
    "random_projection",
    "random_context",
    "random_maximal_context",
    "random_poset",
]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(ginibre)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianOperator:
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * (raw + raw.conj().T) / 2.0)


def random_unit_vector(dim: int, rng: np.random.Generator) -> UnitVector:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return UnitVector(vec / np.linalg.norm(vec))


def random_projection(dim: int, rng: np.random.Generator, rank: int | None = None) -> Projection:
    """Haar-random projection of the given rank (default: uniform in 1..dim-1)."""
    if rank is None:
        rank = int(rng.integers(1, dim))
    basis = haar_unitary(dim, rng)[:, :rank]
    return Projection(basis @ basis.conj().T)


def random_maximal_context(dim: int, rng: np.random.Generator) -> Context:
    unitary = haar_unitary(dim, rng)
    atoms = [Projection.onto(unitary[:, i]) for i in range(dim)]
    return Context(atoms)


def random_context(
    dim: int, rng: np.random.Generator, n_atoms: int | None = None
) -> Context:
    """Random context with the requested atom count (default: uniform 2..dim).

    Columns of a Haar unitary are split into consecutive blocks with random
    cut points; each block spans one atom.
    """
    if n_atoms is None:
        n_atoms = int(rng.integers(2, dim + 1))
    if not 2 <= n_atoms <= dim:
        raise ValueError(f"need 2 <= n_atoms <= dim, got {n_atoms} and {dim}")
    unitary = haar_unitary(dim, rng)
    cuts = sorted(rng.choice(np.arange(1, dim), size=n_atoms - 1, replace=False).tolist())
    bounds = [0, *cuts, dim]
    atoms = [
        Projection.onto(unitary[:, lo:hi]) for lo, hi in zip(bounds, bounds[1:])
    ]
    return Context(atoms)


def random_poset(
    dim: int,
    rng: np.random.Generator,
    n_seeds: int = 2,
    close_coarsening: bool = True,
    close_intersection: bool = False,
    tol: float | None = None,
) -> ContextPoset:
    seeds = [random_context(dim, rng) for _ in range(n_seeds)]
    return build_poset(
        seeds,
        close_coarsening=close_coarsening,
        close_intersection=close_intersection,
        tol=tol,
    )
