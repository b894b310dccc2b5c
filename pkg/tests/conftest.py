"""Shared fixtures: the spin-1 worked instance and randomized-input helpers."""

from __future__ import annotations

import numpy as np
import pytest

from toposq import (
    Context,
    ContextPoset,
    HermitianOperator,
    Projection,
    build_poset,
    context_from_atoms,
)

SQ2 = 1.0 / np.sqrt(2.0)


@pytest.fixture(scope="session")
def sz() -> HermitianOperator:
    """z-spin operator for spin 1: eigenvalues -1/sqrt(2), 0, 1/sqrt(2)."""
    return HermitianOperator(np.diag([SQ2, 0.0, -SQ2]))


@pytest.fixture(scope="session")
def basis_projs() -> tuple[Projection, Projection, Projection]:
    p1 = Projection(np.diag([1.0, 0.0, 0.0]))
    p2 = Projection(np.diag([0.0, 1.0, 0.0]))
    p3 = Projection(np.diag([0.0, 0.0, 1.0]))
    return p1, p2, p3


@pytest.fixture(scope="session")
def eigen_context(basis_projs) -> Context:
    return context_from_atoms(list(basis_projs))


@pytest.fixture(scope="session")
def spin_poset(eigen_context) -> ContextPoset:
    """Coarsening closure of the maximal diagonal context: 4 contexts."""
    return build_poset([eigen_context], close_coarsening=True)


def rng_for(*key: int) -> np.random.Generator:
    """Deterministic per-test generator; key entries keep streams disjoint."""
    return np.random.default_rng(list(key))


def atom_index(context: Context, p: Projection) -> int:
    """Index of the context atom equal to the given projection."""
    for i, atom in enumerate(context.atoms):
        if atom.isclose(p, 1e-9):
            return i
    raise AssertionError("no atom matches the given projection")
