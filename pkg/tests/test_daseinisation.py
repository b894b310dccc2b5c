"""Outer/inner approximation of projections and the daseinised subobject.

The closed-form atom test is checked against a brute-force oracle that scans
all 2^k sums of atoms for the smallest dominating / largest dominated member
of the context's lattice.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from conftest import SQ2, atom_index, rng_for
from toposq import (
    ClopenSubobject,
    Projection,
    build_poset,
    context_from_atoms,
    daseinise_projection,
    inner_projection,
    outer_projection,
    proj_join,
    proj_leq,
    proj_meet,
)
from toposq.sampling import (
    random_maximal_context,
    random_poset,
    random_projection,
)


# ---------------------------------------------------------------- oracles


def outer_oracle(p: Projection, v) -> Projection:
    """Smallest lattice member above p, by scanning all sums of atoms."""
    best = None
    for r in range(v.n_atoms + 1):
        for idx in combinations(range(v.n_atoms), r):
            q = v.sum_of_atoms(idx)
            if proj_leq(p, q) and (best is None or q.rank < best.rank):
                best = q
    assert best is not None  # the identity always qualifies
    return best


def inner_oracle(p: Projection, v) -> Projection:
    """Largest lattice member below p."""
    best = Projection.zero(v.dim)
    for r in range(1, v.n_atoms + 1):
        for idx in combinations(range(v.n_atoms), r):
            q = v.sum_of_atoms(idx)
            if proj_leq(q, p) and q.rank > best.rank:
                best = q
    return best


def rotated_pair(theta: float):
    c, s = np.cos(theta), np.sin(theta)
    q1 = Projection.onto(np.array([c, 0.0, s]))
    q3 = Projection.onto(np.array([-s, 0.0, c]))
    return q1, q3


# ----------------------------------------------------- worked §-free cases


def test_outer_in_own_context(eigen_context, basis_projs):
    _, p2, _ = basis_projs
    assert outer_projection(p2, eigen_context).isclose(p2)


def test_outer_in_rank1_coarsenings(basis_projs):
    p1, p2, p3 = basis_projs
    v_p1 = context_from_atoms([p1, p1.complement()])
    v_p3 = context_from_atoms([p3, p3.complement()])
    # Smallest member above p2: the complement atom in both cases.
    assert outer_projection(p2, v_p1).isclose(p1.complement())
    assert outer_projection(p2, v_p3).isclose(p3.complement())


def test_outer_shared_maximal_context(basis_projs):
    _, p2, _ = basis_projs
    q1, q3 = rotated_pair(0.7)
    shared = context_from_atoms([q1, p2, q3])
    assert outer_projection(p2, shared).isclose(p2)


def test_outer_dominating_rank2(basis_projs):
    _, p2, _ = basis_projs
    q1, q3 = rotated_pair(0.7)
    rank2 = Projection(p2.matrix + q1.matrix)
    v = context_from_atoms([rank2, q3])
    assert outer_projection(p2, v).isclose(rank2)


def test_outer_generic_context_is_identity(basis_projs):
    _, p2, _ = basis_projs
    w = random_maximal_context(3, rng_for(51))
    assert outer_projection(p2, w).isclose(Projection.identity(3))


def test_inner_member_and_generic(eigen_context, basis_projs):
    p1, p2, _ = basis_projs
    p23 = p1.complement()
    assert inner_projection(p23, eigen_context).isclose(p23)
    w = random_maximal_context(3, rng_for(52))
    assert inner_projection(p2, w).rank == 0


def test_duality_inner_outer():
    rng = rng_for(53)
    for _ in range(30):
        v = random_maximal_context(3, rng)
        p = random_projection(3, rng)
        lhs = inner_projection(p.complement(), v)
        rhs = outer_projection(p, v).complement()
        assert lhs.isclose(rhs)


# -------------------------------------------------------- oracle agreement


def test_outer_inner_match_brute_force():
    rng = rng_for(54)
    for dim in (2, 3, 4):
        for _ in range(20):
            v = random_maximal_context(dim, rng)
            p = random_projection(dim, rng)
            assert outer_projection(p, v).isclose(outer_oracle(p, v), 1e-8)
            assert inner_projection(p, v).isclose(inner_oracle(p, v), 1e-8)


def test_outer_inner_match_brute_force_structured(basis_projs):
    # Structured instances where intermediate ranks actually occur.
    p1, p2, p3 = basis_projs
    q1, q3 = rotated_pair(1.1)
    contexts = [
        context_from_atoms([p1, p2, p3]),
        context_from_atoms([q1, p2, q3]),
        context_from_atoms([p2, p2.complement()]),
        context_from_atoms([Projection(p2.matrix + q1.matrix), q3]),
    ]
    probes = [
        p2,
        Projection(p1.matrix + p2.matrix),
        Projection.onto(np.array([1.0, 1.0, 0.0]) / np.sqrt(2)),
        Projection.zero(3),
        Projection.identity(3),
    ]
    for v in contexts:
        for p in probes:
            assert outer_projection(p, v).isclose(outer_oracle(p, v))
            assert inner_projection(p, v).isclose(inner_oracle(p, v))


# ------------------------------------------------------------- properties


def test_order_preservation():
    rng = rng_for(55)
    for _ in range(25):
        v = random_maximal_context(3, rng)
        q = random_projection(3, rng, rank=2)
        # A rank-1 projection inside range(q).
        w, vecs = np.linalg.eigh(q.matrix)
        basis = vecs[:, w > 0.5]
        mix = basis @ rng.standard_normal(2)
        p = Projection.onto(mix)
        assert proj_leq(p, q)
        assert proj_leq(outer_projection(p, v), outer_projection(q, v))
        assert proj_leq(inner_projection(p, v), inner_projection(q, v))


def test_monotone_under_coarse_graining(basis_projs):
    rng = rng_for(56)
    for _ in range(10):
        poset = random_poset(3, rng, n_seeds=1, close_coarsening=True)
        p = random_projection(3, rng)
        for sub_id, sup_id in poset.strict_pairs():
            outer_sup = outer_projection(p, poset.get(sup_id))
            outer_sub = outer_projection(p, poset.get(sub_id))
            assert proj_leq(outer_sup, outer_sub)
            inner_sup = inner_projection(p, poset.get(sup_id))
            inner_sub = inner_projection(p, poset.get(sub_id))
            assert proj_leq(inner_sub, inner_sup)


def test_bottom_top_preserved(spin_poset):
    assert daseinise_projection(Projection.zero(3), spin_poset).is_bottom()
    assert daseinise_projection(Projection.identity(3), spin_poset).is_top()


def test_join_preserved_meet_subpreserved(spin_poset):
    rng = rng_for(57)
    strict = 0
    for _ in range(20):
        p = random_projection(3, rng)
        q = random_projection(3, rng)
        dp = daseinise_projection(p, spin_poset)
        dq = daseinise_projection(q, spin_poset)
        djoin = daseinise_projection(proj_join(p, q), spin_poset)
        assert djoin == (dp | dq)
        dmeet = daseinise_projection(proj_meet(p, q), spin_poset)
        assert dmeet.leq(dp & dq)
        if dmeet != (dp & dq):
            strict += 1
    assert strict > 0


def test_injectivity_with_containing_contexts():
    rng = rng_for(58)
    for _ in range(15):
        p = random_projection(3, rng)
        q = random_projection(3, rng)
        if p.isclose(q):
            continue
        seeds = [
            context_from_atoms([p, p.complement()]),
            context_from_atoms([q, q.complement()]),
        ]
        poset = build_poset(seeds)
        assert daseinise_projection(p, poset) != daseinise_projection(q, poset)


# --------------------------------------------------------- the subobject


def test_daseinise_components_on_spin_poset(spin_poset, eigen_context, basis_projs):
    p1, p2, p3 = basis_projs
    sub = daseinise_projection(p2, spin_poset)
    ClopenSubobject(spin_poset, sub.to_doc())  # re-validates closure
    i2 = atom_index(eigen_context, p2)
    assert sub.component(eigen_context) == frozenset({i2})
    # Every coarsening gets the singleton of the atom dominating p2: the own
    # 2-atom context contributes its p2 atom, the other two their co-atoms.
    for ctx in spin_poset:
        if ctx == eigen_context:
            continue
        comp = sub.component(ctx)
        assert len(comp) == 1
        (j,) = comp
        assert proj_leq(p2, ctx.atom(j))


def test_daseinise_random_passes_validator():
    rng = rng_for(59)
    for _ in range(10):
        poset = random_poset(
            3, rng, n_seeds=2, close_coarsening=True, close_intersection=True
        )
        p = random_projection(3, rng)
        sub = daseinise_projection(p, poset)
        ClopenSubobject(poset, sub.to_doc())
        assert not sub.is_bottom()  # outer approximation never vanishes
