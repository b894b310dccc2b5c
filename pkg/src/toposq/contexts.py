"""Contexts (atomic partitions of the identity) and their inclusion poset.

A context is the abelian algebra generated by k >= 2 pairwise orthogonal
projections that sum to the identity; we represent it by that atomic
partition. Context V' is included in V when every atom of V' is a sum of atoms
of V. The trivial algebra (k = 1) is excluded throughout.

Contexts carry a canonical id derived from their atoms rounded to six
decimals, so ids are stable under atom reordering, tiny numerical jitter and
process restarts.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import resolve_tolerance
from .errors import (
    DimensionMismatchError,
    InternalInvariantViolation,
    MixedDimensionsError,
    NotAPartitionError,
    ScalarOperatorError,
    TrivialIntersectionError,
)
from .linalg import (
    HermitianOperator,
    Projection,
    eigenstructure,
    operator_norm,
    proj_leq,
    sum_of_projections,
)

__all__ = [
    "Context",
    "ContextPoset",
    "context_from_operator",
    "context_from_atoms",
    "includes",
    "coarsenings",
    "intersect",
    "build_poset",
    "dominating_atom_index",
]

_ID_DECIMALS = 6


def _atom_sort_key(p: Projection) -> bytes:
    # Rounding kills jitter below ~1e-7; adding complex zero maps -0.0 to +0.0
    # in both components so the byte encoding is unique.
    rounded = np.round(p.matrix, _ID_DECIMALS) + (0.0 + 0.0j)
    return rounded.tobytes()


class Context:
    """An abelian context given by its atomic partition of the identity.

    Atoms are stored in a canonical order (lexicographic in their rounded
    entries), so atom indices and the derived id do not depend on the order in
    which atoms were supplied. Equality and hashing go through the id.
    """

    __slots__ = ("_atoms", "_id")

    def __init__(self, atoms: Sequence[Projection], tol: float | None = None):
        tol = resolve_tolerance(tol)
        atoms = tuple(atoms)
        if len(atoms) < 2:
            raise NotAPartitionError(
                f"a context needs at least two atoms, got {len(atoms)} "
                "(the trivial algebra is excluded)"
            )
        dim = atoms[0].dim
        for atom in atoms:
            if not isinstance(atom, Projection):
                raise NotAPartitionError("atoms must be Projection instances")
            if atom.dim != dim:
                raise DimensionMismatchError("atoms have mixed dimensions")
            if operator_norm(atom.matrix) <= tol:
                raise NotAPartitionError("zero atom in partition")
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                overlap = operator_norm(atoms[i].matrix @ atoms[j].matrix)
                if overlap > tol:
                    raise NotAPartitionError(
                        f"atoms {i} and {j} are not orthogonal (||PQ|| = {overlap:.3e})"
                    )
        total = np.zeros((dim, dim), dtype=np.complex128)
        for atom in atoms:
            total = total + atom.matrix
        defect = operator_norm(total - np.eye(dim))
        if defect > max(tol, 1e-10 * len(atoms)):
            raise NotAPartitionError(
                f"atoms do not sum to the identity (defect {defect:.3e})"
            )
        self._atoms = tuple(sorted(atoms, key=_atom_sort_key))
        digest = hashlib.sha256()
        digest.update(str(dim).encode())
        for atom in self._atoms:
            digest.update(_atom_sort_key(atom))
        self._id = digest.hexdigest()[:16]

    @property
    def atoms(self) -> tuple[Projection, ...]:
        return self._atoms

    @property
    def id(self) -> str:
        return self._id

    @property
    def dim(self) -> int:
        return self._atoms[0].dim

    @property
    def n_atoms(self) -> int:
        return len(self._atoms)

    def atom(self, index: int) -> Projection:
        return self._atoms[index]

    def sum_of_atoms(self, indices: Iterable[int], tol: float | None = None) -> Projection:
        """The projection obtained by summing the selected atoms."""
        return sum_of_projections(
            (self._atoms[i] for i in indices), self.dim, tol
        )

    def coefficients_in_span(
        self, a: HermitianOperator, tol: float | None = None
    ) -> np.ndarray | None:
        """Coefficients of ``a`` over the atoms, or None if a is not in the span."""
        tol = resolve_tolerance(tol)
        if a.dim != self.dim:
            raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {self.dim}")
        coeffs = np.empty(len(self._atoms), dtype=np.float64)
        residual = np.array(a.matrix)
        for i, atom in enumerate(self._atoms):
            coeffs[i] = float(
                (np.trace(atom.matrix @ a.matrix) / np.trace(atom.matrix)).real
            )
            residual -= coeffs[i] * atom.matrix
        if operator_norm(residual) > tol:
            return None
        return coeffs

    def contains_projection(self, p: Projection, tol: float | None = None) -> bool:
        """Whether p belongs to the context, i.e. is a sum of atoms."""
        tol = resolve_tolerance(tol)
        if p.dim != self.dim:
            raise DimensionMismatchError(f"dimensions differ: {p.dim} vs {self.dim}")
        selected = [a for a in self._atoms if proj_leq(a, p, tol)]
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for atom in selected:
            total = total + atom.matrix
        return operator_norm(total - p.matrix) <= max(tol, 1e-10 * max(len(selected), 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Context):
            return NotImplemented
        return self._id == other._id

    def __hash__(self) -> int:
        return hash(self._id)

    def __repr__(self) -> str:
        return f"Context(id={self._id!r}, dim={self.dim}, n_atoms={self.n_atoms})"


def context_from_atoms(atoms: Sequence[Projection], tol: float | None = None) -> Context:
    """Build a context from an explicit atomic partition of the identity."""
    return Context(atoms, tol)


def context_from_operator(a: HermitianOperator, tol: float | None = None) -> Context:
    """The context generated by a self-adjoint operator: atoms are its
    spectral projections. Raises ScalarOperatorError when A is a multiple of
    the identity (which generates only the trivial algebra)."""
    structure = eigenstructure(a, tol)
    if len(structure) < 2:
        raise ScalarOperatorError(
            "operator is a multiple of the identity and generates no context"
        )
    return Context(structure.projections, tol)


def includes(sub: Context, sup: Context, tol: float | None = None) -> bool:
    """Whether sub is included in sup (every atom of sub is a sum of sup atoms)."""
    tol = resolve_tolerance(tol)
    if sub.dim != sup.dim:
        raise DimensionMismatchError(f"dimensions differ: {sub.dim} vs {sup.dim}")
    if sub.id == sup.id:
        return True
    if sub.n_atoms > sup.n_atoms:
        return False
    for coarse in sub.atoms:
        total = np.zeros((sub.dim, sub.dim), dtype=np.complex128)
        for fine in sup.atoms:
            if proj_leq(fine, coarse, tol):
                total = total + fine.matrix
        if operator_norm(total - coarse.matrix) > max(tol, 1e-10 * sup.n_atoms):
            return False
    return True


def _set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # Classic recursive enumeration: element i joins an existing block or
    # opens a new one. Deterministic generation order.
    blocks: list[list[int]] = []

    def rec(i: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        for block in blocks:
            block.append(i)
            yield from rec(i + 1)
            block.pop()
        blocks.append([i])
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


def coarsenings(v: Context, tol: float | None = None) -> tuple[Context, ...]:
    """All contexts obtained by merging atoms of v into >= 2 blocks.

    Includes v itself (the partition into singletons). Ordered by id.
    """
    tol = resolve_tolerance(tol)
    result = []
    for partition in _set_partitions(v.n_atoms):
        if len(partition) < 2:
            continue
        atoms = [v.sum_of_atoms(block, tol) for block in partition]
        result.append(Context(atoms, tol))
    return tuple(sorted(result, key=lambda c: c.id))


def intersect(v: Context, w: Context, tol: float | None = None) -> Context:
    """The largest context included in both v and w.

    Its atoms are the minimal projections expressible both as sums of v atoms
    and as sums of w atoms; they arise as connected components of the overlap
    graph between the two atom sets. Raises TrivialIntersectionError when the
    only common projection is the identity.
    """
    tol = resolve_tolerance(tol)
    if v.dim != w.dim:
        raise DimensionMismatchError(f"dimensions differ: {v.dim} vs {w.dim}")
    nv, nw = v.n_atoms, w.n_atoms
    parent = list(range(nv + nw))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for i in range(nv):
        for j in range(nw):
            if operator_norm(v.atoms[i].matrix @ w.atoms[j].matrix) > tol:
                union(i, nv + j)
    components: dict[int, list[int]] = {}
    for i in range(nv):
        components.setdefault(find(i), []).append(i)
    if len(components) < 2:
        raise TrivialIntersectionError(
            "contexts share only the identity; the intersection is the trivial algebra"
        )
    atoms = [v.sum_of_atoms(block, tol) for block in components.values()]
    return Context(atoms, tol)


def dominating_atom_index(
    context: Context, p: Projection, tol: float | None = None
) -> int | None:
    """Index of the unique atom of ``context`` dominating p, or None."""
    for i, atom in enumerate(context.atoms):
        if proj_leq(p, atom, tol):
            return i
    return None


class ContextPoset:
    """A finite set of same-dimension contexts ordered by inclusion.

    Contexts are deduplicated by id and kept in id order. The inclusion
    relation and the point-restriction tables along every comparable pair are
    precomputed, so the poset is immutable and cheap to query.
    """

    __slots__ = ("_contexts", "_by_id", "_above", "_restriction")

    def __init__(self, contexts: Iterable[Context], tol: float | None = None):
        tol = resolve_tolerance(tol)
        by_id: dict[str, Context] = {}
        for ctx in contexts:
            by_id.setdefault(ctx.id, ctx)
        if not by_id:
            raise ValueError("a context poset needs at least one context")
        ordered = tuple(by_id[cid] for cid in sorted(by_id))
        dim = ordered[0].dim
        for ctx in ordered:
            if ctx.dim != dim:
                raise MixedDimensionsError(
                    f"contexts of dimension {dim} and {ctx.dim} in one poset"
                )
        above: dict[str, set[str]] = {ctx.id: {ctx.id} for ctx in ordered}
        restriction: dict[tuple[str, str], tuple[int, ...]] = {}
        for sub in ordered:
            for sup in ordered:
                if sub.id == sup.id:
                    continue
                if includes(sub, sup, tol):
                    above[sub.id].add(sup.id)
                    restriction[(sup.id, sub.id)] = _restriction_table(sup, sub, tol)
        self._contexts = ordered
        self._by_id = by_id
        self._above = {cid: frozenset(ids) for cid, ids in above.items()}
        self._restriction = restriction

    @property
    def contexts(self) -> tuple[Context, ...]:
        return self._contexts

    @property
    def dim(self) -> int:
        return self._contexts[0].dim

    @property
    def signature(self) -> tuple[str, ...]:
        """The ordered context ids; two posets with equal signatures are equal."""
        return tuple(ctx.id for ctx in self._contexts)

    def __iter__(self) -> Iterator[Context]:
        return iter(self._contexts)

    def __len__(self) -> int:
        return len(self._contexts)

    def __contains__(self, item) -> bool:
        cid = item.id if isinstance(item, Context) else item
        return cid in self._by_id

    def get(self, cid: str) -> Context:
        return self._by_id[cid]

    def leq(self, sub: Context | str, sup: Context | str) -> bool:
        """Whether sub is included in sup within this poset."""
        sub_id = sub.id if isinstance(sub, Context) else sub
        sup_id = sup.id if isinstance(sup, Context) else sup
        return sup_id in self._above[sub_id]

    def down_set(self, v: Context | str) -> tuple[Context, ...]:
        """All poset members included in v (v itself first by id order)."""
        vid = v.id if isinstance(v, Context) else v
        return tuple(c for c in self._contexts if self.leq(c, vid))

    def strict_pairs(self) -> tuple[tuple[str, str], ...]:
        """All (sub_id, sup_id) pairs with strict inclusion, in id order."""
        return tuple(
            (sub.id, sup.id)
            for sub in self._contexts
            for sup in self._contexts
            if sub.id != sup.id and self.leq(sub, sup)
        )

    def restriction_index(
        self, sup: Context | str, sub: Context | str, atom_index: int
    ) -> int:
        """Map a point index of sup to the index of its image point in sub."""
        sup_id = sup.id if isinstance(sup, Context) else sup
        sub_id = sub.id if isinstance(sub, Context) else sub
        if sup_id == sub_id:
            return atom_index
        try:
            table = self._restriction[(sup_id, sub_id)]
        except KeyError:
            raise KeyError(f"{sub_id} is not included in {sup_id} within this poset")
        return table[atom_index]

    def __repr__(self) -> str:
        return f"ContextPoset(dim={self.dim}, n_contexts={len(self._contexts)})"


def _restriction_table(sup: Context, sub: Context, tol: float | None) -> tuple[int, ...]:
    table = []
    for atom in sup.atoms:
        j = dominating_atom_index(sub, atom, tol)
        if j is None:
            raise InternalInvariantViolation(
                "no dominating atom found along an inclusion; contexts are inconsistent"
            )
        table.append(j)
    return tuple(table)


def build_poset(
    seeds: Iterable[Context],
    close_coarsening: bool = False,
    close_intersection: bool = False,
    tol: float | None = None,
) -> ContextPoset:
    """Generate the poset spanned by seed contexts and the requested closures.

    With close_coarsening, every coarsening of every member is added; with
    close_intersection, pairwise intersections (when nontrivial) are added;
    both run to a fixed point. No upward closure is ever performed.
    """
    tol = resolve_tolerance(tol)
    pool: dict[str, Context] = {}
    dim: int | None = None
    for seed in seeds:
        if dim is None:
            dim = seed.dim
        elif seed.dim != dim:
            raise MixedDimensionsError(
                f"seed contexts of dimension {dim} and {seed.dim}"
            )
        pool.setdefault(seed.id, seed)
    if not pool:
        raise ValueError("build_poset needs at least one seed context")
    coarsened: set[str] = set()
    changed = True
    while changed:
        changed = False
        if close_coarsening:
            for cid in sorted(pool):
                if cid in coarsened:
                    continue
                coarsened.add(cid)
                for ctx in coarsenings(pool[cid], tol):
                    if ctx.id not in pool:
                        pool[ctx.id] = ctx
                        changed = True
        if close_intersection:
            snapshot = [pool[cid] for cid in sorted(pool)]
            for i in range(len(snapshot)):
                for j in range(i + 1, len(snapshot)):
                    try:
                        ctx = intersect(snapshot[i], snapshot[j], tol)
                    except TrivialIntersectionError:
                        continue
                    if ctx.id not in pool:
                        pool[ctx.id] = ctx
                        changed = True
    return ContextPoset(pool.values(), tol)
