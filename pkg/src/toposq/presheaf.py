"""The spectral presheaf over a context poset and its clopen subobjects.

A context with atoms Q_1..Q_k has exactly k characters (pure states of the
abelian algebra); character i sends Q_j to delta_ij. Restriction along an
inclusion V' <= V maps a character of V to the character of V' whose atom
dominates its own. Families of character subsets that are closed under these
restriction maps form the complete Heyting algebra of clopen subobjects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .config import resolve_tolerance
from .contexts import Context, ContextPoset, dominating_atom_index, includes
from .errors import (
    InternalInvariantViolation,
    NotInContextError,
    NotIncludedError,
    NotRestrictionClosedError,
    PosetMismatchError,
)
from .linalg import HermitianOperator, Projection, proj_leq

__all__ = [
    "GelfandPoint",
    "ClopenSubobject",
    "spectrum",
    "evaluate",
    "restrict",
    "projection_to_points",
    "points_to_projection",
    "global_sections",
]


@dataclass(frozen=True)
class GelfandPoint:
    """Character of a context, identified by the atom it sends to 1."""

    context: Context
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.context.n_atoms:
            raise ValueError(
                f"atom index {self.index} out of range for {self.context!r}"
            )

    @property
    def atom(self) -> Projection:
        return self.context.atom(self.index)

    @property
    def context_id(self) -> str:
        return self.context.id


def spectrum(v: Context) -> tuple[GelfandPoint, ...]:
    """All characters of v, ordered by atom index."""
    return tuple(GelfandPoint(v, i) for i in range(v.n_atoms))


def evaluate(point: GelfandPoint, a: HermitianOperator, tol: float | None = None) -> float:
    """The value of the character at an operator in its context's span.

    For a = sum(c_i Q_i) this is c_index. Raises NotInContextError when a is
    not in the span of the atoms.
    """
    coeffs = point.context.coefficients_in_span(a, tol)
    if coeffs is None:
        raise NotInContextError("operator is not in the span of the context's atoms")
    return float(coeffs[point.index])


def restrict(point: GelfandPoint, sub: Context, tol: float | None = None) -> GelfandPoint:
    """Image of a character under restriction to an included context."""
    tol = resolve_tolerance(tol)
    if sub.id == point.context.id:
        return point
    if not includes(sub, point.context, tol):
        raise NotIncludedError(
            f"context {sub.id} is not included in {point.context.id}"
        )
    j = dominating_atom_index(sub, point.atom, tol)
    if j is None:
        raise InternalInvariantViolation(
            "restriction found no dominating atom along a valid inclusion"
        )
    return GelfandPoint(sub, j)


def projection_to_points(
    p: Projection, v: Context, tol: float | None = None
) -> frozenset[GelfandPoint]:
    """The characters valued 1 at p, for p a member of the context.

    This is one direction of the lattice isomorphism between the context's
    projections and subsets of its spectrum. Raises NotInContextError when p
    is not a sum of atoms.
    """
    tol = resolve_tolerance(tol)
    if not v.contains_projection(p, tol):
        raise NotInContextError("projection is not a sum of the context's atoms")
    return frozenset(
        GelfandPoint(v, i) for i, atom in enumerate(v.atoms) if proj_leq(atom, p, tol)
    )


def points_to_projection(
    points: Iterable[GelfandPoint | int], v: Context, tol: float | None = None
) -> Projection:
    """Inverse of projection_to_points: sum the atoms named by the points."""
    indices = []
    for item in points:
        if isinstance(item, GelfandPoint):
            if item.context.id != v.id:
                raise NotInContextError("point belongs to a different context")
            indices.append(item.index)
        else:
            indices.append(int(item))
    return v.sum_of_atoms(sorted(set(indices)), tol)


class ClopenSubobject:
    """A restriction-closed family of character subsets, one per context.

    components maps context id -> frozenset of atom indices. The family is
    validated on construction: every context of the poset must be covered and
    restriction along every inclusion must stay inside the family.
    """

    __slots__ = ("_poset", "_components")

    def __init__(
        self,
        poset: ContextPoset,
        components: Mapping[str, Iterable[int]],
        validate: bool = True,
    ):
        normalized: dict[str, frozenset[int]] = {}
        for ctx in poset:
            if ctx.id not in components:
                raise PosetMismatchError(f"no component for context {ctx.id}")
            indices = frozenset(int(i) for i in components[ctx.id])
            for i in indices:
                if not 0 <= i < ctx.n_atoms:
                    raise ValueError(
                        f"atom index {i} out of range for context {ctx.id}"
                    )
            normalized[ctx.id] = indices
        extra = set(components) - set(normalized)
        if extra:
            raise PosetMismatchError(f"components for unknown contexts: {sorted(extra)}")
        self._poset = poset
        self._components = normalized
        if validate:
            self._check_closed()

    def _check_closed(self) -> None:
        for sub_id, sup_id in self._poset.strict_pairs():
            for i in self._components[sup_id]:
                j = self._poset.restriction_index(sup_id, sub_id, i)
                if j not in self._components[sub_id]:
                    raise NotRestrictionClosedError(
                        f"point {i} of {sup_id} restricts outside the component "
                        f"at {sub_id}"
                    )

    @classmethod
    def top(cls, poset: ContextPoset) -> "ClopenSubobject":
        """The whole spectral presheaf."""
        return cls(
            poset,
            {c.id: range(c.n_atoms) for c in poset},
            validate=False,
        )

    @classmethod
    def bottom(cls, poset: ContextPoset) -> "ClopenSubobject":
        """The empty subobject."""
        return cls(poset, {c.id: () for c in poset}, validate=False)

    @property
    def poset(self) -> ContextPoset:
        return self._poset

    def component(self, v: Context | str) -> frozenset[int]:
        cid = v.id if isinstance(v, Context) else v
        return self._components[cid]

    def points(self, v: Context | str) -> tuple[GelfandPoint, ...]:
        """The component at v as actual points, in index order."""
        ctx = self._poset.get(v.id if isinstance(v, Context) else v)
        return tuple(GelfandPoint(ctx, i) for i in sorted(self._components[ctx.id]))

    def is_top(self) -> bool:
        return all(
            len(self._components[c.id]) == c.n_atoms for c in self._poset
        )

    def is_bottom(self) -> bool:
        return all(not self._components[c.id] for c in self._poset)

    def _require_same_poset(self, other: "ClopenSubobject") -> None:
        if self._poset.signature != other._poset.signature:
            raise PosetMismatchError("subobjects live over different context posets")

    def meet(self, other: "ClopenSubobject") -> "ClopenSubobject":
        """Componentwise intersection."""
        self._require_same_poset(other)
        return ClopenSubobject(
            self._poset,
            {
                cid: self._components[cid] & other._components[cid]
                for cid in self._components
            },
            validate=False,
        )

    def join(self, other: "ClopenSubobject") -> "ClopenSubobject":
        """Componentwise union."""
        self._require_same_poset(other)
        return ClopenSubobject(
            self._poset,
            {
                cid: self._components[cid] | other._components[cid]
                for cid in self._components
            },
            validate=False,
        )

    def leq(self, other: "ClopenSubobject") -> bool:
        """Componentwise containment."""
        self._require_same_poset(other)
        return all(
            self._components[cid] <= other._components[cid]
            for cid in self._components
        )

    def implies(self, other: "ClopenSubobject") -> "ClopenSubobject":
        """Heyting implication.

        A point of V survives iff at every poset context below V its
        restriction lands in the consequent whenever it lands in the
        antecedent.
        """
        self._require_same_poset(other)
        poset = self._poset
        comps: dict[str, set[int]] = {}
        for v in poset:
            keep: set[int] = set()
            for i in range(v.n_atoms):
                ok = True
                for w in poset.down_set(v):
                    j = poset.restriction_index(v.id, w.id, i)
                    if j in self._components[w.id] and j not in other._components[w.id]:
                        ok = False
                        break
                if ok:
                    keep.add(i)
            comps[v.id] = keep
        return ClopenSubobject(poset, comps)

    def negation(self) -> "ClopenSubobject":
        """Heyting negation: self implies bottom. Not a Boolean complement;
        join(self, negation) can be strictly below top."""
        return self.implies(ClopenSubobject.bottom(self._poset))

    def to_doc(self) -> dict[str, list[int]]:
        """Plain-data form: context id -> sorted atom indices."""
        return {cid: sorted(indices) for cid, indices in sorted(self._components.items())}

    def __and__(self, other: "ClopenSubobject") -> "ClopenSubobject":
        return self.meet(other)

    def __or__(self, other: "ClopenSubobject") -> "ClopenSubobject":
        return self.join(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        return (
            self._poset.signature == other._poset.signature
            and self._components == other._components
        )

    def __hash__(self) -> int:
        return hash(
            (
                self._poset.signature,
                tuple(sorted((cid, tuple(sorted(s))) for cid, s in self._components.items())),
            )
        )

    def __repr__(self) -> str:
        sizes = {cid: len(s) for cid, s in sorted(self._components.items())}
        return f"ClopenSubobject(sizes={sizes})"


def global_sections(poset: ContextPoset) -> list[dict[str, GelfandPoint]]:
    """All choices of one point per context compatible with every restriction.

    Depth-first search over contexts in order of descending atom count, with
    constraint propagation against everything already assigned: an assignment
    must restrict to the chosen point at every smaller context and be the
    restriction image of the choice at every larger one.
    """
    order = sorted(poset, key=lambda c: (-c.n_atoms, c.id))
    assigned: dict[str, int] = {}
    sections: list[dict[str, GelfandPoint]] = []

    def compatible(v: Context, index: int) -> bool:
        for other_id, other_index in assigned.items():
            if poset.leq(other_id, v.id) and other_id != v.id:
                if poset.restriction_index(v.id, other_id, index) != other_index:
                    return False
            if poset.leq(v.id, other_id) and other_id != v.id:
                if poset.restriction_index(other_id, v.id, other_index) != index:
                    return False
        return True

    def dfs(k: int) -> None:
        if k == len(order):
            sections.append(
                {cid: GelfandPoint(poset.get(cid), i) for cid, i in assigned.items()}
            )
            return
        v = order[k]
        for index in range(v.n_atoms):
            if compatible(v, index):
                assigned[v.id] = index
                dfs(k + 1)
                del assigned[v.id]

    dfs(0)
    return sections
