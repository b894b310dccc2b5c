"""Spectral order, daseinisation of self-adjoint operators, and operator arrows.

The spectral order compares operators through their spectral families:
A <=s B iff E^A_r >= E^B_r for every r. Daseinising an operator to a context
applies the projection approximations step by step to its spectral family:
the inner approximation of A maps every step through the outer projection
approximation, the outer approximation maps every step through the inner one.
Both land in the context and bracket A in the spectral order.

Filters here are principal: determined by a generator projection, tagged
either to a context's projection lattice or to the ambient lattice of all
projections. The antonymous/observable scans over a spectral family turn a
filter into the inner/outer spectral bounds; evaluating them at the cone over
a character's filter reproduces the character values of the daseinised
operators, which is what the operator arrow records per point and subcontext.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .config import resolve_tolerance
from .contexts import Context, ContextPoset
from .daseinisation import inner_projection, outer_projection
from .errors import (
    DimensionMismatchError,
    InternalInvariantViolation,
    PosetMismatchError,
)
from .linalg import (
    HermitianOperator,
    Projection,
    SpectralFamily,
    from_spectral_family,
    operator_norm,
    proj_leq,
    spectral_family,
)
from .presheaf import GelfandPoint, evaluate, restrict, spectrum

__all__ = [
    "PrincipalFilter",
    "OrderPair",
    "OperatorArrow",
    "spectral_leq",
    "inner_operator",
    "outer_operator",
    "filter_from_point",
    "cone",
    "antonymous",
    "observable",
    "gelfand_transform_inner",
    "gelfand_transform_outer",
    "operator_arrow",
]


def spectral_leq(a: HermitianOperator, b: HermitianOperator, tol: float | None = None) -> bool:
    """Spectral order: A <=s B iff E^A_r >= E^B_r for all r.

    Checked on the merged threshold grid of both families plus a sample
    between consecutive grid values (the families are constant there).
    Thresholds of the two families closer than tol are treated as the same
    jump point: each cluster is sampled once, past all its members, so that
    sub-tolerance eigenvalue noise cannot manufacture a violation.
    """
    tol = resolve_tolerance(tol)
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    fa = spectral_family(a, tol)
    fb = spectral_family(b, tol)
    grid = sorted(set(fa.thresholds) | set(fb.thresholds))
    clusters: list[list[float]] = [[grid[0]]]
    for t in grid[1:]:
        if t - clusters[-1][-1] <= tol:
            clusters[-1].append(t)
        else:
            clusters.append([t])
    samples = [cluster[-1] for cluster in clusters]
    for left, right in zip(clusters, clusters[1:]):
        samples.append((left[-1] + right[0]) / 2.0)
    return all(
        proj_leq(fb.value_at(r), fa.value_at(r), tol) for r in samples
    )


class PrincipalFilter:
    """Principal filter of projections above a nonzero generator.

    context is the context whose projection lattice the filter lives in, or
    None for the ambient lattice of all projections of the matrix algebra.
    """

    __slots__ = ("_generator", "_context")

    def __init__(self, generator: Projection, context: Context | None = None):
        if operator_norm(generator.matrix) == 0.0:
            raise ValueError("filter generator must be a nonzero projection")
        if context is not None and generator.dim != context.dim:
            raise DimensionMismatchError(
                f"generator dim {generator.dim} vs context dim {context.dim}"
            )
        self._generator = generator
        self._context = context

    @property
    def generator(self) -> Projection:
        return self._generator

    @property
    def context(self) -> Context | None:
        return self._context

    @property
    def is_ambient(self) -> bool:
        return self._context is None

    def contains(self, q: Projection, tol: float | None = None) -> bool:
        """Membership: q dominates the generator (and lies in the tagged
        context's lattice when the filter is context-scoped)."""
        tol = resolve_tolerance(tol)
        if self._context is not None and not self._context.contains_projection(q, tol):
            return False
        return proj_leq(self._generator, q, tol)

    def __repr__(self) -> str:
        scope = "ambient" if self._context is None else f"context {self._context.id}"
        return f"PrincipalFilter(rank={self._generator.rank}, scope={scope})"


def filter_from_point(point: GelfandPoint) -> PrincipalFilter:
    """The filter of the context's projections the character maps to 1;
    generated by the character's atom."""
    return PrincipalFilter(point.atom, point.context)


def cone(f: PrincipalFilter) -> PrincipalFilter:
    """The ambient filter generated by the same generator (all projections of
    the full algebra above it)."""
    return PrincipalFilter(f.generator, None)


def antonymous(a: HermitianOperator, f: PrincipalFilter, tol: float | None = None) -> float:
    """sup of r with (1 - E^A_r) in the filter.

    On a finite family this is the smallest threshold whose co-step fails to
    dominate the generator. The scan cannot fall through: at the top threshold
    the co-step is 0 and the generator is nonzero.
    """
    tol = resolve_tolerance(tol)
    if a.dim != f.generator.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {f.generator.dim}")
    family = spectral_family(a, tol)
    identity = np.eye(a.dim, dtype=np.complex128)
    gen = f.generator
    for t, step in zip(family.thresholds, family.steps):
        co_step = Projection(identity - step.matrix)
        if not proj_leq(gen, co_step, tol):
            return t
    raise InternalInvariantViolation("antonymous scan fell through a spectral family")


def observable(a: HermitianOperator, f: PrincipalFilter, tol: float | None = None) -> float:
    """inf of r with E^A_r in the filter: the smallest threshold whose step
    dominates the generator. The last step is the identity, so the scan
    cannot fall through."""
    tol = resolve_tolerance(tol)
    if a.dim != f.generator.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {f.generator.dim}")
    family = spectral_family(a, tol)
    gen = f.generator
    for t, step in zip(family.thresholds, family.steps):
        if proj_leq(gen, step, tol):
            return t
    raise InternalInvariantViolation("observable scan fell through a spectral family")


def _map_family_through(
    family: SpectralFamily,
    mapped_steps: list[Projection],
    tol: float,
) -> HermitianOperator:
    # Drop steps that collapsed to their predecessor (or to zero at the front)
    # and rebuild the operator from what remains. Monotonicity of the
    # approximations keeps the reduced family valid.
    dim = family.dim
    thresholds: list[float] = []
    steps: list[Projection] = []
    prev = Projection.zero(dim)
    for t, step in zip(family.thresholds, mapped_steps):
        if operator_norm(step.matrix - prev.matrix) > tol:
            thresholds.append(t)
            steps.append(step)
            prev = step
    reduced = SpectralFamily(thresholds, steps, tol)
    return from_spectral_family(reduced)


def inner_operator(a: HermitianOperator, v: Context, tol: float | None = None) -> HermitianOperator:
    """Best approximation of A from below (in the spectral order) within v.

    Every spectral step is replaced by its outer projection approximation,
    which lowers the operator while keeping it in the context.
    """
    tol = resolve_tolerance(tol)
    family = spectral_family(a, tol)
    mapped = [outer_projection(step, v, tol) for step in family.steps]
    return _map_family_through(family, mapped, tol)


def outer_operator(a: HermitianOperator, v: Context, tol: float | None = None) -> HermitianOperator:
    """Best approximation of A from above (in the spectral order) within v:
    every spectral step is replaced by its inner projection approximation."""
    tol = resolve_tolerance(tol)
    family = spectral_family(a, tol)
    mapped = [inner_projection(step, v, tol) for step in family.steps]
    return _map_family_through(family, mapped, tol)


def gelfand_transform_inner(
    a: HermitianOperator, point: GelfandPoint, tol: float | None = None
) -> float:
    """Value of the inner approximation at a character, computed by the
    filter route: the antonymous scan at the cone over the character's filter."""
    return antonymous(a, cone(filter_from_point(point)), tol)


def gelfand_transform_outer(
    a: HermitianOperator, point: GelfandPoint, tol: float | None = None
) -> float:
    """Value of the outer approximation at a character, via the observable
    scan at the cone over the character's filter."""
    return observable(a, cone(filter_from_point(point)), tol)


class OrderPair:
    """A pair of real functions (mu, nu) on the contexts below some context.

    mu collects character values of inner approximations and shrinks together
    with the context; nu collects outer approximation values and grows as the
    context shrinks; mu <= nu pointwise. Hashable, so sets of pairs work as
    value components.
    """

    __slots__ = ("_items",)

    def __init__(self, mu: Mapping[str, float], nu: Mapping[str, float]):
        if set(mu) != set(nu):
            raise ValueError("mu and nu must be defined on the same contexts")
        items = tuple(
            (cid, float(mu[cid]), float(nu[cid])) for cid in sorted(mu)
        )
        for cid, lo, hi in items:
            if lo > hi + 1e-12:
                raise ValueError(
                    f"mu exceeds nu at context {cid}: {lo!r} > {hi!r}"
                )
        self._items = items

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(cid for cid, _, _ in self._items)

    def mu(self, cid: str) -> float:
        return self._lookup(cid)[0]

    def nu(self, cid: str) -> float:
        return self._lookup(cid)[1]

    def interval(self, cid: str) -> tuple[float, float]:
        return self._lookup(cid)

    def intervals(self) -> tuple[tuple[str, float, float], ...]:
        return self._items

    def _lookup(self, cid: str) -> tuple[float, float]:
        for item_cid, lo, hi in self._items:
            if item_cid == cid:
                return (lo, hi)
        raise KeyError(cid)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderPair):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        parts = ", ".join(f"{cid}: [{lo:g}, {hi:g}]" for cid, lo, hi in self._items)
        return f"OrderPair({parts})"


class OperatorArrow:
    """The natural transformation induced by daseinising an operator.

    For each context V and each character of V it records the OrderPair of
    inner/outer approximation values over every poset context below V.
    """

    __slots__ = ("_poset", "_components")

    def __init__(self, poset: ContextPoset, components: Mapping[str, tuple[OrderPair, ...]]):
        for v in poset:
            if v.id not in components:
                raise PosetMismatchError(f"no component for context {v.id}")
            if len(components[v.id]) != v.n_atoms:
                raise ValueError(
                    f"component at {v.id} must have one pair per character"
                )
        self._poset = poset
        self._components = {cid: tuple(pairs) for cid, pairs in components.items()}

    @property
    def poset(self) -> ContextPoset:
        return self._poset

    def pair(self, v: Context | str, index: int) -> OrderPair:
        cid = v.id if isinstance(v, Context) else v
        return self._components[cid][index]

    def pairs(self, v: Context | str) -> tuple[OrderPair, ...]:
        cid = v.id if isinstance(v, Context) else v
        return self._components[cid]

    def __repr__(self) -> str:
        return f"OperatorArrow(n_contexts={len(self._poset)})"


def operator_arrow(
    a: HermitianOperator, poset: ContextPoset, tol: float | None = None
) -> OperatorArrow:
    """Compute the arrow of an operator over a context poset.

    Per context the inner and outer approximations are evaluated at the
    restriction of each character to every smaller context. Naturality (the
    pair of a restricted character is the restriction of the pair) holds by
    construction and is re-checked; failure raises InternalInvariantViolation.
    """
    tol = resolve_tolerance(tol)
    if a.dim != poset.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {poset.dim}")
    inner = {v.id: inner_operator(a, v, tol) for v in poset}
    outer = {v.id: outer_operator(a, v, tol) for v in poset}
    components: dict[str, tuple[OrderPair, ...]] = {}
    for v in poset:
        pairs = []
        for point in spectrum(v):
            mu: dict[str, float] = {}
            nu: dict[str, float] = {}
            for w in poset.down_set(v):
                image = restrict(point, w, tol)
                mu[w.id] = evaluate(image, inner[w.id], tol)
                nu[w.id] = evaluate(image, outer[w.id], tol)
            pairs.append(OrderPair(mu, nu))
        components[v.id] = tuple(pairs)
    arrow = OperatorArrow(poset, components)
    _check_naturality(arrow)
    return arrow


def _check_naturality(arrow: OperatorArrow) -> None:
    poset = arrow.poset
    for sub_id, sup_id in poset.strict_pairs():
        for i in range(poset.get(sup_id).n_atoms):
            j = poset.restriction_index(sup_id, sub_id, i)
            big = arrow.pair(sup_id, i)
            small = arrow.pair(sub_id, j)
            for cid in small.domain:
                if big.interval(cid) != small.interval(cid):
                    raise InternalInvariantViolation(
                        f"arrow is not natural along {sub_id} <= {sup_id}"
                    )
