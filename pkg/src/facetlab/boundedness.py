"""Decision procedures on incidence data alone: is the polyhedron bounded,
which facets are bounded, and what can be said about the dimension.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from facetlab.errors import NoEdgeFound, OutOfRange
from facetlab.incidence import IncidenceMatrix
from facetlab.moebius import member_values, moebius_number, moebius_table
from facetlab.poset import (
    DEFAULT_MEMBER_LIMIT,
    VertexSetFamily,
    longest_chain,
    sub_family_below,
    vertex_set_closure,
)


class Dim3(str, enum.Enum):
    THREE = "Three"
    AT_LEAST_FOUR = "AtLeastFour"
    CONE_AMBIGUOUS = "ConeAmbiguous"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class BoundednessReport:
    bounded: bool
    mobius: int
    facet_bounded: tuple[bool, ...]
    dim3: Dim3
    dim_from_bounded_facet: int | None = None
    low_dim_hint: int | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "bounded": self.bounded,
            "mobius": self.mobius,
            "facet_bounded": list(self.facet_bounded),
            "dim3": self.dim3.value,
            "dim_from_bounded_facet": self.dim_from_bounded_facet,
            "low_dim_hint": self.low_dim_hint,
        }


def _closure(A: IncidenceMatrix, family: VertexSetFamily | None, limit: int) -> VertexSetFamily:
    return family if family is not None else vertex_set_closure(A, limit)


def is_bounded(A: IncidenceMatrix, family: VertexSetFamily | None = None,
               limit: int = DEFAULT_MEMBER_LIMIT) -> tuple[bool, int]:
    """(bounded, μ): the polyhedron is bounded iff the Möbius number is nonzero."""
    mu = moebius_number(_closure(A, family, limit))
    return mu != 0, mu


def facet_mobius(A: IncidenceMatrix, f: int, family: VertexSetFamily | None = None,
                 limit: int = DEFAULT_MEMBER_LIMIT) -> int:
    """μ(1̂) of the lattice of facet f.

    The lattice is the interval below the facet's vertex set S.  When another
    facet also contains S, S is the vertex set of a nontrivial face of the
    facet and an artificial top is adjoined; otherwise S itself is the top.
    """
    if not 0 <= f < A.m:
        raise OutOfRange(f"facet {f} outside 0..{A.m - 1}")
    F = _closure(A, family, limit)
    S = A.rows[f]
    below = sub_family_below(F, S)
    shared = any(g != f and S & ~R == 0 for g, R in enumerate(A.rows))
    if shared:
        return moebius_table(below).top_value
    return moebius_table(below, top=S).top_value


def facet_bounded(A: IncidenceMatrix, f: int, family: VertexSetFamily | None = None,
                  limit: int = DEFAULT_MEMBER_LIMIT) -> bool:
    return facet_mobius(A, f, family, limit) != 0


def facet_boundedness(A: IncidenceMatrix, family: VertexSetFamily | None = None,
                      limit: int = DEFAULT_MEMBER_LIMIT) -> tuple[bool, ...]:
    """facet_bounded for every facet from a single Möbius table.

    μ(T) only depends on the members below T, so the values over the whole
    family restrict to every facet's lattice: with the facet's vertex set S
    as top the answer is μ(S), with an artificial top it is
    -(1 + sum of μ(T) over members T within S).
    """
    F = _closure(A, family, limit)
    mu = np.array(member_values(F), dtype=object)
    rows = list(dict.fromkeys(A.rows))
    inside = F.within(rows)
    value = {}
    for k, S in enumerate(rows):
        shared = sum(1 for R in A.rows if S & ~R == 0) > 1
        if shared:
            value[S] = -(1 + sum(mu[inside[k]]))
        else:
            value[S] = mu[F.index[S]]
    return tuple(value[S] != 0 for S in A.rows)


def detect_dim3(A: IncidenceMatrix, family: VertexSetFamily | None = None,
                limit: int = DEFAULT_MEMBER_LIMIT) -> Dim3:
    """Tell d = 3 from d >= 4 for a polyhedron of dimension at least 3.

    The caller vouches for d >= 3.  A cone (one vertex) with three facets is
    3-dimensional and cones with more facets are ambiguous.  Otherwise the
    lexicographically first edge is probed: it lies in exactly two facets iff
    d = 3.  An edge in fewer than two facets, a one-vertex polyhedron with
    fewer than three facets, or a segment reveal d <= 2 (NotApplicable).
    """
    if A.n == 1:
        if A.m == 3:
            return Dim3.THREE
        return Dim3.CONE_AMBIGUOUS if A.m > 3 else Dim3.NOT_APPLICABLE
    F = _closure(A, family, limit)
    edge = next((S for S in F.masks if S.bit_count() == 2), None)
    if edge is None:
        if A.n == 2:
            return Dim3.NOT_APPLICABLE
        raise NoEdgeFound("no two-element face vertex set; not a polyhedron of dimension >= 3")
    count = sum(1 for R in A.rows if edge & ~R == 0)
    if count < 2:
        return Dim3.NOT_APPLICABLE
    return Dim3.THREE if count == 2 else Dim3.AT_LEAST_FOUR


def dimension_from_bounded_facet(A: IncidenceMatrix, family: VertexSetFamily | None = None,
                                 limit: int = DEFAULT_MEMBER_LIMIT,
                                 facet_flags: tuple[bool, ...] | None = None) -> int | None:
    """Dimension from the longest chain of face vertex sets, if some facet is bounded."""
    F = _closure(A, family, limit)
    flags = facet_flags if facet_flags is not None else facet_boundedness(A, F)
    if not any(flags):
        return None
    return longest_chain(F)[0]


def low_dimension_hint(A: IncidenceMatrix, family: VertexSetFamily | None = None) -> int | None:
    """Advisory guess for d in {1, 2}; None when the data suggests d >= 3.

    d = 1: a ray (one vertex, one facet) or a segment (two singleton facets).
    d = 2: an angle (one vertex, two facets), or all facets of size <= 2 that
    form a cycle, or a path whose two end vertices are singleton facets.
    """
    sizes = A.row_sums()
    if A.n == 1:
        return {1: 1, 2: 2}.get(A.m)
    if A.n == 2 and A.m == 2 and sizes == [1, 1]:
        return 1
    if max(sizes) > 2:
        return None
    from facetlab.graph import GraphClass, classify_graph, vertex_graph

    F = _closure(A, family, DEFAULT_MEMBER_LIMIT)
    cls = classify_graph(vertex_graph(F))
    edges = sum(1 for s in sizes if s == 2)
    singles = sum(1 for s in sizes if s == 1)
    if cls in (GraphClass.CYCLE, GraphClass.COMPLETE) and singles == 0 and edges == A.n:
        return 2
    if cls == GraphClass.PATH and singles == 2 and edges == A.n - 1:
        return 2
    return None


def analyze_boundedness(A: IncidenceMatrix, family: VertexSetFamily | None = None,
                        limit: int = DEFAULT_MEMBER_LIMIT) -> BoundednessReport:
    F = _closure(A, family, limit)
    bounded, mu = is_bounded(A, F)
    flags = facet_boundedness(A, F)
    hint = low_dimension_hint(A, F)
    if hint is not None:
        dim3 = Dim3.NOT_APPLICABLE
    else:
        try:
            dim3 = detect_dim3(A, F)
        except NoEdgeFound:
            dim3 = Dim3.NOT_APPLICABLE
    return BoundednessReport(
        bounded=bounded,
        mobius=mu,
        facet_bounded=flags,
        dim3=dim3,
        dim_from_bounded_facet=dimension_from_bounded_facet(A, F, facet_flags=flags),
        low_dim_hint=hint,
    )
