"""Face-poset reconstruction for simple polyhedra and for 3-polyhedra whose
graph is 2-connected.

Both procedures first recover the extremal rays together with the facets
containing them, then close the extended incidence matrix (columns =
vertices followed by rays) under intersection.  Every proper face of a
pointed polyhedron is an intersection of facets and contains a vertex, so
the closure members with a nonempty vertex part are exactly the faces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from facetlab._bits import canonical_int_key, iter_bits, to_mask, to_set
from facetlab.boundedness import Dim3, detect_dim3
from facetlab.errors import Ambiguous, Degenerate, NoArrangement, NotSimple, PreconditionFailed
from facetlab.graph import GraphClass, classify_graph, is_cycle, is_two_connected, vertex_graph
from facetlab.incidence import IncidenceMatrix
from facetlab.poset import vertex_set_closure


@dataclass(frozen=True)
class Ray:
    base_vertex: int
    facet_set: frozenset[int]

    @cached_property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.base_vertex, tuple(sorted(self.facet_set)))

    def to_dict(self, offset: int = 0) -> dict:
        return {"vertex": self.base_vertex + offset, "facets": [f + offset for f in sorted(self.facet_set)]}


@dataclass(frozen=True)
class Face:
    verts: frozenset[int]
    rays: frozenset[int]


@dataclass(frozen=True)
class ReconstructedFacePoset:
    """Nontrivial faces as (vertex mask, ray-id mask) pairs; ``rays[i]`` describes ray id i.

    Faces are listed by atom count (vertices plus rays), then
    lexicographically with vertices before rays.  The improper face is
    listed last when ``includes_top`` is set.
    """

    atoms: tuple[tuple[int, int], ...]
    rays: tuple[Ray, ...]
    includes_top: bool = False

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        return tuple(Face(to_set(v), to_set(r)) for v, r in self.atoms)

    def leq(self, i: int, j: int) -> bool:
        (vi, ri), (vj, rj) = self.atoms[i], self.atoms[j]
        return vi & ~vj == 0 and ri & ~rj == 0

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with face i covered by face j."""
        N = len(self.atoms)
        below = [[i for i in range(N) if i != j and self.leq(i, j)] for j in range(N)]
        out = []
        for j in range(N):
            bs = set(below[j])
            for i in below[j]:
                if not any(k in bs and i != k and self.leq(i, k) for k in below[j]):
                    out.append((i, j))
        return sorted(out)

    def signature(self) -> tuple:
        """Labeled description: ray keys (base vertex, facets) in sorted order,
        and each face as (vertex mask, ray mask over that order)."""
        keys = [r.key for r in self.rays]
        order = sorted(range(len(keys)), key=keys.__getitem__)
        rank = [0] * len(keys)
        for pos, i in enumerate(order):
            rank[i] = pos
        if rank == list(range(len(keys))):
            faces = frozenset(self.atoms)
        else:
            faces = frozenset((v, to_mask(rank[i] for i in iter_bits(r))) for v, r in self.atoms)
        return tuple(keys[i] for i in order), faces

    def counts_by_kind(self) -> dict[str, int]:
        kinds = {"vertices": 0, "rays": 0, "other": 0}
        for v, r in self.atoms:
            if v.bit_count() == 1 and not r:
                kinds["vertices"] += 1
            elif v.bit_count() == 1 and r.bit_count() == 1:
                kinds["rays"] += 1
            else:
                kinds["other"] += 1
        return kinds

    def to_dict(self, one_indexed: bool = False) -> dict:
        off = 1 if one_indexed else 0
        return {
            "faces": [
                {"verts": [v + off for v in sorted(f.verts)],
                 "rays": [self.rays[r].to_dict(off) for r in sorted(f.rays)]}
                for f in self.faces
            ],
            "covers": [[i, j] for i, j in self.covers()],
            "includes_top": self.includes_top,
        }


def _poset_from_rays(A: IncidenceMatrix, rays: list[Ray], with_top: bool = False) -> ReconstructedFacePoset:
    n = A.n
    ext_rows = []
    for f, row in enumerate(A.rows):
        ext = row
        for k, r in enumerate(rays):
            if f in r.facet_set:
                ext |= 1 << (n + k)
        ext_rows.append(ext)
    F = vertex_set_closure(IncidenceMatrix(n + len(rays), tuple(ext_rows)))
    vmask = (1 << n) - 1
    faces = [(atoms & vmask, atoms >> n) for atoms in F.masks if atoms & vmask]
    if with_top:
        faces.append((vmask, (1 << len(rays)) - 1))
    return ReconstructedFacePoset(tuple(faces), tuple(rays), with_top)


def _constant_column_sum(A: IncidenceMatrix) -> int:
    sums = set(A.column_sums())
    if len(sums) != 1:
        raise NotSimple(f"column sums differ: {sorted(sums)}")
    return sums.pop()


def rays_simple(A: IncidenceMatrix) -> list[Ray]:
    """Extremal rays of a simple polyhedron with their facet sets.

    At a vertex v on facets F_1..F_d, dropping one facet leaves d - 1 facets
    whose intersection is an edge (two vertices) or a ray (v alone).
    """
    d = _constant_column_sum(A)
    if d < 2:
        raise NotSimple("ray recovery needs every vertex on d >= 2 facets")
    rays = []
    for v, col in enumerate(A.columns):
        facets = list(iter_bits(col))
        for drop in facets:
            W = A.full_mask
            rest = [f for f in facets if f != drop]
            for f in rest:
                W &= A.rows[f]
            size = W.bit_count()
            if size == 1:
                rays.append(Ray(v, frozenset(rest)))
            elif size != 2:
                raise Degenerate(
                    f"at vertex {v}, facets {rest} meet in {size} vertices; not a simple polyhedron"
                )
    if len({r.key for r in rays}) != len(rays):
        raise Degenerate("two rays share a base vertex and facet set")
    return sorted(rays, key=lambda r: r.key)


def face_poset_simple(A: IncidenceMatrix, with_top: bool = False) -> ReconstructedFacePoset:
    d = _constant_column_sum(A)
    if d == 1:
        # segment or ray: the faces are the vertices, the rest is P itself
        return _poset_from_rays(A, [], with_top)
    return _poset_from_rays(A, rays_simple(A), with_top)


def _path_ends(G) -> tuple[int, int]:
    if G.node_count == 1:
        return G.nodes[0], G.nodes[0]
    ends = [v for v in G.nodes if G.degree(v) == 1]
    return ends[0], ends[1]


def _arrangements(ends: dict[int, tuple[int, int]]) -> set[frozenset]:
    """All cyclic arrangements of the paths, as sets of glued rays.

    Consecutive paths share an endpoint; each path enters through one end
    and leaves through the other.  The first path is fixed to quotient out
    rotations; a reversed cycle yields the same ray set.
    """
    order = sorted(ends)
    first = order[0]
    results: set[frozenset] = set()

    def extend(seq_rays, used, current, exit_vertex, entry0):
        if len(used) == len(order):
            if exit_vertex == entry0:
                rays = seq_rays + [(exit_vertex, frozenset((current, first)))]
                if len(set(rays)) == len(rays):
                    results.add(frozenset(rays))
            return
        for g in order:
            if g in used:
                continue
            a, b = ends[g]
            for entry, leave in {(a, b), (b, a)}:
                if entry == exit_vertex:
                    extend(seq_rays + [(entry, frozenset((current, g)))], used | {g}, g, leave, entry0)

    a, b = ends[first]
    for entry, leave in {(a, b), (b, a)}:
        extend([], {first}, first, leave, entry)
    return results


def face_poset_dim3(A: IncidenceMatrix, with_top: bool = False) -> ReconstructedFacePoset:
    """Face poset of a 3-polyhedron whose graph is 2-connected.

    Bounded facets induce cycles and unbounded ones induce paths.  The paths
    are glued into a cycle at shared end vertices; every gluing is a ray
    lying in the two glued facets.  Every consistent arrangement is
    enumerated and all must agree.
    """
    F = vertex_set_closure(A)
    if detect_dim3(A, F) != Dim3.THREE:
        raise PreconditionFailed("incidences do not describe a 3-polyhedron")
    G = vertex_graph(F)
    if not is_two_connected(G):
        raise PreconditionFailed("vertex graph is not 2-connected")

    ends: dict[int, tuple[int, int]] = {}
    for f, row in enumerate(A.rows):
        H = G.induced(row)
        if is_cycle(H):
            continue
        if classify_graph(H) != GraphClass.PATH:
            raise NoArrangement(f"facet {f} induces neither a cycle nor a path")
        ends[f] = _path_ends(H)
    if not ends:
        return _poset_from_rays(A, [], with_top)
    if len(ends) < 2:
        raise NoArrangement("a single unbounded facet cannot close up")

    found = _arrangements(ends)
    if not found:
        raise NoArrangement("the unbounded facets admit no cyclic arrangement")
    posets = {}
    for glued in found:
        P = _poset_from_rays(A, sorted((Ray(v, fs) for v, fs in glued), key=lambda r: r.key), with_top)
        posets.setdefault(P.signature(), P)
    if len(posets) > 1:
        raise Ambiguous(f"{len(posets)} distinct face posets fit the incidences")
    return next(iter(posets.values()))


def face_poset_from_truth(verts_and_rays, rays: list[Ray]) -> ReconstructedFacePoset:
    """Assemble a poset from explicit (vertex set, ray ids) pairs, in canonical order."""
    pairs = {(v if isinstance(v, int) else to_mask(v), r if isinstance(r, int) else to_mask(r))
             for v, r in verts_and_rays}
    n = max((v.bit_length() for v, _ in pairs), default=0)
    width = n + len(rays)
    key = canonical_int_key(width)
    ordered = sorted(pairs, key=lambda vr: key(vr[0] | vr[1] << n))
    return ReconstructedFacePoset(tuple(ordered), tuple(rays))
