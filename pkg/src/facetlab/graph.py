"""Graphs on vertices: the edge graph read off the closure family, induced
subgraphs of facets, the cycle/complete classification, and the column graph
of a square matrix with constant line sums.

Adjacency is stored as one neighbor bitmask per node.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from facetlab._bits import iter_bits, to_mask
from facetlab.incidence import IncidenceMatrix
from facetlab.poset import VertexSetFamily


class GraphClass(str, enum.Enum):
    CYCLE = "Cycle"
    COMPLETE = "Complete"
    PATH = "Path"
    OTHER = "Other"


@dataclass(frozen=True)
class VertexGraph:
    nodes: tuple[int, ...]
    adj: dict[int, int]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def node_mask(self) -> int:
        return to_mask(self.nodes)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def adjacent(self, v: int, w: int) -> bool:
        return bool(self.adj.get(v, 0) >> w & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in self.nodes for w in iter_bits(self.adj[v]) if v < w]

    def edge_count(self) -> int:
        return sum(self.adj[v].bit_count() for v in self.nodes) // 2

    def induced(self, mask: int) -> VertexGraph:
        nodes = tuple(v for v in self.nodes if mask >> v & 1)
        return VertexGraph(nodes, {v: self.adj[v] & mask for v in nodes})

    def to_dot(self, one_indexed: bool = False) -> str:
        off = 1 if one_indexed else 0
        lines = ["graph G {"]
        lines += [f"  {v + off};" for v in self.nodes]
        lines += [f"  {v + off} -- {w + off};" for v, w in self.edges()]
        lines.append("}")
        return "\n".join(lines)

    def adjacency_lists(self, one_indexed: bool = False) -> dict[int, list[int]]:
        off = 1 if one_indexed else 0
        return {v + off: [w + off for w in iter_bits(self.adj[v])] for v in self.nodes}


def _from_edges(nodes, edges) -> VertexGraph:
    adj = {v: 0 for v in nodes}
    for v, w in edges:
        adj[v] |= 1 << w
        adj[w] |= 1 << v
    return VertexGraph(tuple(nodes), adj)


def vertex_graph(F: VertexSetFamily) -> VertexGraph:
    """v ~ w iff {v, w} is a member of the family.

    With exactly two vertices the pair is declared adjacent: for a segment
    the edge is the whole polyhedron, which is not a family member.
    """
    if F.n == 2:
        return _from_edges(range(2), [(0, 1)])
    edges = []
    for S in F.masks:
        if S.bit_count() == 2:
            v, w = iter_bits(S)
            edges.append((v, w))
        elif S.bit_count() > 2:
            break
    return _from_edges(range(F.n), edges)


def induces_connected(G: VertexGraph, mask: int) -> bool:
    """Whether the nodes in ``mask`` induce a connected subgraph (true for <= 1 node)."""
    if mask == 0:
        return True
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= G.adj[v]
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen == mask


def is_connected(G: VertexGraph) -> bool:
    return G.node_count > 0 and induces_connected(G, G.node_mask)


def facet_subgraph(F: VertexSetFamily, G: VertexGraph, f_row) -> VertexGraph:
    return G.induced(F.masks[F.index_of(f_row)])


def is_cycle(G: VertexGraph) -> bool:
    """Connected, 2-regular, at least three nodes (K3 included)."""
    return G.node_count >= 3 and all(G.degree(v) == 2 for v in G.nodes) and is_connected(G)


def classify_graph(G: VertexGraph) -> GraphClass:
    """Cycle / Complete / Path / Other.

    K3 counts as Complete.  One- and two-node connected graphs are Paths,
    the graphs of unbounded 2-faces with one or two vertices.
    """
    k = G.node_count
    if k == 0 or not is_connected(G):
        return GraphClass.OTHER
    if k >= 3 and all(G.degree(v) == k - 1 for v in G.nodes):
        return GraphClass.COMPLETE
    if is_cycle(G):
        return GraphClass.CYCLE
    if G.edge_count() == k - 1 and all(G.degree(v) <= 2 for v in G.nodes):
        return GraphClass.PATH
    return GraphClass.OTHER


def column_graph(A: IncidenceMatrix) -> tuple[VertexGraph, int] | None:
    """Columns adjacent iff they share exactly d - 1 ones, for square A with all line sums d."""
    if A.m != A.n:
        return None
    sums = set(A.row_sums()) | set(A.column_sums())
    if len(sums) != 1:
        return None
    d = sums.pop()
    cols = A.columns
    edges = [(i, j) for i in range(A.n) for j in range(i + 1, A.n) if (cols[i] & cols[j]).bit_count() == d - 1]
    return _from_edges(range(A.n), edges), d


def is_two_connected(G: VertexGraph) -> bool:
    """Connected, at least three nodes, and no cut vertex."""
    if G.node_count < 3 or not is_connected(G):
        return False
    full = G.node_mask
    return all(induces_connected(G, full & ~(1 << v)) for v in G.nodes)
