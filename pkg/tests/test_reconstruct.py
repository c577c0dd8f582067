import pytest
from conftest import shuffled

from facetlab import (
    IncidenceMatrix,
    circulant,
    face_poset_dim3,
    face_poset_simple,
    parse_incidence,
    rays_simple,
)
from facetlab.errors import Degenerate, NoArrangement, NotSimple, PreconditionFailed
from facetlab.generators import (
    cone,
    cone_product,
    far_face_truncation,
    parse_expression,
    polygon,
    prism,
    product,
    pyramid,
    segment,
    simplex,
    unbounded_prism,
)


def test_fig1_simple(fig1):
    rays = rays_simple(fig1)
    assert [(r.base_vertex, sorted(r.facet_set)) for r in rays] == [
        (0, [1, 4]), (1, [1, 2]), (2, [2, 3]), (3, [3, 4])
    ]
    P = face_poset_simple(fig1)
    assert len(P) == 17
    assert P.counts_by_kind() == {"vertices": 4, "rays": 4, "other": 9}


def test_fig1_dim3_agrees(fig1):
    assert face_poset_dim3(fig1).signature() == face_poset_simple(fig1).signature()


def test_fig1_atom_counts(fig1):
    # atoms are vertices and rays: 4 vertices; 4 bounded edges and 4 rays of
    # two atoms each; the base and 4 side facets
    sizes = [len(f.verts) + len(f.rays) for f in face_poset_simple(fig1).faces]
    assert [sizes.count(1), sizes.count(2), sum(s > 2 for s in sizes)] == [4, 8, 5]


def test_matches_ground_truth(fig1):
    T = far_face_truncation(pyramid(polygon(4)), {4})
    assert face_poset_simple(fig1).signature() == T.face_poset.signature()


def test_simplex_has_no_rays():
    P = face_poset_simple(circulant(4, 3))
    assert len(P) == 14 and P.rays == ()


def test_segment():
    P = face_poset_simple(segment().matrix)
    assert len(P) == 2 and [sorted(f.verts) for f in P.faces] == [[0], [1]]


def test_pentagonal_prism_dim3():
    Q = prism(polygon(5))
    P = face_poset_dim3(Q.matrix)
    assert P.signature() == Q.face_poset.signature()
    assert len(P) == 10 + 15 + 7


def test_truncated_pentagonal_pyramid():
    # far face at the apex: 5 vertices, 6 facets, 5 rays, 21 faces
    T = parse_expression("truncate(pyramid(polygon(5)), far=[6])")
    assert (T.matrix.n, T.matrix.m) == (5, 6)
    assert len(rays_simple(T.matrix)) == 5
    P = face_poset_dim3(T.matrix)
    assert len(P) == 21
    assert P.signature() == T.face_poset.signature() == face_poset_simple(T.matrix).signature()


def test_cone_product_rays():
    A = cone_product(polygon(3), 4).matrix
    assert A.column_sums() == [6, 6, 6]
    rays = rays_simple(A)
    assert len(rays) == 12
    assert all(len(r.facet_set) == 5 for r in rays)
    assert sorted(r.base_vertex for r in rays) == [0] * 4 + [1] * 4 + [2] * 4


@pytest.mark.parametrize(
    "expr",
    [
        "truncate(product(segment, polygon(6)), far=[1])",
        "truncate(product(segment, polygon(4)), far=[1,2])",
        "truncate(simplex(4), far=[1,2,3])",
        "truncate(product(polygon(3), polygon(5)), far=[1])",
        "truncate(product(segment, segment, segment), far=[1])",
        "uprism(polygon(7))",
        "uprism(product(segment, polygon(4)))",
    ],
)
def test_simple_truncations_match_truth(expr):
    T = parse_expression(expr)
    assert face_poset_simple(T.matrix).signature() == T.face_poset.signature()


def test_not_simple():
    with pytest.raises(NotSimple):
        face_poset_simple(pyramid(polygon(4)).matrix)
    with pytest.raises(NotSimple):
        rays_simple(IncidenceMatrix(2, (0b11,)))


def test_degenerate():
    # every vertex on two facets, but one facet alone contains three vertices
    A = parse_incidence("2 3\n111\n111\n")
    with pytest.raises(Degenerate):
        rays_simple(A)


def test_with_top(fig1):
    P = face_poset_simple(fig1, with_top=True)
    assert len(P) == 18 and P.includes_top
    top = P.faces[-1]
    assert top.verts == frozenset(range(4)) and len(top.rays) == 4
    assert all(P.leq(i, 17) for i in range(18))


def test_covers(fig1):
    P = face_poset_simple(circulant(4, 2))
    # square: every vertex is covered by two edges
    assert len(P.covers()) == 8
    Q = face_poset_simple(fig1)
    cov = Q.covers()
    for i, j in cov:
        assert Q.leq(i, j) and i != j
        assert not any(Q.leq(i, k) and Q.leq(k, j) for k in range(len(Q)) if k not in (i, j))


def test_dim3_preconditions():
    with pytest.raises(PreconditionFailed):
        face_poset_dim3(polygon(4).matrix)
    with pytest.raises(PreconditionFailed):
        face_poset_dim3(simplex(4).matrix)
    with pytest.raises(PreconditionFailed):
        face_poset_dim3(cone(5).matrix)
    # a tetrahedron with an edge sent to infinity keeps only one edge
    with pytest.raises(PreconditionFailed):
        face_poset_dim3(parse_expression("truncate(simplex(3), far=[1,2])").matrix)


def test_dim3_cube_truncated_at_edge():
    # what remains is a triangular prism graph, 2-connected
    T = parse_expression("truncate(product(segment, polygon(4)), far=[1,2])")
    P = face_poset_dim3(T.matrix)
    assert len(P) == 23 and P.signature() == T.face_poset.signature()


def test_dim3_single_path_fails():
    # one unbounded facet cannot close up
    with pytest.raises((NoArrangement, PreconditionFailed)):
        face_poset_dim3(parse_incidence("5 4\n1111\n1100\n0110\n0011\n1000\n"))


def test_dim3_non_simple_truth():
    # pyramids are not simple; bounded 3-polytopes need no rays
    Q = pyramid(polygon(6))
    P = face_poset_dim3(Q.matrix)
    assert P.rays == () and P.signature() == Q.face_poset.signature()
    T = parse_expression("truncate(pyramid(polygon(6)), far=[1])")
    assert face_poset_dim3(T.matrix).signature() == T.face_poset.signature()


def labeled_faces(P, rp=None, cp=None):
    """Faces as (vertex set, {(base vertex, facet tuple)}), optionally relabeled back."""
    cv = (lambda v: cp[v]) if cp else (lambda v: v)
    cf = (lambda f: rp[f]) if rp else (lambda f: f)
    rays = [(cv(r.base_vertex), tuple(sorted(cf(f) for f in r.facet_set))) for r in P.rays]
    return {(frozenset(cv(v) for v in f.verts), frozenset(rays[r] for r in f.rays)) for f in P.faces}


def test_invariant_under_permutation(fig1, rng):
    base = labeled_faces(face_poset_simple(fig1))
    for _ in range(20):
        B, rp, cp = shuffled(fig1, rng)
        P = face_poset_simple(B)
        assert labeled_faces(P, rp, cp) == base


def test_signature_is_labeled(fig1):
    P = face_poset_simple(fig1)
    T = far_face_truncation(pyramid(polygon(4)), {4}).face_poset
    assert labeled_faces(P) == labeled_faces(T)
    assert P.signature() == T.signature()
    Q = face_poset_simple(circulant(4, 2))
    assert P.signature() != Q.signature()


def test_json(fig1):
    d = face_poset_simple(fig1).to_dict(one_indexed=True)
    assert d["faces"][0] == {"verts": [1], "rays": []}
    assert len(d["faces"]) == 17 and not d["includes_top"]
    assert unbounded_prism(polygon(4)).matrix == fig1
    assert product(segment(), segment()).matrix.m == 4


def test_dim3_over_corpus():
    # every dim-3 instance either reconstructs to its ground truth or fails a
    # stated precondition; no valid 2-connected instance is ambiguous
    from facetlab import vertex_graph, vertex_set_closure
    from facetlab.generators import corpus_polytopes, truncations
    from facetlab.graph import is_two_connected

    results = {"ok": 0, "precondition": 0}
    for Q in corpus_polytopes():
        if Q.dim != 3:
            continue
        for G in [Q, *truncations(Q, up_to_symmetry=True)]:
            try:
                P = face_poset_dim3(G.matrix)
            except PreconditionFailed:
                F = vertex_set_closure(G.matrix)
                assert G.matrix.n <= 2 or not is_two_connected(vertex_graph(F)), G.provenance
                results["precondition"] += 1
                continue
            assert P.signature() == G.face_poset.signature(), G.provenance
            results["ok"] += 1
    assert results == {"ok": 49, "precondition": 20}
