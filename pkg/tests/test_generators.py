from itertools import permutations

import pytest

from facetlab import is_bounded, moebius_number, validate
from facetlab._bits import iter_bits, to_mask
from facetlab.errors import BadFarFace, BadParameters, GrammarError, UnboundedInput
from facetlab.generators import (
    GroundTruth,
    cone,
    cone_product,
    corpus,
    corpus_polytopes,
    face_orbits,
    far_face_truncation,
    is_automorphism,
    parse_expression,
    polygon,
    prism,
    product,
    pyramid,
    ray_fixture,
    segment,
    simplex,
    truncations,
    unbounded_prism,
)


def isomorphic(A, B) -> bool:
    """Brute force over column permutations; rows compared as multisets."""
    if (A.n, A.m) != (B.n, B.m) or sorted(A.row_sums()) != sorted(B.row_sums()):
        return False
    target = sorted(B.rows)
    for p in permutations(range(A.n)):
        if sorted(to_mask(p[v] for v in iter_bits(R)) for R in A.rows) == target:
            return True
    return False


def test_basic_polytopes():
    assert polygon(4).matrix.rows == (0b0011, 0b0110, 0b1100, 0b1001)
    assert polygon(4).dim == 2 and polygon(4).bounded
    assert simplex(3).dim == 3 and simplex(3).matrix.n == 4
    R = ray_fixture()
    assert R.matrix.rows == (1,) and R.dim == 1 and not R.bounded
    assert is_bounded(R.matrix) == (False, 0)
    for bad in (lambda: polygon(2), lambda: simplex(0), lambda: cone(2), lambda: cone_product(polygon(3), 3)):
        with pytest.raises(BadParameters):
            bad()


def test_products():
    cube = product(segment(), polygon(4))
    assert (cube.matrix.n, cube.matrix.m, cube.dim) == (8, 6, 3)
    assert moebius_number(cube.family) == 1
    tt = product(polygon(3), polygon(3))
    assert (tt.matrix.n, tt.matrix.m, tt.dim) == (9, 6, 4)
    assert isomorphic(product(segment(), segment()).matrix, polygon(4).matrix)
    assert prism(polygon(4)).matrix == cube.matrix
    with pytest.raises(UnboundedInput):
        product(ray_fixture(), segment())


def test_pyramids():
    P = pyramid(polygon(4))
    assert (P.matrix.n, P.matrix.m, P.dim) == (5, 5, 3)
    assert isomorphic(pyramid(segment()).matrix, polygon(3).matrix)
    assert isomorphic(pyramid(simplex(2)).matrix, simplex(3).matrix)
    with pytest.raises(UnboundedInput):
        pyramid(cone(3))


def test_truncation_examples(fig1):
    assert far_face_truncation(pyramid(polygon(4)), {4}).matrix == fig1
    T = far_face_truncation(simplex(3), {0})
    assert (T.matrix.n, T.matrix.m) == (3, 4)
    assert not T.bounded and T.facet_bounded.count(True) == 1
    cube = product(segment(), polygon(4))
    square = cube.matrix.rows[0]
    U = far_face_truncation(cube, square)
    assert U.matrix.m == cube.matrix.m - 1
    assert isomorphic(U.matrix, unbounded_prism(polygon(4)).matrix)


def test_truncation_errors():
    Q = polygon(5)
    with pytest.raises(BadFarFace):
        far_face_truncation(Q, {0, 2})
    with pytest.raises(BadFarFace):
        far_face_truncation(Q, set(range(5)))
    with pytest.raises(UnboundedInput):
        far_face_truncation(cone(4), {0})


def test_truncation_keeps_duplicate_rows():
    # the tetrahedron at an edge: both facets through the edge shrink to the same pair
    T = far_face_truncation(simplex(3), {0, 1})
    assert T.matrix.n == 2 and len(set(T.matrix.rows)) < T.matrix.m


def test_unbounded_prisms(fig1):
    assert unbounded_prism(polygon(4)).matrix == fig1
    S = unbounded_prism(segment())
    assert S.matrix.rows == (0b11, 0b01, 0b10) and S.dim == 2 and not S.bounded
    for B in (polygon(5), simplex(3), product(segment(), polygon(3))):
        assert moebius_number(unbounded_prism(B).family) == 0


def test_cones():
    c = cone(4)
    assert c.matrix.rows == (1,) * 4 and c.dim_range == (3, 4) and c.dim is None
    cp = cone_product(polygon(4), 4)
    assert (cp.matrix.m, cp.matrix.n) == (8, 4) and cp.dim_range == (5, 6)
    assert moebius_number(cp.family) == 0 and not any(cp.facet_bounded)


def test_invariant_all_bounded_facets():
    with pytest.raises(ValueError):
        GroundTruth(polygon(4).matrix, (2, 2), False, (True,) * 4, "bad", "polygon")


def test_expressions(fig1):
    assert parse_expression("truncate(pyramid(polygon(4)), far=[5])").matrix == fig1
    assert parse_expression("uprism(polygon(4))").matrix == fig1
    assert parse_expression("coneprod(polygon(4),4)").matrix.m == 8
    assert parse_expression("prism(polygon(4))").dim == 3
    assert parse_expression("product(segment, segment(), polygon(3))").dim == 4
    assert parse_expression(" cone( 5 ) ").matrix.m == 5
    assert parse_expression("ray").provenance == "ray()"


@pytest.mark.parametrize(
    "text, pos",
    [
        ("polygon(", 8),
        ("polygon(2)", 0),
        ("hexagon(6)", 0),
        ("truncate(polygon(5), far=[9])", 21),
        ("truncate(polygon(5), far=[1,3])", 0),
        ("polygon(5) x", 11),
        ("polygon(5$)", 9),
        ("product(polygon(3))", 0),
    ],
)
def test_grammar_errors_carry_positions(text, pos):
    with pytest.raises(GrammarError) as exc:
        parse_expression(text)
    assert exc.value.pos == pos


def test_provenance_round_trips():
    for expr in ["truncate(pyramid(polygon(4)), far=[5])", "coneprod(polygon(3), 6)", "uprism(simplex(3))"]:
        G = parse_expression(expr)
        assert parse_expression(G.provenance).matrix == G.matrix


def test_listed_symmetries_are_automorphisms():
    for Q in corpus_polytopes():
        for g in Q.symmetries:
            assert is_automorphism(Q.matrix, g), Q.provenance
    assert not is_automorphism(polygon(5).matrix, (1, 0, 2, 3, 4))
    assert not is_automorphism(polygon(5).matrix, (0, 0, 1, 2, 3))


@pytest.mark.parametrize("Q", [polygon(6), simplex(4), product(segment(), polygon(4)),
                               pyramid(polygon(5)), product(polygon(3), polygon(3))],
                         ids=lambda Q: Q.provenance)
def test_face_orbits_partition_faces(Q):
    orbits = face_orbits(Q)
    flat = [S for orbit in orbits for S in orbit]
    assert sorted(flat) == sorted(Q.family.masks)
    for orbit in orbits:
        # faces in one orbit have the same size and isomorphic truncations
        assert len({S.bit_count() for S in orbit}) == 1
        ref = far_face_truncation(Q, orbit[0])
        other = far_face_truncation(Q, orbit[-1])
        assert sorted(ref.matrix.row_sums()) == sorted(other.matrix.row_sums())
        assert sorted(ref.facet_bounded) == sorted(other.facet_bounded)


def test_orbit_counts():
    assert [len(o) for o in face_orbits(polygon(6))] == [6, 6]
    assert [len(o) for o in face_orbits(simplex(3))] == [4, 6, 4]
    # segment x square: the listed generators act on each factor separately,
    # so square-direction and segment-direction edges stay in separate orbits
    cube = product(segment(), polygon(4))
    assert [len(o) for o in face_orbits(cube)] == [8, 8, 4, 2, 4]
    assert sum(1 for _ in truncations(cube, up_to_symmetry=True)) == 5
    assert [len(o) for o in face_orbits(product(polygon(4), polygon(4)))][:2] == [16, 32]
    assert sum(1 for _ in truncations(cube)) == 26


def test_ground_truth_consistency_sample():
    for i, G in enumerate(corpus(up_to_symmetry=True)):
        if i % 25:
            continue
        assert validate(G.matrix).overall, G.provenance
        assert is_bounded(G.matrix, G.family)[0] == G.bounded


def test_ground_truth_json():
    d = far_face_truncation(pyramid(polygon(4)), {4}).to_dict()
    assert d["provenance"] == "truncate(pyramid(polygon(4)), far=[5])"
    assert d["face_count"] == 17 and d["dim"] == 3 and d["facet_bounded"][0] is True
    assert cone(3).to_dict()["face_count"] is None
