"""Instances with known answers: polytopes, products, pyramids, far-face
truncations, unbounded prisms, cones.

Every instance carries its dimension (an interval when the incidences do
not determine it), boundedness of the polyhedron and of each facet, and,
when the construction determines it, the face poset.
"""

from __future__ import annotations

import json
import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np

from facetlab._bits import iter_bits, to_list, to_mask
from facetlab.circulant import circulant
from facetlab.errors import BadFarFace, BadParameters, GrammarError, UnboundedInput
from facetlab.incidence import IncidenceMatrix, _pack_rows
from facetlab.poset import VertexSetFamily, _unpack, vertex_set_closure
from facetlab.reconstruct import Ray, ReconstructedFacePoset, face_poset_from_truth


@dataclass(frozen=True)
class GroundTruth:
    matrix: IncidenceMatrix
    dim_range: tuple[int, int]
    bounded: bool
    facet_bounded: tuple[bool, ...]
    provenance: str
    kind: str
    poset_builder: Callable[[], ReconstructedFacePoset] | None = field(default=None, compare=False, repr=False)
    # vertex permutations generating a group of combinatorial automorphisms
    symmetries: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        # a ray is unbounded although its only facet, the vertex, is bounded
        if self.dim_range[0] >= 2 and all(self.facet_bounded) and not self.bounded:
            raise ValueError(f"{self.provenance}: all facets bounded but polyhedron unbounded")

    @property
    def dim(self) -> int | None:
        lo, hi = self.dim_range
        return lo if lo == hi else None

    @cached_property
    def family(self) -> VertexSetFamily:
        return vertex_set_closure(self.matrix)

    @cached_property
    def face_poset(self) -> ReconstructedFacePoset | None:
        return self.poset_builder() if self.poset_builder is not None else None

    def to_dict(self) -> dict:
        fp = self.face_poset
        return {
            "provenance": self.provenance,
            "kind": self.kind,
            "m": self.matrix.m,
            "n": self.matrix.n,
            "rows": [to_list(r) for r in self.matrix.rows],
            "dim": self.dim,
            "dim_range": list(self.dim_range),
            "bounded": self.bounded,
            "facet_bounded": list(self.facet_bounded),
            "face_count": len(fp) if fp is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _polytope(A: IncidenceMatrix, dim: int, provenance: str, kind: str,
              symmetries: tuple[tuple[int, ...], ...] = ()) -> GroundTruth:
    def build():
        fam = vertex_set_closure(A)
        return face_poset_from_truth([(S, ()) for S in fam.members], [])

    return GroundTruth(A, (dim, dim), True, (True,) * A.m, provenance, kind, build, symmetries)


def polygon(k: int) -> GroundTruth:
    if not (isinstance(k, int) and k >= 3):
        raise BadParameters(f"polygon needs k >= 3, got {k}")
    rotation = tuple((v + 1) % k for v in range(k))
    reflection = tuple(-v % k for v in range(k))
    return _polytope(circulant(k, 2), 2, f"polygon({k})", "polygon", (rotation, reflection))


def simplex(d: int) -> GroundTruth:
    if not (isinstance(d, int) and d >= 1):
        raise BadParameters(f"simplex needs d >= 1, got {d}")
    cycle = tuple((v + 1) % (d + 1) for v in range(d + 1))
    swap = (1, 0) + tuple(range(2, d + 1))
    return _polytope(circulant(d + 1, d), d, f"simplex({d})", "simplex", (cycle, swap))


def segment() -> GroundTruth:
    return _polytope(circulant(2, 1), 1, "segment()", "segment", ((1, 0),))


def ray_fixture() -> GroundTruth:
    A = circulant(1, 1)
    return GroundTruth(A, (1, 1), False, (True,), "ray()", "ray",
                       lambda: face_poset_from_truth([({0}, ())], []))


def _require_bounded(*parts: GroundTruth):
    for p in parts:
        if not p.bounded or p.dim is None:
            raise UnboundedInput(f"{p.provenance} is not a polytope")


def product(A: GroundTruth, B: GroundTruth) -> GroundTruth:
    """Cartesian product; vertex (a, b) gets index a * n_B + b."""
    _require_bounded(A, B)
    nA, nB = A.matrix.n, B.matrix.n
    rows = []
    for R in A.matrix.rows:
        rows.append(to_mask(a * nB + b for a in iter_bits(R) for b in range(nB)))
    for R in B.matrix.rows:
        rows.append(to_mask(a * nB + b for a in range(nA) for b in iter_bits(R)))
    M = IncidenceMatrix(nA * nB, tuple(rows))
    syms = [tuple(g[a] * nB + b for a in range(nA) for b in range(nB)) for g in A.symmetries]
    syms += [tuple(a * nB + h[b] for a in range(nA) for b in range(nB)) for h in B.symmetries]
    if A.matrix == B.matrix:
        syms.append(tuple(b * nB + a for a in range(nA) for b in range(nB)))
    return _polytope(M, A.dim + B.dim, f"product({A.provenance}, {B.provenance})", "product", tuple(syms))


def prism(A: GroundTruth) -> GroundTruth:
    P = product(segment(), A)
    return _polytope(P.matrix, P.dim, f"prism({A.provenance})", "product", P.symmetries)


def pyramid(A: GroundTruth) -> GroundTruth:
    """Base facet first, then each old facet joined with the apex (vertex n)."""
    _require_bounded(A)
    n = A.matrix.n
    apex = 1 << n
    rows = [(1 << n) - 1] + [R | apex for R in A.matrix.rows]
    syms = tuple(g + (n,) for g in A.symmetries)
    return _polytope(IncidenceMatrix(n + 1, tuple(rows)), A.dim + 1, f"pyramid({A.provenance})", "pyramid", syms)


def far_face_truncation(Q: GroundTruth, S) -> GroundTruth:
    """The unbounded polyhedron whose projective closure is Q with far face S.

    Columns are the vertices outside S (old order kept), rows are R - S for
    the rows R of Q not contained in S.
    """
    _require_bounded(Q)
    A = Q.matrix
    far = S if isinstance(S, int) else to_mask(S)
    family = Q.family
    if far == A.full_mask or far not in family.index:
        raise BadFarFace(f"{to_list(far)} is not the vertex set of a proper face of {Q.provenance}")

    keep_cols = [v for v in range(A.n) if not far >> v & 1]
    new_col = {v: j for j, v in enumerate(keep_cols)}
    kept_rows = [f for f, R in enumerate(A.rows) if R & ~far]
    rows = tuple(to_mask(new_col[v] for v in iter_bits(A.rows[f] & ~far)) for f in kept_rows)
    M = IncidenceMatrix(len(keep_cols), rows)
    flags = tuple(A.rows[f] & far == 0 for f in kept_rows)

    def build():
        rays = []
        ray_edge = []
        for T in family.masks:
            if T.bit_count() != 2 or (T & far).bit_count() != 1:
                continue
            base = new_col[next(iter_bits(T & ~far))]
            facets = frozenset(i for i, f in enumerate(kept_rows) if T & ~A.rows[f] == 0)
            rays.append(Ray(base, facets))
            ray_edge.append(T)
        order = sorted(range(len(rays)), key=lambda k: rays[k].key)
        rays = [rays[k] for k in order]
        ray_edge = [ray_edge[k] for k in order]
        # faces of Q not inside the far face; vertex part on the kept columns
        B = family.bit_matrix
        live = np.array([T & ~far != 0 for T in family.masks])
        verts = _pack_rows(B[live][:, keep_cols])
        if ray_edge:
            # both ends of ray edge k lie in the face
            ray_masks = _pack_rows((B[live] @ _unpack(ray_edge, A.n).T) == 2)
        else:
            ray_masks = (0,) * len(verts)
        faces = list(zip(verts, ray_masks))
        return face_poset_from_truth(faces, rays)

    far_label = ",".join(str(v + 1) for v in iter_bits(far))
    return GroundTruth(M, Q.dim_range, False, flags, f"truncate({Q.provenance}, far=[{far_label}])",
                       "truncation", build)


def unbounded_prism(A: GroundTruth) -> GroundTruth:
    """A x [0, inf): an all-ones bottom facet on top of A's rows."""
    _require_bounded(A)
    M = A.matrix
    rows = (M.full_mask,) + M.rows

    def build():
        fam = vertex_set_closure(M)
        rays = [Ray(v, frozenset(f + 1 for f in iter_bits(M.columns[v]))) for v in range(M.n)]
        faces = [(S, ()) for S in fam.members] + [(frozenset(range(M.n)), ())]
        faces += [(S, sorted(S)) for S in fam.members]
        return face_poset_from_truth(faces, rays)

    flags = (True,) + (False,) * M.m
    return GroundTruth(IncidenceMatrix(M.n, rows), (A.dim + 1, A.dim + 1), False, flags,
                       f"uprism({A.provenance})", "uprism", build)


def cone(m: int) -> GroundTruth:
    if not (isinstance(m, int) and m >= 3):
        raise BadParameters(f"cone needs m >= 3 facets, got {m}")
    return GroundTruth(IncidenceMatrix(1, (1,) * m), (3, m), False, (False,) * m, f"cone({m})", "cone")


def cone_product(Q: GroundTruth, m: int) -> GroundTruth:
    """Q x C for a pointed cone C with m facets; the dimension is not determined."""
    _require_bounded(Q)
    if not (isinstance(m, int) and m >= 4):
        raise BadParameters(f"cone_product needs m >= 4 cone facets, got {m}")
    M = Q.matrix
    rows = M.rows + (M.full_mask,) * m
    mm = len(rows)
    return GroundTruth(IncidenceMatrix(M.n, rows), (Q.dim + 3, Q.dim + m), False, (False,) * mm,
                       f"coneprod({Q.provenance}, {m})", "cone_product")


# --- corpus -----------------------------------------------------------------

PRODUCT_FACTORS = ("segment", 3, 4, 5, 6)


def _factor(name) -> GroundTruth:
    return segment() if name == "segment" else polygon(name)


def corpus_polytopes() -> Iterator[GroundTruth]:
    """Polygons k <= 50, simplices d <= 8, products of 2 or 3 factors from
    {segment, polygon(3..6)}, and pyramids over the factors and products."""
    for k in range(3, 51):
        yield polygon(k)
    for d in range(1, 9):
        yield simplex(d)
    factors = [_factor(x) for x in PRODUCT_FACTORS]
    for x in factors:
        yield pyramid(x)
    for size in (2, 3):
        for combo in combinations_with_replacement(range(len(factors)), size):
            P = factors[combo[0]]
            for i in combo[1:]:
                P = product(P, factors[i])
            yield P
            yield pyramid(P)


def is_automorphism(A: IncidenceMatrix, perm: tuple[int, ...]) -> bool:
    """Whether the vertex permutation maps the set of facets onto itself."""
    if sorted(perm) != list(range(A.n)):
        return False
    images = {to_mask(perm[v] for v in iter_bits(R)) for R in A.rows}
    return images == set(A.rows)


def face_orbits(Q: GroundTruth) -> list[list[int]]:
    """Proper faces of Q (as vertex masks) grouped into orbits of its symmetry group.

    Each orbit is sorted canonically; orbits are listed by their first element.
    """
    A = Q.matrix
    for g in Q.symmetries:
        if not is_automorphism(A, g):
            raise ValueError(f"{Q.provenance}: listed symmetry {g} is not an automorphism")
    F = Q.family
    masks = F.masks
    pos = F.index
    bits = F.bit_matrix.astype(bool)
    weights = [1 << v for v in range(A.n)]
    parent = list(range(len(masks)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in Q.symmetries:
        inverse = [0] * A.n
        for v, w in enumerate(g):
            inverse[w] = v
        # column w of the image is column g^-1(w) of the original
        image = bits[:, inverse]
        for i, row in enumerate(image):
            j = pos[sum(weights[w] for w in row.nonzero()[0].tolist())]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: dict[int, list[int]] = {}
    for i, S in enumerate(masks):
        orbits.setdefault(find(i), []).append(S)
    return [orbits[r] for r in sorted(orbits)]


def truncations(Q: GroundTruth, up_to_symmetry: bool = False) -> Iterator[GroundTruth]:
    """Far-face truncations of Q at every proper face, or at one face per symmetry orbit."""
    if up_to_symmetry:
        for orbit in face_orbits(Q):
            yield far_face_truncation(Q, orbit[0])
    else:
        for S in Q.family.masks:
            yield far_face_truncation(Q, S)


def corpus_unbounded_extras() -> Iterator[GroundTruth]:
    """Cones, cone products, unbounded prisms and the ray."""
    yield ray_fixture()
    for m in range(3, 9):
        yield cone(m)
    for k in (3, 4, 5):
        for m in range(4, 9):
            yield cone_product(polygon(k), m)
    bases = [segment()] + [polygon(k) for k in range(3, 9)] + [simplex(d) for d in range(2, 6)]
    bases += [product(_factor(a), _factor(b)) for a, b in combinations_with_replacement(PRODUCT_FACTORS, 2)]
    for B in bases:
        yield unbounded_prism(B)


def corpus(up_to_symmetry: bool = False) -> Iterator[GroundTruth]:
    """Every corpus instance: polytopes, all their far-face truncations, extras."""
    for Q in corpus_polytopes():
        yield Q
        yield from truncations(Q, up_to_symmetry)
    yield from corpus_unbounded_extras()


# --- expression grammar -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<sym>[(),=\[\]]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise GrammarError(pos, f"unexpected character {text[pos]!r}")
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise GrammarError(tok[2], f"expected {want}, got {got!r}")
        self.i += 1
        return tok

    def parse(self) -> GroundTruth:
        gt = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise GrammarError(tok[2], f"unexpected trailing {tok[1]!r}")
        return gt

    def arg(self):
        tok = self.peek()
        if tok[0] == "num":
            self.i += 1
            return int(tok[1])
        if tok[0] == "name" and tok[1] == "far":
            self.i += 1
            self.take("sym", "=")
            self.take("sym", "[")
            ids = []
            if self.peek()[1] != "]":
                ids.append(int(self.take("num")[1]))
                while self.peek()[1] == ",":
                    self.i += 1
                    ids.append(int(self.take("num")[1]))
            self.take("sym", "]")
            return ("far", ids, tok[2])
        return self.expr()

    def expr(self) -> GroundTruth:
        name_tok = self.take("name")
        name, pos = name_tok[1], name_tok[2]
        if self.peek()[1] != "(" and name in _CONSTRUCTORS and not _CONSTRUCTORS[name][1]:
            # nullary constructors may drop the parentheses: product(segment, polygon(4))
            return _apply(name, [], pos)
        self.take("sym", "(")
        args = []
        if self.peek()[1] != ")":
            args.append(self.arg())
            while self.peek()[1] == ",":
                self.i += 1
                args.append(self.arg())
        self.take("sym", ")")
        try:
            return _apply(name, args, pos)
        except GrammarError:
            raise
        except (BadParameters, UnboundedInput, BadFarFace, TypeError, ValueError) as exc:
            raise GrammarError(pos, f"{name}: {exc}") from None


_KIND_OK = {
    "expr": lambda a: isinstance(a, GroundTruth),
    "int": lambda a: isinstance(a, int),
    "far": lambda a: isinstance(a, tuple) and a[0] == "far",
}

_CONSTRUCTORS = {
    "polygon": (polygon, ("int",)),
    "simplex": (simplex, ("int",)),
    "segment": (segment, ()),
    "ray": (ray_fixture, ()),
    "cone": (cone, ("int",)),
    "prism": (prism, ("expr",)),
    "pyramid": (pyramid, ("expr",)),
    "uprism": (unbounded_prism, ("expr",)),
    "coneprod": (cone_product, ("expr", "int")),
}


def _apply(name: str, args: list, pos: int) -> GroundTruth:
    if name == "product":
        if len(args) < 2 or not all(isinstance(a, GroundTruth) for a in args):
            raise GrammarError(pos, "product takes two or more expressions")
        P = args[0]
        for B in args[1:]:
            P = product(P, B)
        return P
    if name == "truncate":
        if len(args) != 2 or not _KIND_OK["expr"](args[0]) or not _KIND_OK["far"](args[1]):
            raise GrammarError(pos, "truncate takes an expression and far=[...]")
        Q, (_, ids, fpos) = args
        if any(v < 1 or v > Q.matrix.n for v in ids):
            raise GrammarError(fpos, f"far vertex ids are 1-based in 1..{Q.matrix.n}")
        return far_face_truncation(Q, [v - 1 for v in ids])
    if name not in _CONSTRUCTORS:
        raise GrammarError(pos, f"unknown constructor {name!r}")
    fn, kinds = _CONSTRUCTORS[name]
    if len(args) != len(kinds):
        raise GrammarError(pos, f"{name} takes {len(kinds)} argument(s), got {len(args)}")
    for a, k in zip(args, kinds):
        if not _KIND_OK[k](a):
            raise GrammarError(pos, f"{name}: expected {k} argument")
    return fn(*args)


def parse_expression(text: str) -> GroundTruth:
    """Build an instance from e.g. ``truncate(pyramid(polygon(4)), far=[5])``.

    Vertex ids inside ``far=[...]`` are 1-based.
    """
    return _Parser(text).parse()
