"""The family of vertex sets of nontrivial faces, ordered by inclusion.

The family is the intersection closure of the rows of an incidence matrix,
taken over nonempty row subsets only.  Members are int bitmasks kept in
canonical order: ascending cardinality, then lexicographic vertex lists.
Order queries are answered by subset tests; for bulk work the inclusion
relation is evaluated block by block with a 0/1 matrix product
(|T & X| == |T|  <=>  T is a subset of X).
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from facetlab._bits import canonical_int_key, to_list, to_mask, to_set
from facetlab.errors import NotAMember, ResourceLimit
from facetlab.incidence import IncidenceMatrix

DEFAULT_MEMBER_LIMIT = 10**6
_BLOCK = 1024
# families up to this size keep their subset blocks (about N^2 / 2 bytes)
_CACHE_MEMBERS = 6000


@dataclass(frozen=True)
class VertexSetFamily:
    n: int
    masks: tuple[int, ...]
    origin_rows: tuple[bool, ...]

    @cached_property
    def members(self) -> tuple[frozenset[int], ...]:
        return tuple(to_set(m) for m in self.masks)

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.masks)}

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, S) -> bool:
        return _as_mask(S) in self.index

    def index_of(self, S) -> int:
        mask = _as_mask(S)
        try:
            return self.index[mask]
        except KeyError:
            raise NotAMember(f"{sorted(to_list(mask))} is not a member of the family") from None

    @property
    def maximum(self) -> int | None:
        """The member containing all others, if there is one."""
        if not self.masks:
            return None
        top = self.masks[-1]
        union = 0
        for m in self.masks:
            union |= m
        return top if union == top else None

    @cached_property
    def bit_matrix(self) -> np.ndarray:
        """Members as rows of a 0/1 float32 matrix (float for BLAS matmuls)."""
        return _unpack(self.masks, self.n)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([m.bit_count() for m in self.masks], dtype=np.float32)

    @cached_property
    def level_starts(self) -> tuple[int, ...]:
        """Index of the first member of each cardinality, plus len(self)."""
        starts = []
        prev = None
        for i, m in enumerate(self.masks):
            c = m.bit_count()
            if c != prev:
                starts.append(i)
                prev = c
        starts.append(len(self.masks))
        return tuple(starts)

    def level_blocks(self, block: int = _BLOCK) -> Iterator[tuple[int, int, int]]:
        """Ranges (start, stop, level_start), each inside one cardinality level.

        A block is an antichain; everything strictly below its members lies
        in ``range(level_start)``.
        """
        starts = self.level_starts
        for lo, hi in zip(starts, starts[1:]):
            for a in range(lo, hi, block):
                yield a, min(a + block, hi), lo

    def subsets_block(self, start: int, stop: int, upto: int | None = None) -> np.ndarray:
        """Boolean matrix M with M[i - start, j] = (members[j] is a subset of members[i]).

        Columns run over ``range(upto)`` (default: every member).
        """
        if upto is None:
            upto = len(self.masks)
        key = (start, stop, upto)
        cache = self._block_cache
        if key in cache:
            return cache[key]
        B = self.bit_matrix
        inter = B[start:stop] @ B[:upto].T
        out = inter == self.sizes[None, :upto]
        if len(self.masks) <= _CACHE_MEMBERS:
            cache[key] = out
        return out

    @cached_property
    def _block_cache(self) -> dict:
        return {}

    def within(self, masks) -> np.ndarray:
        """Boolean matrix W with W[k, j] = (members[j] is a subset of masks[k])."""
        return (_unpack(masks, self.n) @ self.bit_matrix.T) == self.sizes[None, :]

    def to_dict(self) -> dict:
        return {"n": self.n, "members": [to_list(m) for m in self.masks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _unpack(masks, n: int) -> np.ndarray:
    """0/1 float32 matrix with one row per mask."""
    nbytes = max(1, (n + 7) // 8)
    raw = b"".join(m.to_bytes(nbytes, "little") for m in masks)
    bytes_ = np.frombuffer(raw, dtype=np.uint8).reshape(len(masks), nbytes)
    return np.unpackbits(bytes_, axis=1, bitorder="little")[:, :n].astype(np.float32)


def _as_mask(S) -> int:
    if isinstance(S, int):
        return S
    return to_mask(S)


def _make_family(n: int, masks: Iterable[int], rows: set[int]) -> VertexSetFamily:
    ordered = sorted(set(masks), key=canonical_int_key(n))
    return VertexSetFamily(n, tuple(ordered), tuple(m in rows for m in ordered))


def vertex_set_closure(A: IncidenceMatrix, limit: int = DEFAULT_MEMBER_LIMIT) -> VertexSetFamily:
    """All nonempty intersections of nonempty sets of rows of ``A``.

    Worklist closure: every new member is intersected with every row, which
    reaches every intersection of row subsets.
    """
    rows = list(dict.fromkeys(A.rows))
    seen = set(rows)
    if len(seen) > limit:
        raise ResourceLimit(f"closure exceeds {limit} members")
    frontier = list(rows)
    while frontier:
        nxt = []
        for X in frontier:
            for R in rows:
                Y = X & R
                if Y and Y not in seen:
                    seen.add(Y)
                    nxt.append(Y)
        if len(seen) > limit:
            raise ResourceLimit(f"closure exceeds {limit} members")
        frontier = nxt
    return _make_family(A.n, seen, set(rows))


def family_from_sets(n: int, sets: Iterable[Iterable[int]]) -> VertexSetFamily:
    """Wrap an arbitrary collection of vertex sets (no closure is taken)."""
    masks = [_as_mask(s) for s in sets]
    if any(m == 0 for m in masks):
        raise ValueError("the empty set is never a family member")
    return _make_family(n, masks, set())


def longest_chain(F: VertexSetFamily) -> tuple[int, list[frozenset[int]]]:
    """Largest number of members in a strictly increasing chain, plus one such chain."""
    N = len(F)
    if N == 0:
        raise ValueError("longest_chain of an empty family")
    length = np.ones(N, dtype=np.int64)
    for a, b, prev in F.level_blocks():
        if prev == 0:
            continue
        below = F.subsets_block(a, b, upto=prev).astype(np.float32)
        top = int(length[:prev].max())
        # hits[i, L - 1] = number of members of length L below member a + i
        onehot = (length[:prev, None] == np.arange(1, top + 1)[None, :]).astype(np.float32)
        hits = below @ onehot > 0
        best = np.where(hits.any(axis=1), top - hits[:, ::-1].argmax(axis=1), 0)
        length[a:b] = best + 1
    end = int(length.argmax())
    chain = [end]
    while length[chain[-1]] > 1:
        i = chain[-1]
        x = F.masks[i]
        # proper subsets of members come earlier in canonical order
        candidates = np.flatnonzero(length[:i] == length[i] - 1).tolist()
        chain.append(next(j for j in candidates if F.masks[j] & ~x == 0))
    chain.reverse()
    return int(length[end]), [to_set(F.masks[i]) for i in chain]


def sub_family_below(F: VertexSetFamily, S) -> VertexSetFamily:
    """Members contained in the member S (S included)."""
    top = F.masks[F.index_of(S)]
    keep = [(m, o) for m, o in zip(F.masks, F.origin_rows) if m & ~top == 0]
    return VertexSetFamily(F.n, tuple(m for m, _ in keep), tuple(o for _, o in keep))
