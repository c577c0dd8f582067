"""Circulant matrices M(n, d): construction, recognition up to row and column
permutations, and which circulants are incidence matrices of polyhedra.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from facetlab._bits import iter_bits
from facetlab.errors import BadParameters
from facetlab.incidence import IncidenceMatrix


class Realizability(str, enum.Enum):
    SIMPLEX = "Simplex"
    POLYGON = "Polygon"
    SEGMENT = "Segment"
    RAY = "Ray"
    NOT_POLYHEDRAL = "NotPolyhedral"


def _check_params(n: int, d: int):
    if not (isinstance(n, int) and isinstance(d, int) and 1 <= d <= n):
        raise BadParameters(f"circulant parameters need 1 <= d <= n, got n={n}, d={d}")


@lru_cache(maxsize=256)
def circulant(n: int, d: int) -> IncidenceMatrix:
    """Row i has ones exactly in columns i, i+1, ..., i+d-1 (mod n)."""
    _check_params(n, d)
    full = (1 << n) - 1
    block = (1 << d) - 1
    # rotate the block left by i within n bits
    return IncidenceMatrix(n, tuple(((block << i) | (block >> (n - i))) & full for i in range(n)))


@dataclass(frozen=True)
class CirculantWitness:
    """``A.permuted(row_perm, col_perm)`` equals M(n, d) entrywise."""

    n: int
    d: int
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def apply(self, A: IncidenceMatrix) -> IncidenceMatrix:
        return A.permuted(self.row_perm, self.col_perm)

    def verify(self, A: IncidenceMatrix) -> bool:
        return self.apply(A) == circulant(self.n, self.d)


def _cycle_order(nbrs: list[list[int]], first: int) -> list[int] | None:
    """Walk a 2-regular graph from node 0 via ``first``; None unless it is one n-cycle."""
    n = len(nbrs)
    order = [0, first]
    while len(order) < n:
        a, b = nbrs[order[-1]]
        nxt = b if a == order[-2] else a
        if nxt == 0:
            return None
        order.append(nxt)
    return order if 0 in nbrs[order[-1]] else None


def recognize_circulant(A: IncidenceMatrix) -> CirculantWitness | None:
    """Find permutations carrying A onto some M(n, d), or None.

    A witness is only returned after an entrywise check against M(n, d).
    """
    if A.m != A.n:
        return None
    n = A.n
    sums = set(A.row_sums()) | set(A.column_sums())
    if len(sums) != 1:
        return None
    d = sums.pop()
    identity = tuple(range(n))

    if d == n:
        witness = CirculantWitness(n, d, identity, identity)
    elif d == 1:
        # a permutation matrix: row k of M(n, 1) is the unit vector e_k
        owner = {next(iter_bits(r)): f for f, r in enumerate(A.rows)}
        witness = CirculantWitness(n, d, tuple(owner[k] for k in range(n)), identity)
    elif d == n - 1:
        # complement of a permutation matrix: row k of M(n, n-1) misses column k-1
        full = A.full_mask
        owner = {next(iter_bits(full & ~r)): f for f, r in enumerate(A.rows)}
        witness = CirculantWitness(n, d, tuple(owner[(k - 1) % n] for k in range(n)), identity)
    else:
        # column graph: columns sharing d - 1 ones must form an n-cycle
        X = A.bits.astype(np.int32)
        adj = (X.T @ X) == d - 1
        np.fill_diagonal(adj, False)
        if not (adj.sum(axis=1) == 2).all():
            return None
        nbrs = np.nonzero(adj)[1].reshape(n, 2).tolist()
        witness = None
        for first in nbrs[0]:
            order = _cycle_order(nbrs, first)
            if order is None:
                return None
            B = A.bits[:, order]
            # a row that is a cyclic interval has exactly one position where it starts
            starts = B & ~np.roll(B, 1, axis=1)
            if not (starts.sum(axis=1) == 1).all():
                return None
            s = starts.argmax(axis=1)
            row_at_start = np.full(n, -1)
            row_at_start[s] = np.arange(n)
            if (row_at_start < 0).any():
                continue
            witness = CirculantWitness(n, d, tuple(row_at_start.tolist()), tuple(order))
            if witness.verify(A):
                break
        if witness is None:
            return None

    return witness if witness.verify(A) else None


def is_simple_simplicial(A: IncidenceMatrix) -> int | None:
    """The circulant parameter d if A is a circulant up to permutations.

    For an incidence matrix of a polyhedron this is exactly the case of a
    simple and simplicial polyhedron, and d is its dimension.
    """
    w = recognize_circulant(A)
    return w.d if w is not None else None


def circulant_realizability(n: int, d: int) -> Realizability:
    """Which polyhedra have M(n, d) as vertex-facet incidence matrix."""
    _check_params(n, d)
    if (n, d) == (1, 1):
        return Realizability.RAY
    if (n, d) == (2, 1):
        return Realizability.SEGMENT
    if n == d + 1:
        return Realizability.SIMPLEX
    if d == 2 and n >= 3:
        return Realizability.POLYGON
    return Realizability.NOT_POLYHEDRAL
