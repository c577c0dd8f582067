"""Möbius function of the lattice obtained from a vertex-set family by adjoining
an artificial bottom and top, and an independent reduced-Euler-characteristic
oracle that enumerates the chains of the order complex directly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from facetlab._bits import iter_bits, to_list, to_mask
from facetlab.errors import NotMaximum, ResourceLimit
from facetlab.poset import VertexSetFamily

DEFAULT_CHAIN_LIMIT = 10**7
_INT64_SAFE = 1 << 62


class Marker(enum.Enum):
    BOTTOM = "bottom"
    TOP = "top"

    def __repr__(self):
        return self.name


BOTTOM = Marker.BOTTOM
TOP = Marker.TOP


@dataclass(frozen=True)
class MoebiusTable:
    """μ values keyed by member frozensets and the BOTTOM/TOP markers.

    With ``top_mode == "artificial"`` the key TOP holds μ(1̂).  With
    ``top_mode == "member"`` the family maximum ``top_member`` plays 1̂ and
    TOP is absent.
    """

    values: dict
    top_mode: str
    top_member: frozenset[int] | None = None

    @property
    def top_value(self) -> int:
        if self.top_mode == "artificial":
            return self.values[TOP]
        return self.values[self.top_member]

    def to_dict(self) -> dict:
        entries = [{"element": "bottom", "mu": self.values[BOTTOM]}]
        for key, val in self.values.items():
            if isinstance(key, frozenset):
                entries.append({"element": sorted(key), "mu": val})
        if self.top_mode == "artificial":
            entries.append({"element": "top", "mu": self.values[TOP]})
        return {
            "top_mode": self.top_mode,
            "top_member": sorted(self.top_member) if self.top_member is not None else None,
            "mobius": self.top_value,
            "values": entries,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def member_values(F: VertexSetFamily) -> list[int]:
    """μ(X) for every member X, bottom counted with μ(0̂) = 1.

    Evaluated level by level in ascending cardinality: members of equal size
    are incomparable, so a whole block depends only on earlier levels.
    """
    N = len(F)
    mu = np.zeros(N, dtype=np.int64)
    exact: list[int] | None = None
    for a, b, prev in F.level_blocks():
        if prev == 0:
            mu[a:b] = -1
            continue
        below = F.subsets_block(a, b, upto=prev)
        if exact is None:
            bound = int(np.abs(mu[:prev]).max()) * prev + 1
            if bound < _INT64_SAFE:
                mu[a:b] = -1 - below.astype(np.int64) @ mu[:prev]
                continue
            exact = [int(x) for x in mu[:a]]
        vals = np.array(exact[:prev], dtype=object)
        block = below.astype(object) @ vals
        exact.extend(int(-1 - s) for s in block)
    if exact is not None:
        return exact
    return [int(x) for x in mu]


def moebius_table(F: VertexSetFamily, top=None) -> MoebiusTable:
    """Evaluate the Möbius recursion over the family.

    ``top=None`` adjoins an artificial 1̂ above every member, even when the
    family already has a maximum.  Passing the family maximum as ``top``
    makes that member play the role of 1̂ instead.
    """
    values_list = member_values(F)
    values: dict = {BOTTOM: 1}
    for S, v in zip(F.members, values_list):
        values[S] = v
    if top is None:
        values[TOP] = -(1 + sum(values_list))
        return MoebiusTable(values, "artificial")

    mask = top if isinstance(top, int) else to_mask(top)
    if mask not in F.index:
        raise NotMaximum(f"{to_list(mask)} is not a member of the family")
    if F.maximum != mask:
        raise NotMaximum(f"{to_list(mask)} does not contain every member of the family")
    return MoebiusTable(values, "member", F.members[F.index[mask]])


def moebius_number(F: VertexSetFamily) -> int:
    """μ(1̂) with an artificial top; equals the reduced Euler characteristic of F."""
    return -(1 + sum(member_values(F)))


def count_chains(F: VertexSetFamily) -> int:
    """Number of nonempty chains of the family (faces of its order complex).

    Float accumulation; exact while the count stays below 2**53, which
    covers every use as a size cap.
    """
    N = len(F)
    c = np.zeros(N, dtype=np.float64)
    for a, b, prev in F.level_blocks():
        if prev == 0:
            c[a:b] = 1.0
            continue
        c[a:b] = 1.0 + F.subsets_block(a, b, upto=prev).astype(np.float64) @ c[:prev]
    return int(c.sum())


def _strictly_above(F: VertexSetFamily) -> tuple[np.ndarray, np.ndarray]:
    """CSR lists: members strictly containing each member.

    Built from one Python-int bitset per vertex (which members contain it),
    deliberately unrelated to the subset tests of the Möbius recursion.
    """
    masks = F.masks
    owners = [0] * F.n
    for i, m in enumerate(masks):
        for v in iter_bits(m):
            owners[v] |= 1 << i
    everyone = (1 << len(masks)) - 1
    indptr = [0]
    indices: list[int] = []
    for i, m in enumerate(masks):
        sup = everyone
        for v in iter_bits(m):
            sup &= owners[v]
        sup &= ~(1 << i)
        indices.extend(iter_bits(sup))
        indptr.append(len(indices))
    return np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64)


def face_numbers(F: VertexSetFamily, chain_limit: int = DEFAULT_CHAIN_LIMIT) -> list[int]:
    """f_0, f_1, ... of the order complex, counted by explicit enumeration.

    Chains are extended one member at a time by every strictly larger
    member.  All chains of a given size are materialized at once, each
    represented by its largest member; f_i is the number of chains with
    i + 1 members.
    """
    indptr, indices = _strictly_above(F)
    chains = np.arange(len(F), dtype=np.int64)
    counts: list[int] = []
    total = 0
    while chains.size:
        counts.append(int(chains.size))
        total += int(chains.size)
        lo, hi = indptr[chains], indptr[chains + 1]
        sizes = hi - lo
        grown = int(sizes.sum())
        if total + grown > chain_limit:
            raise ResourceLimit(f"order complex has more than {chain_limit} chains")
        # positions lo[k], lo[k] + 1, ..., hi[k] - 1 for every chain k
        offsets = np.arange(grown, dtype=np.int64) - np.repeat(np.cumsum(sizes) - sizes, sizes)
        chains = indices[np.repeat(lo, sizes) + offsets]
    return counts


def euler_oracle(F: VertexSetFamily, chain_limit: int = DEFAULT_CHAIN_LIMIT) -> int:
    """Reduced Euler characteristic: sum over i >= -1 of (-1)^i f_i, with f_{-1} = 1."""
    chi = -1
    for dim, count in enumerate(face_numbers(F, chain_limit)):
        chi += -count if dim % 2 else count
    return chi
