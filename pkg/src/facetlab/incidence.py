"""Vertex-facet incidence matrices: the core type, text/JSON I/O and validation.

Rows are facets, columns are vertices, both 0-indexed.  A row is stored as
an int bitmask over the vertices, so ``rows[f] >> v & 1`` is the entry a_fv.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from facetlab._bits import iter_bits, to_list, to_mask, to_set
from facetlab.errors import EmptyFacet, OutOfRange, ParseError


@dataclass(frozen=True)
class IncidenceMatrix:
    """An m x n 0/1 matrix; duplicate rows are kept exactly as given."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an incidence matrix needs at least one vertex")
        if len(self.rows) < 1:
            raise ValueError("an incidence matrix needs at least one facet")
        full = (1 << self.n) - 1
        for f, row in enumerate(self.rows):
            if row == 0:
                raise EmptyFacet(f)
            if row & ~full:
                raise OutOfRange(f"row {f} references a vertex >= n={self.n}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], n: int) -> IncidenceMatrix:
        """Build from per-facet vertex lists."""
        return cls(n, tuple(to_mask(r) for r in rows))

    @classmethod
    def from_bits(cls, bits: Sequence[Sequence[int]] | np.ndarray) -> IncidenceMatrix:
        arr = np.asarray(bits, dtype=bool)
        if arr.ndim != 2:
            raise ValueError("expected a 2-dimensional 0/1 array")
        return cls(arr.shape[1], _pack_rows(arr))

    @property
    def m(self) -> int:
        return len(self.rows)

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Column v as a bitmask over the facets containing vertex v."""
        return _pack_rows(self.bits.T)

    @cached_property
    def bits(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        raw = b"".join(r.to_bytes(nbytes, "little") for r in self.rows)
        packed = np.frombuffer(raw, dtype=np.uint8).reshape(self.m, nbytes)
        out = np.unpackbits(packed, axis=1, bitorder="little")[:, : self.n].astype(bool)
        out.flags.writeable = False
        return out

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def row_set(self, f: int) -> frozenset[int]:
        return to_set(self.rows[f])

    def row_sums(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def column_sums(self) -> list[int]:
        return [c.bit_count() for c in self.columns]

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> IncidenceMatrix:
        """Matrix B with B[i][j] = self[row_perm[i]][col_perm[j]]."""
        if sorted(row_perm) != list(range(self.m)) or sorted(col_perm) != list(range(self.n)):
            raise ValueError("row_perm and col_perm must be permutations")
        B = self.bits[np.asarray(row_perm, dtype=np.intp)][:, np.asarray(col_perm, dtype=np.intp)]
        return IncidenceMatrix(self.n, _pack_rows(B))

    def __str__(self) -> str:
        return serialize_incidence(self)


def _pack_rows(arr: np.ndarray) -> tuple[int, ...]:
    """Rows of a 0/1 array as bitmasks (column j -> bit j)."""
    packed = np.packbits(arr.astype(bool), axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


def _row_string(row: int, n: int) -> str:
    return "".join("1" if row >> v & 1 else "0" for v in range(n))


def parse_incidence(text: str) -> IncidenceMatrix:
    """Parse the ``.vfi`` text format (or its JSON form).

    The text format is a header line ``m n`` followed by m lines of n
    characters from {0,1}.  Lines starting with ``#`` and blank lines are
    ignored.  Line numbers in errors are 1-based positions in ``text``.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)

    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        body.append((lineno, line))
    if not body:
        raise ParseError(1, "missing header line 'm n'")

    lineno, header = body[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(lineno, f"header must be two non-negative integers 'm n', got {header!r}")
    m, n = int(parts[0]), int(parts[1])
    if m == 0:
        raise ParseError(lineno, "m = 0: at least one facet is required")
    if n == 0:
        raise ParseError(lineno, "n = 0: at least one vertex is required")

    data = body[1:]
    if len(data) < m:
        last = data[-1][0] if data else lineno
        raise ParseError(last, f"expected {m} rows, found {len(data)}")
    if len(data) > m:
        raise ParseError(data[m][0], f"expected {m} rows, found extra data")

    rows = []
    for f, (ln, line) in enumerate(data):
        if len(line) != n:
            raise ParseError(ln, f"row has {len(line)} entries, expected {n}")
        bad = set(line) - {"0", "1"}
        if bad:
            raise ParseError(ln, f"invalid characters {''.join(sorted(bad))!r}; only 0 and 1 allowed")
        row = to_mask(v for v, ch in enumerate(line) if ch == "1")
        if row == 0:
            raise EmptyFacet(f)
        rows.append(row)
    return IncidenceMatrix(n, tuple(rows))


def _parse_json(text: str) -> IncidenceMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from None
    try:
        m, n, rows = int(doc["m"]), int(doc["n"]), doc["rows"]
    except (KeyError, TypeError, ValueError):
        raise ParseError(1, "JSON form needs integer 'm', 'n' and a 'rows' list") from None
    if m == 0 or n == 0:
        raise ParseError(1, "m and n must be positive")
    if len(rows) != m:
        raise ParseError(1, f"'rows' has {len(rows)} entries, expected {m}")
    masks = []
    for f, r in enumerate(rows):
        if any(not isinstance(v, int) or not 0 <= v < n for v in r):
            raise ParseError(1, f"row {f} has a vertex id outside 0..{n - 1}")
        if not r:
            raise EmptyFacet(f)
        masks.append(to_mask(r))
    return IncidenceMatrix(n, tuple(masks))


def serialize_incidence(A: IncidenceMatrix, format: str = "vfi") -> str:
    if format == "vfi":
        lines = [f"{A.m} {A.n}"] + [_row_string(r, A.n) for r in A.rows]
        return "\n".join(lines)
    if format == "json":
        return json.dumps({"m": A.m, "n": A.n, "rows": [to_list(r) for r in A.rows]})
    raise ValueError(f"unknown format {format!r}; use 'vfi' or 'json'")


def facets_containing(A: IncidenceMatrix, S: Iterable[int]) -> frozenset[int]:
    """Facets whose row contains every vertex of S (all facets for S empty)."""
    S = list(S)
    if any(not 0 <= v < A.n for v in S):
        raise OutOfRange(f"vertex set {sorted(S)} references a vertex outside 0..{A.n - 1}")
    mask = to_mask(S)
    return frozenset(f for f, row in enumerate(A.rows) if mask & ~row == 0)


@dataclass(frozen=True)
class Check:
    id: str
    passed: bool
    message: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, check_id: str) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "checks": [{"id": c.id, "passed": c.passed, "message": c.message} for c in self.checks],
        }


def validate(A: IncidenceMatrix, family=None) -> ValidationReport:
    """Necessary (not sufficient) conditions for a pointed-polyhedron incidence.

    C1 no all-zero row, C2 pairwise distinct columns, C3 connected graph on
    the vertices, C4 every member of the closure family induces a connected
    subgraph.  A precomputed closure ``family`` may be passed in.
    """
    from facetlab.graph import induces_connected, vertex_graph
    from facetlab.poset import vertex_set_closure

    checks = []
    empty = [f for f, r in enumerate(A.rows) if r == 0]
    checks.append(Check("C1", not empty, "no all-zero row" if not empty else f"all-zero rows {empty}"))

    seen: dict[int, int] = {}
    dup = None
    for v, col in enumerate(A.columns):
        if col in seen:
            dup = (seen[col], v)
            break
        seen[col] = v
    checks.append(Check("C2", dup is None,
                        "columns pairwise distinct" if dup is None else f"columns {dup[0]} and {dup[1]} are equal"))

    F = family if family is not None else vertex_set_closure(A)
    G = vertex_graph(F)
    connected = A.n <= 2 or induces_connected(G, A.full_mask)
    checks.append(Check("C3", connected, "vertex graph connected" if connected else "vertex graph is disconnected"))

    bad = next((S for S in F.masks if not induces_connected(G, S)), None)
    checks.append(Check("C4", bad is None,
                        "every closure member induces a connected subgraph" if bad is None
                        else f"member {to_list(bad)} induces a disconnected subgraph"))
    return ValidationReport(tuple(checks))
