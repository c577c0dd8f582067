"""Vertex sets as Python int bitmasks (bit v set <=> vertex v present)."""

from collections.abc import Iterable, Iterator


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> list[int]:
    if mask.bit_count() * 16 < mask.bit_length():
        return list(iter_bits(mask))
    # the reversed binary string has bit 0 first
    return [i for i, c in enumerate(bin(mask)[:1:-1]) if c == "1"]


def to_set(mask: int) -> frozenset[int]:
    return frozenset(to_list(mask))


def canonical_key(mask: int) -> tuple[int, list[int]]:
    """Sort key: cardinality first, then the ascending vertex list."""
    return (mask.bit_count(), to_list(mask))


_REVERSED_BYTE = bytes(int(f"{b:08b}"[::-1], 2) for b in range(256))


def canonical_int_key(n: int):
    """Integer sort key on masks over n bits, same order as ``canonical_key``.

    Among sets of equal size, A precedes B lexicographically iff the lowest
    element of A ^ B lies in A, i.e. iff A is larger after reversing the
    bit string.
    """
    nbytes = max(1, (n + 7) // 8)

    def key(mask: int) -> tuple[int, int]:
        # bit reversal over 8 * nbytes bits: reverse each byte, read big-endian
        rev = int.from_bytes(mask.to_bytes(nbytes, "little").translate(_REVERSED_BYTE), "big")
        return (mask.bit_count(), -rev)

    return key


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0
