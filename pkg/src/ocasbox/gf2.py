"""Small GF(2) vector-space helpers on integer bit vectors.

Vectors are n-bit integers; "leftmost" coordinate means the most
significant bit, so a reduced row echelon form with leftmost pivots is a
basis sorted by descending leading bit with every pivot bit cleared from
the other rows.
"""

from __future__ import annotations

from typing import Iterable


def rref(vectors: Iterable[int]) -> list[int]:
    """Canonical reduced row echelon basis of the span of ``vectors``."""
    pivots: dict[int, int] = {}
    for v in vectors:
        v = int(v)
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    rows = [pivots[p] for p in sorted(pivots, reverse=True)]
    for i, row in enumerate(rows):
        top = row.bit_length() - 1
        for j in range(len(rows)):
            if j != i and (rows[j] >> top) & 1:
                rows[j] ^= row
    return sorted(rows, reverse=True)


def rank(vectors: Iterable[int]) -> int:
    return len(rref(vectors))


def span(basis: list[int]) -> list[int]:
    """All 2^k vectors in the span (including 0), sorted ascending."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return sorted(out)


def in_span(v: int, basis: list[int]) -> bool:
    """Membership test against a basis in :func:`rref` form."""
    for row in basis:
        top = row.bit_length() - 1
        if (v >> top) & 1:
            v ^= row
    return v == 0


def kernel(rows: list[int]) -> list[int]:
    """Basis of {v : XOR of rows[i] over set bits i of v == 0}.

    Bit ``i`` of a kernel vector selects ``rows[i]``.
    """
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for i, r in enumerate(rows):
        comb = 1 << i
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = (r, comb)
                break
            pr, pc = pivots[top]
            r ^= pr
            comb ^= pc
        else:
            out.append(comb)
    return out


def is_subspace(members: Iterable[int]) -> bool:
    """Whether ``members`` together with 0 is closed under XOR."""
    s = set(int(m) for m in members)
    s.add(0)
    return all((a ^ b) in s for a in s for b in s)
