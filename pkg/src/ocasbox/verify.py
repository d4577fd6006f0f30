"""Structural checks on the LCS of superposition S-boxes from nonlinear OCA."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .codes import generator_from_basis
from .sbox import LcsResult, lcs_bases_anf, linear_components_space
from .ca import SBox
from .search import SearchConfig, _candidates, shared_store
from . import kernels


def support_spans_both_halves(v: int, n: int) -> bool:
    """Selector touches both the first n/2 coordinates and the last n/2."""
    b = n // 2
    low = (1 << b) - 1
    return bool(v & low) and bool(v >> b)


def shift_closure_violations(lcs: LcsResult) -> list[tuple[int, int]]:
    """Pairs (v, shifted v) where a shiftable member's shift leaves the LCS.

    Right shift (coordinates move toward the end) applies when the last
    coordinate of both halves is zero; left shift when the first is.
    """
    n = lcs.n
    b = n // 2
    members = set(lcs.members)
    # coordinate i (1-based) is bit n - i of the selector word
    last_left, last_right = 1 << b, 1
    first_left, first_right = 1 << (n - 1), 1 << (b - 1)
    bad = []
    for v in lcs.members:
        if not v & (last_left | last_right) and (v >> 1) not in members:
            bad.append((v, v >> 1))
        if not v & (first_left | first_right) and (v << 1) not in members:
            bad.append((v, v << 1))
    return bad


@dataclass
class Finding:
    left: int
    right: int
    check: str
    detail: str

    def __str__(self):
        return f"rules (g={self.left:#x}, g={self.right:#x}): {self.check} violated: {self.detail}"


@dataclass
class VerifyResult:
    diameter: int
    sboxes: int = 0
    linear: int = 0
    findings: list = None

    def __post_init__(self):
        if self.findings is None:
            self.findings = []

    @property
    def ok(self) -> bool:
        return not self.findings


def _oca_pairs(d: int) -> tuple[np.ndarray, np.ndarray]:
    store = shared_store(d)
    left, right = _candidates(store, SearchConfig(d))
    _, pl, pr = kernels.scan_block(store.scan, store.truth, left, right, store.b, True)
    return pl, pr


def iter_oca_sboxes(d: int, batch: int = 4096) -> Iterator[tuple[int, int, np.ndarray]]:
    """(left index, right index, S-box table) for every nonlinear OCA pair."""
    store = shared_store(d)
    b = store.b
    pl, pr = _oca_pairs(d)
    for k in range(0, len(pl), batch):
        li, ri = pl[k : k + batch], pr[k : k + batch]
        tables = (store.natural(li).astype(np.uint32) << b) | store.natural(ri).astype(np.uint32)
        yield from zip(li.tolist(), ri.tolist(), tables)


def verify_diameter(d: int, walsh_lcs: Optional[bool] = None, limit: Optional[int] = None) -> VerifyResult:
    """Run the support, shift-closure and polynomial-code checks on every linear OCA S-box.

    ``walsh_lcs`` selects the LCS route: exhaustive Walsh testing of every
    selector (default up to d = 5) or the ANF kernel (default at d = 6).
    """
    if walsh_lcs is None:
        walsh_lcs = d <= 5
    n = 2 * (d - 1)
    out = VerifyResult(d)
    for count, (i, j, table) in enumerate(iter_oca_sboxes(d)):
        if limit is not None and count >= limit:
            break
        out.sboxes += 1
        s = SBox(n, table)
        if walsh_lcs:
            lcs = linear_components_space(s)
        else:
            lcs = LcsResult.from_basis(n, lcs_bases_anf(table[None, :], n)[0])
        if not np.array_equal(np.sort(table), np.arange(1 << n)):
            out.findings.append(Finding(i, j, "bijectivity", "table is not a permutation"))
        if lcs.dimension == 0:
            continue
        out.linear += 1
        for v in lcs.members:
            if not support_spans_both_halves(v, n):
                out.findings.append(Finding(i, j, "support condition", f"v={v:#x}"))
        for v, w in shift_closure_violations(lcs):
            out.findings.append(Finding(i, j, "shift closure", f"v={v:#x} shift={w:#x}"))
        if generator_from_basis(lcs.basis, n) is None:
            out.findings.append(Finding(i, j, "polynomial code", f"basis={lcs.hex_rows()}"))
    return out
