"""Vectorial metrics of S-boxes: components, nonlinearity, degree, LCS.

A component selector ``v`` is an n-bit word aligned with the output words
of the S-box, so its most significant bit picks the first coordinate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gf2, kernels
from .boolfun import LocalRule, TruthTable, algebraic_degree
from .ca import SBox, ca_output_table

# component truth tables materialised per Walsh batch
_BATCH_CELLS = 1 << 22


def _components(table: np.ndarray, selectors) -> np.ndarray:
    """0/1 matrix whose row r is the truth table of selectors[r] . S."""
    sel = np.asarray(selectors, dtype=np.uint32)
    return (np.bitwise_count(np.bitwise_and.outer(sel, table.astype(np.uint32))) & 1).astype(np.uint8)


def _max_abs_walsh(rows: np.ndarray) -> np.ndarray:
    spectra = kernels.fwht(1 - 2 * rows.astype(np.int64))
    return np.abs(spectra).max(axis=1)


def _batches(selectors: list[int], size: int):
    step = max(1, _BATCH_CELLS // size)
    for i in range(0, len(selectors), step):
        yield selectors[i : i + step]


def component_function(s: SBox, v: int) -> TruthTable:
    if v == 0:
        raise ValueError("component selector must be nonzero")
    if not 0 < v < 1 << s.n:
        raise ValueError(f"selector {v} does not fit in {s.n} bits")
    return TruthTable.from_bits(_components(s.table, [v])[0])


def selector_order(n: int) -> list[int]:
    """Nonzero selectors, paired-coordinate patterns e_i | e_{i+n/2} first.

    Superposition S-boxes whose rules share their nonlinear ANF terms have
    exactly those components affine, so early exit usually fires in the
    first few probes.
    """
    half = n // 2
    first = [(1 << (n - 1 - i)) | (1 << (n - 1 - i - half)) for i in range(half)] if half else []
    seen = set(first)
    return first + [v for v in range(1, 1 << n) if v not in seen]


def sbox_nonlinearity(s: SBox, early_exit: bool = False) -> int:
    size = 1 << s.n
    best = size // 2
    for chunk in _batches(selector_order(s.n), size):
        m = int(_max_abs_walsh(_components(s.table, chunk)).max())
        best = min(best, (size - m) // 2)
        if early_exit and best == 0:
            return 0
    return best


def sbox_degree(s: SBox) -> int:
    return max(algebraic_degree(component_function(s, 1 << i)) for i in range(s.n))


def is_bijective(s: SBox) -> bool:
    seen = np.zeros(1 << s.n, dtype=bool)
    seen[s.table] = True
    return bool(seen.all())


@dataclass(frozen=True)
class LcsResult:
    """Linear components space: selectors whose component is affine."""

    n: int
    members: list[int]
    basis: list[int] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @classmethod
    def from_basis(cls, n: int, vectors) -> "LcsResult":
        basis = gf2.rref(vectors)
        return cls(n, gf2.span(basis)[1:], basis)

    def hex_rows(self) -> list[str]:
        width = max(1, (self.n + 3) // 4)
        return [format(row, f"0{width}x") for row in self.basis]

    def to_dict(self, generator=None) -> dict:
        out = {"n": self.n, "dimension": self.dimension, "basis": self.hex_rows()}
        if generator is not None:
            out["generator_poly"] = str(generator)
        return out

    def to_json(self, generator=None) -> str:
        return json.dumps(self.to_dict(generator))


def linear_components_space(s: SBox) -> LcsResult:
    """Test every nonzero selector through the Walsh spectrum of its component."""
    size = 1 << s.n
    members = []
    for chunk in _batches(list(range(1, size)), size):
        peaks = _max_abs_walsh(_components(s.table, chunk))
        members.extend(int(v) for v, m in zip(chunk, peaks) if m == size)
    members.sort()
    return LcsResult(s.n, members, gf2.rref(members))


_NONLINEAR_MASKS: dict[int, np.ndarray] = {}


def _nonlinear_monomials(n: int) -> np.ndarray:
    if n not in _NONLINEAR_MASKS:
        _NONLINEAR_MASKS[n] = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)) >= 2
    return _NONLINEAR_MASKS[n]


def lcs_bases_anf(tables: np.ndarray, n: int) -> list[list[int]]:
    """LCS bases of a batch of S-boxes via the ANF of their coordinates.

    The ANF is linear in the function, so v . S is affine exactly when the
    degree >= 2 parts of the selected coordinate ANFs cancel: the LCS is
    the kernel of v -> XOR of those parts. Returns one rref basis per row
    of ``tables`` (shape ``(k, 2**n)``).
    """
    tables = np.atleast_2d(np.asarray(tables, dtype=np.uint32))
    k = tables.shape[0]
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint32)
    coords = ((tables[:, None, :] >> shifts[None, :, None]) & 1).astype(np.uint8)
    anf = kernels.mobius(coords.reshape(k * n, 1 << n)).reshape(k, n, 1 << n)
    anf &= _nonlinear_monomials(n)[None, None, :].astype(np.uint8)
    packed = np.packbits(anf, axis=2)
    out = []
    for i in range(k):
        rows = [int.from_bytes(packed[i, j].tobytes(), "big") for j in range(n)]
        # kernel() indexes rows by bit position; row j is coordinate j+1 (bit n-1-j)
        ker = gf2.kernel(rows[::-1])
        out.append(gf2.rref(ker))
    return out


def linear_components_space_anf(s: SBox) -> LcsResult:
    return LcsResult.from_basis(s.n, lcs_bases_anf(s.table[None, :], s.n)[0])


def ca_component_degrees(f: LocalRule, n: int) -> set[int]:
    """Algebraic degrees of all nonzero components of the length-n CA of ``f``."""
    table = ca_output_table(f, n)
    m = n - f.diameter + 1
    weights = np.bitwise_count(np.arange(1 << n, dtype=np.uint32))
    degrees = set()
    for chunk in _batches(list(range(1, 1 << m)), 1 << n):
        anf = kernels.mobius(_components(table, chunk))
        for row in anf:
            support = np.flatnonzero(row)
            degrees.add(int(weights[support].max()) if support.size else 0)
    return degrees


def coordinate_degree_check(f: LocalRule, n: int) -> bool:
    """Every nonzero component of the length-n CA has the degree of ``f``."""
    if n < f.diameter:
        raise ValueError(f"length {n} shorter than diameter {f.diameter}")
    return ca_component_degrees(f, n) == {algebraic_degree(f.table)}
