"""No-boundary cellular automata, their Latin squares and superposition S-boxes."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .boolfun import LocalRule
from .errors import DomainError


@dataclass(frozen=True)
class NoBoundaryCA:
    rule: LocalRule
    input_len: int

    def __post_init__(self):
        if self.input_len < self.rule.diameter:
            raise ValueError(
                f"input length {self.input_len} shorter than diameter {self.rule.diameter}"
            )

    @property
    def output_len(self) -> int:
        return self.input_len - self.rule.diameter + 1

    def table(self) -> np.ndarray:
        """Outputs on every input, as integers (first output cell is the MSB)."""
        return ca_output_table(self.rule, self.input_len)


def ca_output_table(rule: LocalRule, n: int) -> np.ndarray:
    d = rule.diameter
    if n < d:
        raise ValueError(f"input length {n} shorter than diameter {d}")
    local = rule.table.bits.astype(np.uint32)
    xs = np.arange(1 << n, dtype=np.uint32)
    window_mask = (1 << d) - 1
    out = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n - d + 1):
        out = (out << 1) | local[(xs >> (n - d - i)) & window_mask]
    return out


def apply_no_boundary(ca: NoBoundaryCA, cells) -> list[int]:
    cells = [int(c) & 1 for c in cells]
    if len(cells) != ca.input_len:
        raise ValueError(f"expected {ca.input_len} cells, got {len(cells)}")
    d = ca.rule.diameter
    out = []
    for i in range(ca.output_len):
        window = 0
        for c in cells[i : i + d]:
            window = (window << 1) | c
        out.append(ca.rule.table(window))
    return out


@dataclass(frozen=True)
class LatinSquare:
    entries: np.ndarray

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def to_rows(self) -> list[list[int]]:
        return self.entries.tolist()


def _require_bipermutive(*rules: LocalRule):
    for rule in rules:
        if not rule.is_bipermutive:
            raise DomainError(f"{rule} is not bipermutive")


def latin_square_from_rule(rule: LocalRule) -> LatinSquare:
    """Square whose (row, col) entry is the CA output on the input row||col."""
    _require_bipermutive(rule)
    b = rule.diameter - 1
    return LatinSquare(ca_output_table(rule, 2 * b).reshape(1 << b, 1 << b))


def _rows_are_permutations(m: np.ndarray) -> bool:
    order = m.shape[1]
    return bool(np.all(np.sort(m, axis=1) == np.arange(order)))


def is_latin(sq: LatinSquare) -> bool:
    m = np.asarray(sq.entries)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return _rows_are_permutations(m) and _rows_are_permutations(m.T)


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")
    n = a.order
    codes = a.entries.astype(np.int64).ravel() * n + b.entries.astype(np.int64).ravel()
    seen = np.zeros(n * n, dtype=bool)
    seen[codes] = True
    return bool(seen.all())


@dataclass(frozen=True)
class SBox:
    """An (n, n) vectorial Boolean function as a lookup table."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table)
        if table.shape != (1 << self.n,):
            raise ValueError(f"S-box table must have {1 << self.n} entries")
        if table.size and (table.min() < 0 or table.max() >= 1 << self.n):
            raise ValueError(f"S-box entries must be < 2^{self.n}")
        object.__setattr__(self, "table", table.astype(np.uint32))

    @classmethod
    def identity(cls, n: int) -> "SBox":
        return cls(n, np.arange(1 << n))

    def to_json(self) -> str:
        return json.dumps([int(v) for v in self.table])

    @classmethod
    def from_json(cls, text: str) -> "SBox":
        values = json.loads(text)
        return cls(len(values).bit_length() - 1, np.array(values, dtype=np.int64))

    def to_text(self) -> str:
        return " ".join(str(int(v)) for v in self.table)

    @classmethod
    def from_text(cls, text: str) -> "SBox":
        values = [int(tok) for tok in text.split()]
        return cls(len(values).bit_length() - 1, np.array(values, dtype=np.int64))


def _check_pair(f: LocalRule, g: LocalRule):
    if f.diameter != g.diameter:
        raise ValueError(f"diameter mismatch: {f.diameter} vs {g.diameter}")
    _require_bipermutive(f, g)


def superposition_sbox(f: LocalRule, g: LocalRule) -> SBox:
    """H(x) = F(x) || G(x): F fills the high half of each output word."""
    _check_pair(f, g)
    b = f.diameter - 1
    ft = ca_output_table(f, 2 * b)
    gt = ca_output_table(g, 2 * b)
    return SBox(2 * b, (ft << b) | gt)


def multipermutation_check(f: LocalRule, g: LocalRule) -> bool:
    """True iff the tuples (x, y, F(x||y), G(x||y)) pairwise differ in >= 3 blocks.

    Two distinct tuples agreeing on two blocks is the only way to differ in
    fewer than three, so it suffices that each of the six block pairs
    determines the input.
    """
    _check_pair(f, g)
    b = f.diameter - 1
    size = 1 << b
    xs = np.arange(size * size, dtype=np.int64)
    blocks = [
        xs >> b,
        xs & (size - 1),
        ca_output_table(f, 2 * b).astype(np.int64),
        ca_output_table(g, 2 * b).astype(np.int64),
    ]
    for i in range(4):
        for j in range(i + 1, 4):
            codes = blocks[i] * size + blocks[j]
            if np.unique(codes).size != codes.size:
                return False
    return True
