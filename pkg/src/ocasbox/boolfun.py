"""Boolean functions: truth tables, ANF, Walsh spectrum and derived metrics.

Inputs are indexed big-endian: the vector (x1, ..., xn) sits at index
``int(x1 x2 ... xn)`` with x1 the most significant bit. A truth table is
stored packed in a Python integer whose bit ``i`` is ``f(i)``, which makes
the packed value identical to the Wolfram number of the function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels

MAX_VARS = 16


def _popcounts(size: int) -> np.ndarray:
    return np.bitwise_count(np.arange(size, dtype=np.uint32)).astype(np.int64)


@dataclass(frozen=True)
class TruthTable:
    """Packed truth table of a Boolean function of ``n_vars`` variables."""

    n_vars: int
    value: int

    def __post_init__(self):
        if not 0 <= self.n_vars <= MAX_VARS:
            raise ValueError(f"n_vars must be in [0, {MAX_VARS}], got {self.n_vars}")
        if not 0 <= self.value < (1 << self.size):
            raise ValueError(f"truth table value out of range for {self.n_vars} variables")

    @property
    def size(self) -> int:
        return 1 << self.n_vars

    @property
    def bits(self) -> np.ndarray:
        nbytes = max(1, self.size // 8)
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.size].copy()

    @classmethod
    def from_bits(cls, bits) -> "TruthTable":
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        n = int(arr.size).bit_length() - 1
        if arr.size != 1 << n:
            raise ValueError(f"truth table length {arr.size} is not a power of two")
        if np.any(arr > 1):
            raise ValueError("truth table entries must be 0 or 1")
        packed = np.packbits(arr, bitorder="little").tobytes()
        return cls(n, int.from_bytes(packed, "little"))

    @classmethod
    def from_hex(cls, text: str, n_vars: int) -> "TruthTable":
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        try:
            value = int(text, 16)
        except ValueError:
            raise ValueError(f"malformed hex truth table {text!r}") from None
        return cls(n_vars, value)

    def to_hex(self) -> str:
        digits = max(1, self.size // 4)
        return format(self.value, f"0{digits}x")

    def __call__(self, x: int) -> int:
        return (self.value >> x) & 1

    def weight(self) -> int:
        return self.value.bit_count()

    def __str__(self):
        return self.to_hex()


@dataclass(frozen=True)
class AnfCoefficients:
    n_vars: int
    coeffs: np.ndarray

    def monomials(self) -> list[int]:
        return [int(u) for u in np.flatnonzero(self.coeffs)]

    def to_string(self, first_var: int = 1) -> str:
        """Render as e.g. ``x1*x2 + x3``; ``0`` for the zero polynomial."""
        terms = []
        for u in self.monomials():
            if u == 0:
                terms.append("1")
                continue
            vars_ = [f"x{i + first_var}" for i in range(self.n_vars) if (u >> (self.n_vars - 1 - i)) & 1]
            terms.append("*".join(vars_))
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class WalshSpectrum:
    n_vars: int
    coeffs: np.ndarray

    def max_abs(self) -> int:
        return int(np.abs(self.coeffs).max())


@dataclass(frozen=True)
class LocalRule:
    """A CA local rule of a given diameter, with its bipermutive decomposition."""

    table: TruthTable
    generating: Optional[TruthTable] = None

    @classmethod
    def from_table(cls, table: TruthTable) -> "LocalRule":
        if table.n_vars < 2:
            raise ValueError("local rules need diameter >= 2")
        return cls(table, bipermutive_decompose(table))

    @classmethod
    def from_wolfram(cls, number: int, d: int) -> "LocalRule":
        return cls.from_table(truth_table_from_wolfram(number, d))

    @property
    def diameter(self) -> int:
        return self.table.n_vars

    @property
    def wolfram(self) -> int:
        return self.table.value

    @property
    def is_bipermutive(self) -> bool:
        return self.generating is not None

    def __str__(self):
        return f"rule {self.wolfram} (d={self.diameter})"


def truth_table_from_wolfram(number: int, d: int) -> TruthTable:
    if not 1 <= d <= MAX_VARS:
        raise ValueError(f"diameter must be in [1, {MAX_VARS}], got {d}")
    if not 0 <= number < 1 << (1 << d):
        raise ValueError(f"Wolfram number {number} out of range for diameter {d}")
    return TruthTable(d, number)


def mobius_transform(t: TruthTable) -> AnfCoefficients:
    return AnfCoefficients(t.n_vars, kernels.mobius(t.bits))


def algebraic_degree(t: TruthTable) -> int:
    """Largest monomial size in the ANF; 0 for constant functions."""
    coeffs = mobius_transform(t).coeffs
    support = np.flatnonzero(coeffs)
    if support.size == 0:
        return 0
    return int(_popcounts(t.size)[support].max())


def walsh_transform(t: TruthTable) -> WalshSpectrum:
    signs = 1 - 2 * t.bits.astype(np.int64)
    return WalshSpectrum(t.n_vars, kernels.fwht(signs))


def nonlinearity(t: TruthTable) -> int:
    spectrum = walsh_transform(t)
    return (t.size - spectrum.max_abs()) // 2


def is_balanced(t: TruthTable) -> bool:
    return 2 * t.weight() == t.size


def _bipermutive_value(g: TruthTable, d: int) -> int:
    # f(x1..xd) = x1 ^ g(x2..x_{d-1}) ^ xd, indexed big-endian
    value = 0
    mid_mask = (1 << (d - 2)) - 1
    for x in range(1 << d):
        bit = (x >> (d - 1)) ^ g((x >> 1) & mid_mask) ^ (x & 1)
        value |= (bit & 1) << x
    return value


def bipermutive_decompose(t: TruthTable) -> Optional[TruthTable]:
    """Generating function g if ``t`` has the form x1 ^ g(x2..x_{d-1}) ^ xd."""
    d = t.n_vars
    if d < 2:
        raise ValueError("bipermutive rules need diameter >= 2")
    # g(m) = f(0, m, 0)
    g_value = 0
    for m in range(1 << (d - 2)):
        g_value |= t(m << 1) << m
    g = TruthTable(d - 2, g_value)
    if _bipermutive_value(g, d) != t.value:
        return None
    return g


def bipermutive_from_generating(g: TruthTable, d: int) -> LocalRule:
    if d < 2 or g.n_vars != d - 2:
        raise ValueError(f"generating function must have {d - 2} variables for diameter {d}")
    return LocalRule(TruthTable(d, _bipermutive_value(g, d)), g)


def bipermutive_rules(d: int) -> list[LocalRule]:
    """All bipermutive rules of diameter ``d``, indexed by generating function value."""
    return [bipermutive_from_generating(TruthTable(d - 2, v), d) for v in range(1 << (1 << (d - 2)))]
