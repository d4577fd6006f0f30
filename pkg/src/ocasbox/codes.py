"""GF(2) polynomials and polynomial-code classification of LCS subspaces.

Orientation: the leftmost codeword coordinate is the constant term, so the
selector word ``v`` (first coordinate = most significant of ``n`` bits)
maps to the polynomial sum of X^(i-1) over set coordinates i.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import gf2
from .errors import DomainError

ORIENTATION_NOTE = "leftmost codeword coordinate = constant term"


@dataclass(frozen=True, order=True)
class Gf2Poly:
    """Polynomial over GF(2); bit i of ``value`` is the coefficient of X^i."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("polynomial mask must be non-negative")

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return self.value.bit_length() - 1

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        if self.value == 0:
            return "0"
        terms = []
        for i in range(self.value.bit_length()):
            if (self.value >> i) & 1:
                terms.append("1" if i == 0 else "X" if i == 1 else f"X^{i}")
        return " + ".join(terms)

    def hex(self) -> str:
        return format(self.value, "#x")

    @classmethod
    def parse(cls, text: str) -> "Gf2Poly":
        """Parse ascending or descending sparse form, e.g. ``1 + X + X^4``."""
        value = 0
        for term in text.replace(" ", "").split("+"):
            if term in ("", "0"):
                continue
            if term == "1":
                power = 0
            else:
                m = re.fullmatch(r"X(?:\^(\d+))?", term, flags=re.IGNORECASE)
                if not m:
                    raise ValueError(f"cannot parse polynomial term {term!r}")
                power = int(m.group(1) or 1)
            value ^= 1 << power
        return cls(value)

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        a, b, out = self.value, other.value, 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return Gf2Poly(out)


def poly_mod(a: Gf2Poly, m: Gf2Poly) -> Gf2Poly:
    if m.is_zero():
        raise ValueError("zero modulus")
    r = a.value
    dm = m.degree
    while r.bit_length() - 1 >= dm:
        r ^= m.value << (r.bit_length() - 1 - dm)
    return Gf2Poly(r)


def divides(g: Gf2Poly, a: Gf2Poly) -> bool:
    return poly_mod(a, g).is_zero()


def vector_as_poly(v: int, n: int) -> Gf2Poly:
    """Coordinate i (1-based, i=1 the MSB of the n-bit word) -> X^(i-1)."""
    if not 0 <= v < 1 << n:
        raise ValueError(f"vector {v} does not fit in {n} bits")
    return Gf2Poly(int(format(v, f"0{n}b")[::-1], 2) if n else 0)


def poly_as_vector(p: Gf2Poly, n: int) -> int:
    if p.degree >= n:
        raise ValueError(f"polynomial of degree {p.degree} does not fit length {n}")
    return int(format(p.value, f"0{n}b")[::-1], 2) if n else 0


@dataclass(frozen=True)
class PolynomialCode:
    n: int
    k: int
    generator: Gf2Poly
    cyclic: bool

    @property
    def full_length(self) -> bool:
        """Whether the generator has degree n - k, i.e. the shift rows reach the last column."""
        return self.k == self.n - self.generator.degree

    def generator_matrix(self) -> list[int]:
        """The k shift rows as selector words (row i = X^i * g)."""
        return [poly_as_vector(Gf2Poly(self.generator.value << i), self.n) for i in range(self.k)]

    def codewords(self) -> list[int]:
        return gf2.span(gf2.rref(self.generator_matrix()))


def extract_generator(code_members: Iterable[int], n: int) -> Optional[PolynomialCode]:
    """Generator polynomial of the code spanned by ``code_members``.

    The minimal-degree nonzero codeword g is the candidate; the code is a
    polynomial code iff g, Xg, ..., X^(k-1)g all lie in it. Returns None
    when they do not.
    """
    members = {int(m) for m in code_members} - {0}
    if not members:
        raise ValueError("empty code")
    if not gf2.is_subspace(members):
        raise DomainError("members do not form a subspace")
    polys = sorted(vector_as_poly(v, n) for v in members)
    if len(polys) > 1 and polys[1].degree == polys[0].degree:
        raise DomainError(f"two distinct minimal-degree codewords: {polys[0]} and {polys[1]}")
    return generator_from_basis(gf2.rref(members), n)


_CYCLIC_CACHE: dict[tuple[int, int], bool] = {}


def generator_from_basis(basis: list[int], n: int) -> Optional[PolynomialCode]:
    """:func:`extract_generator` for a subspace given by an rref basis.

    Works on selector words directly: the polynomial degree of a word is
    n - 1 minus its lowest set bit, and multiplying by X is a right shift.
    """
    k = len(basis)
    if k == 0:
        raise ValueError("empty code")
    g = max(gf2.span(basis)[1:], key=lambda v: v & -v)
    for i in range(1, k):
        if (g >> i) << i != g or not gf2.in_span(g >> i, basis):
            return None
    poly = vector_as_poly(g, n)
    key = (poly.value, n)
    if key not in _CYCLIC_CACHE:
        _CYCLIC_CACHE[key] = divides(poly, Gf2Poly((1 << n) | 1))
    return PolynomialCode(n, k, poly, _CYCLIC_CACHE[key])


def is_cyclically_closed(codewords: Iterable[int], n: int) -> bool:
    """Direct check that every rotation of every codeword stays in the set."""
    s = set(codewords)
    mask = (1 << n) - 1
    return all((((c >> 1) | (c << (n - 1))) & mask) in s for c in s)


@dataclass
class Classification:
    """Counts of LCS subspaces per (dimension, generator polynomial)."""

    classes: Counter = field(default_factory=Counter)
    non_polynomial: int = 0
    cyclic: dict = field(default_factory=dict)

    def add(self, code: Optional[PolynomialCode], count: int = 1):
        if code is None:
            self.non_polynomial += count
            return
        key = (code.k, code.generator.value)
        self.classes[key] += count
        self.cyclic[key] = code.cyclic

    def ordered(self) -> list[tuple[int, Gf2Poly, int]]:
        keys = sorted(self.classes, key=lambda kv: (-kv[0], kv[1]))
        return [(k, Gf2Poly(p), self.classes[(k, p)]) for k, p in keys]

    def to_csv(self, diameter: int) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["diameter", "dimension", "generator", "count"])
        for k, poly, count in self.ordered():
            writer.writerow([diameter, k, str(poly), count])
        return buf.getvalue()


def classify_generators(results) -> Classification:
    """Group LCS results (with dimension >= 1) by generator polynomial."""
    out = Classification()
    for res in results:
        if res.dimension < 1:
            raise ValueError("cannot classify a zero-dimensional LCS")
        out.add(extract_generator(res.members, res.n))
    return out
