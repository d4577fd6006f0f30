import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ocasbox import gf2
from ocasbox.codes import (
    Classification,
    Gf2Poly,
    PolynomialCode,
    classify_generators,
    divides,
    extract_generator,
    generator_from_basis,
    is_cyclically_closed,
    poly_as_vector,
    poly_mod,
    vector_as_poly,
)
from ocasbox.errors import DomainError
from ocasbox.sbox import LcsResult, linear_components_space
from ocasbox.ca import SBox
from ocasbox.verify import iter_oca_sboxes

P = Gf2Poly.parse


class TestGf2:
    def test_rref_canonical(self):
        assert gf2.rref([0b110, 0b011]) == gf2.rref([0b101, 0b011]) == [0b101, 0b011]

    def test_rank_and_span(self):
        basis = gf2.rref([0b1100, 0b0110, 0b1010])
        assert gf2.rank([0b1100, 0b0110, 0b1010]) == 2
        assert gf2.span(basis) == [0, 0b0110, 0b1010, 0b1100]

    def test_kernel(self):
        rows = [0b01, 0b10, 0b11]
        assert gf2.kernel(rows) == [0b111]

    @given(st.lists(st.integers(0, 255), max_size=10))
    def test_span_matches_closure(self, vectors):
        basis = gf2.rref(vectors)
        members = gf2.span(basis)
        assert len(members) == 1 << len(basis)
        assert gf2.is_subspace(members)
        assert all(gf2.in_span(v, basis) for v in vectors)

    @given(st.lists(st.integers(0, 255), min_size=1, max_size=12))
    def test_kernel_vectors_vanish(self, rows):
        for comb in gf2.kernel(rows):
            acc = 0
            for i, r in enumerate(rows):
                if (comb >> i) & 1:
                    acc ^= r
            assert acc == 0
        assert len(gf2.kernel(rows)) == len(rows) - gf2.rank(rows)

    def test_not_subspace(self):
        assert not gf2.is_subspace([1, 2])


class TestPoly:
    def test_str_and_parse(self):
        p = P("1 + X + X^4")
        assert p.value == 0b10011
        assert str(p) == "1 + X + X^4"
        assert p.hex() == "0x13"
        assert P("X^4 + X + 1") == p
        assert str(Gf2Poly(0)) == "0"

    def test_parse_error(self):
        with pytest.raises(ValueError):
            P("1 + Y")

    def test_mod(self):
        assert poly_mod(P("X^3 + 1"), P("X + 1")).is_zero()
        assert poly_mod(P("X^2 + X + 1"), P("X + 1")) == P("1")
        a = P("1 + X^2 + X^5")
        assert poly_mod(a, a).is_zero()
        with pytest.raises(ValueError):
            poly_mod(a, Gf2Poly(0))

    @given(st.integers(1, 1 << 12), st.integers(1, 1 << 12))
    def test_mul_then_divide(self, a, b):
        assert divides(Gf2Poly(a), Gf2Poly(a) * Gf2Poly(b))

    def test_degree(self):
        assert Gf2Poly(0).degree == -1
        assert P("1").degree == 0
        assert P("X^7 + X").degree == 7


class TestVectorPoly:
    def test_leftmost_is_constant(self):
        assert vector_as_poly(0b100000, 6) == P("1")

    def test_d4_generator_word(self):
        assert vector_as_poly(0b100100, 6) == P("1 + X^3")

    def test_zero(self):
        assert vector_as_poly(0, 6).is_zero()

    def test_too_wide(self):
        with pytest.raises(ValueError):
            vector_as_poly(1 << 6, 6)
        with pytest.raises(ValueError):
            poly_as_vector(P("X^6"), 6)

    @pytest.mark.parametrize("n", [1, 4, 8, 10])
    def test_roundtrip(self, n):
        for v in range(0, 1 << n, max(1, (1 << n) // 97)):
            assert poly_as_vector(vector_as_poly(v, n), n) == v


class TestExtract:
    def test_shifts_of_one_plus_x(self):
        code = extract_generator(gf2.span([0b1100, 0b0110, 0b0011]), 4)
        assert code.generator == P("1 + X") and code.k == 3 and code.cyclic
        assert code.full_length

    def test_single_codeword(self):
        code = extract_generator([0b1011], 4)
        assert code.generator == P("1 + X^2 + X^3") and code.k == 1
        assert not code.cyclic

    def test_not_polynomial(self):
        # {1000, 0100} has minimal-degree word X, whose shift X^2 is outside
        assert extract_generator(gf2.span([0b1000, 0b0001]), 4) is None

    def test_empty(self):
        with pytest.raises(ValueError):
            extract_generator([], 4)
        with pytest.raises(ValueError):
            generator_from_basis([], 4)

    def test_not_subspace(self):
        with pytest.raises(DomainError):
            extract_generator([0b1000, 0b0100], 4)

    def test_generator_matrix_spans_code(self):
        members = gf2.span([0b110000, 0b011000, 0b001100])
        code = extract_generator(members, 6)
        assert code.codewords() == members
        assert code.generator_matrix() == [0b110000, 0b011000, 0b001100]

    def test_short_generator_flagged(self):
        # 1 + X + X^4 with k = 3 in length 8: shift rows stop one column early
        code = PolynomialCode(8, 3, P("1 + X + X^4"), False)
        assert not code.full_length

    def test_fast_path_matches_definition(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            n = int(rng.integers(2, 9))
            basis = gf2.rref(int(x) for x in rng.integers(1, 1 << n, int(rng.integers(1, n + 1))))
            members = gf2.span(basis)[1:]
            fast = generator_from_basis(basis, n)
            polys = sorted(vector_as_poly(v, n) for v in members)
            g = polys[0]
            k = len(basis)
            shifts_ok = all(
                g.degree + i < n and gf2.in_span(poly_as_vector(Gf2Poly(g.value << i), n), basis)
                for i in range(k)
            )
            if shifts_ok:
                assert fast is not None and fast.generator == g and fast.k == k
            else:
                assert fast is None

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_cyclic_flag_matches_rotation_closure(self, n):
        # every cyclic code of length n is generated by a divisor of X^n + 1
        for g in range(1, 1 << n):
            poly = Gf2Poly(g)
            k = n - poly.degree
            code = PolynomialCode(n, k, poly, divides(poly, Gf2Poly((1 << n) | 1)))
            assert code.cyclic == is_cyclically_closed(code.codewords(), n)


def _lcs(d):
    n = 2 * (d - 1)
    return [linear_components_space(SBox(n, t)) for _, _, t in iter_oca_sboxes(d)]


class TestClassification:
    def test_d4_single_class(self):
        cls = classify_generators(_lcs(4))
        assert cls.ordered() == [(3, P("1 + X^3"), 32)]
        assert cls.cyclic[(3, P("1 + X^3").value)]
        assert cls.non_polynomial == 0

    def test_d4_codes_cyclically_closed(self):
        for lcs in _lcs(4):
            assert is_cyclically_closed([0] + lcs.members, 6)

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValueError):
            classify_generators([LcsResult(4, [], [])])

    def test_csv(self):
        cls = Classification()
        cls.add(PolynomialCode(6, 3, P("1 + X^3"), True), 32)
        cls.add(None, 2)
        assert cls.to_csv(4) == "diameter,dimension,generator,count\n4,3,1 + X^3,32\n"
        assert cls.non_polynomial == 2

    def test_aggregation_order_insensitive(self):
        codes = [PolynomialCode(8, 3, P(s), False) for s in ("1 + X^5", "1 + X + X^5", "1 + X^5")]
        outs = []
        for perm in itertools.permutations(codes):
            c = Classification()
            for code in perm:
                c.add(code)
            outs.append(c.ordered())
        assert all(o == outs[0] for o in outs)
