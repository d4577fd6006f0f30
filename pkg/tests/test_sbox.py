import numpy as np
import pytest

from ocasbox import gf2
from ocasbox.boolfun import LocalRule, algebraic_degree, bipermutive_from_generating, TruthTable
from ocasbox.ca import SBox, superposition_sbox
from ocasbox.sbox import (
    LcsResult,
    ca_component_degrees,
    component_function,
    coordinate_degree_check,
    is_bijective,
    lcs_bases_anf,
    linear_components_space,
    linear_components_space_anf,
    sbox_degree,
    sbox_nonlinearity,
    selector_order,
)
from ocasbox.verify import iter_oca_sboxes

from oracles import parity, sbox_brute_nonlinearity

R150 = LocalRule.from_wolfram(150, 3)
R90 = LocalRule.from_wolfram(90, 3)
R210 = LocalRule.from_wolfram(210, 3)


def oca_sboxes(d):
    n = 2 * (d - 1)
    return [SBox(n, t) for _, _, t in iter_oca_sboxes(d)]


def random_nonlinear_bipermutive(rng, d):
    while True:
        g = TruthTable(d - 2, int(rng.integers(0, 1 << (1 << (d - 2)))))
        if algebraic_degree(g) >= 2:
            return bipermutive_from_generating(g, d)


class TestComponents:
    def test_unit_selector(self):
        s = superposition_sbox(R150, R90)
        for i in range(4):
            comp = component_function(s, 1 << i)
            assert comp.bits.tolist() == [(int(y) >> i) & 1 for y in s.table]

    def test_identity_xor(self):
        assert component_function(SBox.identity(2), 0b11).bits.tolist() == [0, 1, 1, 0]

    def test_first_coordinate_is_f(self):
        # first coordinate of H on x1..x4 is f(x1, x2, x3)
        s = superposition_sbox(R150, R90)
        comp = component_function(s, 0b1000)
        assert comp.bits.tolist() == [R150.table(x >> 1) for x in range(16)]

    def test_zero_selector(self):
        with pytest.raises(ValueError):
            component_function(SBox.identity(3), 0)

    def test_selector_order_is_permutation(self):
        for n in (2, 4, 6):
            order = selector_order(n)
            assert sorted(order) == list(range(1, 1 << n))


class TestMetrics:
    def test_linear_sbox(self):
        assert sbox_nonlinearity(superposition_sbox(R150, R90)) == 0
        assert sbox_nonlinearity(SBox.identity(4)) == 0
        assert sbox_nonlinearity(SBox.identity(4), early_exit=True) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_nonlinearity_brute(self, seed):
        rng = np.random.default_rng(seed)
        s = SBox(4, rng.permutation(16))
        assert sbox_nonlinearity(s) == sbox_brute_nonlinearity(s.table.tolist(), 4)

    def test_degree(self):
        assert sbox_degree(SBox.identity(4)) == 1
        assert sbox_degree(superposition_sbox(R150, R90)) == 1

    def test_degree_is_max_rule_degree_d5(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = random_nonlinear_bipermutive(rng, 5)
            g = random_nonlinear_bipermutive(rng, 5)
            expected = max(algebraic_degree(f.table), algebraic_degree(g.table))
            assert sbox_degree(superposition_sbox(f, g)) == expected

    def test_bijective(self):
        assert is_bijective(SBox.identity(3))
        assert not is_bijective(SBox(3, np.zeros(8, dtype=int)))

    def test_d4_oca_bijective_linear(self):
        boxes = oca_sboxes(4)
        assert len(boxes) == 32
        assert all(is_bijective(s) for s in boxes)
        assert all(sbox_nonlinearity(s) == 0 for s in boxes)


class TestLcs:
    def test_identity_full(self):
        lcs = linear_components_space(SBox.identity(3))
        assert lcs.dimension == 3 and lcs.members == list(range(1, 8))

    def test_no_linear_component(self):
        rng = np.random.default_rng(11)
        while True:
            s = SBox(4, rng.permutation(16))
            if all(algebraic_degree(component_function(s, v)) >= 2 for v in range(1, 16)):
                break
        lcs = linear_components_space(s)
        assert lcs.dimension == 0 and lcs.members == []

    def test_members_form_subspace(self):
        for s in oca_sboxes(4)[:8]:
            lcs = linear_components_space(s)
            assert gf2.is_subspace(lcs.members)
            assert len(lcs.members) == (1 << lcs.dimension) - 1

    def test_members_brute(self):
        s = oca_sboxes(4)[0]
        lcs = linear_components_space(s)
        affine = [
            v
            for v in range(1, 64)
            if algebraic_degree(TruthTable.from_bits([parity(v & int(y)) for y in s.table])) <= 1
        ]
        assert lcs.members == affine

    def test_d4_dimension_3(self):
        assert {linear_components_space(s).dimension for s in oca_sboxes(4)} == {3}

    def test_anf_route_agrees_d4(self):
        boxes = oca_sboxes(4)
        tables = np.stack([s.table for s in boxes])
        for s, basis in zip(boxes, lcs_bases_anf(tables, 6)):
            assert linear_components_space(s).basis == basis

    def test_anf_route_agrees_random(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            s = SBox(6, rng.integers(0, 64, 64))
            assert linear_components_space(s).basis == linear_components_space_anf(s).basis

    @pytest.mark.slow
    def test_d5_dimensions(self):
        dims = {}
        for s in oca_sboxes(5):
            k = linear_components_space(s).dimension
            dims[k] = dims.get(k, 0) + 1
        assert dims == {3: 64, 4: 1472}

    def test_serialization(self):
        lcs = LcsResult.from_basis(6, [0b100100, 0b010010, 0b001001])
        assert lcs.hex_rows() == ["24", "12", "09"]
        assert lcs.to_dict("1 + X^3") == {
            "n": 6,
            "dimension": 3,
            "basis": ["24", "12", "09"],
            "generator_poly": "1 + X^3",
        }


class TestDegreePreservation:
    def test_linear(self):
        assert coordinate_degree_check(R150, 5)
        assert ca_component_degrees(R150, 5) == {1}

    def test_rule_210(self):
        assert coordinate_degree_check(R210, 5)
        assert ca_component_degrees(R210, 5) == {2}

    def test_short_length(self):
        with pytest.raises(ValueError):
            coordinate_degree_check(R150, 2)

    def test_random_d5(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            assert coordinate_degree_check(random_nonlinear_bipermutive(rng, 5), 8)
