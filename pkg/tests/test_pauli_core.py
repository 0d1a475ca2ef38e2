"""Tests for Pauli string algebra"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import ArgumentError, DimensionError
from pauli_core import (
    Bipartition,
    MeasurementSetting,
    PauliString,
    all_pauli_strings,
    all_settings,
    anticommutes_on,
    commutes,
    cut_anticommutes,
    derivable_indices,
    enumerate_bipartitions,
    is_derivable,
    multiply,
    parse_bipartition,
    restrict,
)

P = PauliString.from_digits


def pauli_strings(n):
    return st.lists(st.integers(0, 3), min_size=n, max_size=n).map(PauliString.from_digits)


class TestPauliString:
    def test_digits_and_masks(self):
        j = P("1221")
        assert j.digits == (1, 2, 2, 1)
        assert j.x_mask == 0b1111
        assert j.z_mask == 0b0110
        assert j.label == "1221"
        assert j.letters == "XYYX"
        assert j.weight == 4

    def test_letter_input(self):
        assert P("XYYX") == P("1221")
        assert P("sigma_0033") == P("0033")

    def test_identity(self):
        assert PauliString.identity(3).is_identity()
        assert PauliString.identity(3).label == "000"

    @pytest.mark.parametrize("bad", ["", "1241", "12a1"])
    def test_invalid_labels(self, bad):
        with pytest.raises(ArgumentError):
            P(bad)

    @pytest.mark.parametrize("x_mask,z_mask", [(0b1000, 0), (0, 0b10000), (-1, 0)])
    def test_masks_must_fit_qubits(self, x_mask, z_mask):
        with pytest.raises(ArgumentError, match="masks exceed"):
            PauliString(3, x_mask, z_mask)
        assert PauliString(3, 0b111, 0b100).label == "112"

    def test_setting_rejects_identity_site(self):
        with pytest.raises(ArgumentError):
            MeasurementSetting.from_label("3303")

    def test_setting_as_pauli(self):
        assert MeasurementSetting.from_label("1133").as_pauli() == P("1133")


class TestCommutation:
    def test_examples(self):
        assert commutes(P("3333"), P("1221"))
        assert not commutes(P("3000"), P("1000"))
        assert commutes(P("1100"), P("3300"))
        assert not commutes(P("1221"), P("3000"))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            commutes(P("33"), P("333"))

    @given(pauli_strings(4), pauli_strings(4))
    def test_symmetric(self, p, q):
        assert commutes(p, q) == commutes(q, p)

    @given(pauli_strings(4))
    def test_self_and_identity(self, p):
        assert commutes(p, p)
        assert commutes(p, PauliString.identity(4))

    @given(pauli_strings(4), pauli_strings(4), pauli_strings(4))
    def test_product_rule(self, p, q, r):
        # anticommutation signs multiply
        left = commutes(multiply(p, q), r)
        assert left == (commutes(p, r) == commutes(q, r))


class TestCuts:
    def test_bipartition_order_for_four_qubits(self):
        labels = [c.label for c in enumerate_bipartitions(4)]
        assert labels == ["A|BCD", "B|ACD", "C|ABD", "D|ABC", "AB|CD", "AC|BD", "AD|BC"]

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_bipartition_count(self, n):
        assert len(enumerate_bipartitions(n)) == 2 ** (n - 1) - 1

    def test_parse_bipartition(self):
        cut = parse_bipartition("CD|AB")
        assert cut.side_a == frozenset({1, 2})
        assert cut.label == "AB|CD"
        assert parse_bipartition("2|1,3,4") == Bipartition.from_side(4, {2})

    def test_parse_bipartition_rejects_overlap(self):
        with pytest.raises(ArgumentError):
            parse_bipartition("AB|BC")

    def test_ghz_y_string_neighbours_on_ab_cd(self):
        cut = parse_bipartition("AB|CD")
        y = P("1221")
        z_strings = ["0033", "0303", "0330", "3003", "3030", "3300", "3333"]
        neighbours = {z for z in z_strings if cut_anticommutes(P(z), y, cut)}
        assert neighbours == {"3030", "3003", "0330", "0303"}

    def test_commuting_pair_can_cut_anticommute(self):
        # σ_3300 and σ_1221 commute globally but anticommute on both sides of A|BCD
        cut = parse_bipartition("A|BCD")
        assert commutes(P("3300"), P("1221"))
        assert cut_anticommutes(P("3300"), P("1221"), cut)

    @given(pauli_strings(4), pauli_strings(4), st.sampled_from(enumerate_bipartitions(4)))
    def test_global_anticommutation_implies_cut(self, p, q, cut):
        if not commutes(p, q):
            assert cut_anticommutes(p, q, cut)

    @given(pauli_strings(4), pauli_strings(4), st.sampled_from(enumerate_bipartitions(4)))
    def test_cut_matches_restrictions(self, p, q, cut):
        a = not commutes(restrict(p, cut.side_a), restrict(q, cut.side_a))
        b = not commutes(restrict(p, cut.side_b), restrict(q, cut.side_b))
        assert cut_anticommutes(p, q, cut) == (a or b)
        assert anticommutes_on(p, q, cut.mask_a) == a

    def test_restrict(self):
        assert restrict(P("1221"), [2, 4]) == P("21")
        with pytest.raises(ArgumentError):
            restrict(P("1221"), [5])


class TestDerivable:
    def test_derivable_count(self):
        k = MeasurementSetting.from_label("1221")
        found = derivable_indices(k)
        assert len(found) == 16
        assert P("1001") in found
        assert PauliString.identity(4) in found

    def test_is_derivable(self):
        k = MeasurementSetting.from_label("3333")
        assert is_derivable(P("0330"), k)
        assert not is_derivable(P("1221"), k)

    def test_enumerations(self):
        assert len(all_pauli_strings(2)) == 16
        assert len(all_pauli_strings(2, include_identity=False)) == 15
        assert len(all_settings(3)) == 27
