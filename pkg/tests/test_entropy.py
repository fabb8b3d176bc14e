from fractions import Fraction

import pandas as pd
import pytest

from troprec.src.core import parse_vector
from troprec.src.entropy import (Mode, TightnessPattern, DimensionTable, covering_windows, validate_pattern,
                                 polyhedron_dimension, dimension_cap, dimension_search, lower_bound_family,
                                 entropy_report)
from troprec.src.errors import InconsistentTable, MalformedPattern, STooSmall, RegularVector
from troprec.src.recurrence import satisfies


def pattern(*windows):
    return TightnessPattern(windows=tuple(frozenset(A) for A in windows))


class TestPolyhedronDimension:
    """Test cases for the dimension of a single cell."""

    def test_one_window(self, all_zero):
        """Test that A_0 = {0, 1} for (0, 0, 0) leaves two classes."""
        assert polyhedron_dimension(all_zero, 3, pattern({0, 1})) == 2

    def test_chained_equalities(self, constant_only):
        """Test that (0, 0) tying both windows forces one class."""
        assert polyhedron_dimension(constant_only, 3, pattern({0, 1}, {0, 1})) == 1

    def test_contradiction(self, period_two):
        """Test that z_0 = 1 + z_1 = 2 + z_2 against z_0 <= z_2 is empty."""
        assert polyhedron_dimension(period_two, 4, pattern({0, 1}, {0, 1})) is None

    def test_two_classes(self, period_two):
        """Test that tying the outer entries of both windows leaves two classes."""
        assert polyhedron_dimension(period_two, 4, pattern({0, 2}, {0, 2})) == 2

    def test_implied_equality(self, all_zero):
        """Test that opposing inequalities across windows merge classes."""
        # z_0 = z_1 <= z_2 and z_2 = z_3 <= z_1
        assert polyhedron_dimension(all_zero, 4, pattern({0, 1}, {1, 2})) == 1

    @pytest.mark.parametrize("windows", [
        ({0, 1},),
        ({0}, {0, 1}),
        ({0, 3}, {0, 1}),
    ])
    def test_malformed(self, all_zero, windows):
        """Test that patterns of the wrong shape are rejected."""
        with pytest.raises(MalformedPattern):
            polyhedron_dimension(all_zero, 4, pattern(*windows))

    def test_infinite_index(self, gapped_support):
        """Test that an index with a_i = inf cannot be tight."""
        with pytest.raises(MalformedPattern):
            validate_pattern(gapped_support, 4, pattern({0, 2}))

    def test_minimal_mode_needs_cover(self, all_zero):
        """Test that a middle position tight in no window is rejected in minimal mode."""
        with pytest.raises(MalformedPattern, match=r"\[3\]"):
            validate_pattern(all_zero, 3, pattern({0, 1}, {0, 1}, {0, 2}, {1, 2}, {0, 1}), Mode.minimal)
        validate_pattern(all_zero, 3, pattern(*[{0, 1, 2}] * 5), Mode.minimal)

    def test_minimal_mode_window_count(self, all_zero):
        """Test that minimal patterns span the padded word of length s + 2n."""
        with pytest.raises(MalformedPattern):
            validate_pattern(all_zero, 3, pattern({0, 1, 2}), Mode.minimal)

    def test_padding_is_not_counted(self, constant_only):
        """Test that (0, 0) counts one class for the middle block."""
        assert polyhedron_dimension(constant_only, 2, pattern(*[{0, 1}] * 3), Mode.minimal) == 1

    def test_covering_windows(self):
        """Test the first covering window of each position."""
        assert covering_windows([{0, 1}, {0, 2}], 4, 2) == {0: 0, 1: 0, 3: 1}


class TestDimensionSearch:
    """Test cases for the branch and bound search."""

    @pytest.mark.parametrize("text, s, expected", [
        ("0,0,0", 3, 2),
        ("0,0,0", 6, 3),
        ("0,1,0", 3, 2),
        ("0,0", 5, 1),
    ])
    def test_satisfy_values(self, text, s, expected):
        """Test known values of d_s."""
        value, _ = dimension_search(parse_vector(text), s)
        assert value == expected

    @pytest.mark.parametrize("s", range(3, 10))
    def test_all_zero_minimal(self, all_zero, s):
        """Test that m_s = 1 for (0, 0, 0)."""
        value, found = dimension_search(all_zero, s, "minimal")
        assert value == 1
        assert len(found.witnesses) == s

    def test_witness_reproduces_value(self, catalogue):
        """Test that the returned pattern evaluates to the reported dimension."""
        for text in ("0,0", "0,0,0", "0,1,0", "0,2,0"):
            a = catalogue[text]
            for mode in Mode:
                value, found = dimension_search(a, a.n + 3, mode)
                validate_pattern(a, a.n + 3, found, mode)
                assert polyhedron_dimension(a, a.n + 3, found, mode) == value

    def test_minimal_below_satisfy(self, period_two):
        """Test that m_s <= d_s."""
        for s in range(3, 7):
            assert dimension_search(period_two, s, "minimal")[0] <= dimension_search(period_two, s)[0]

    def test_s_too_small(self, period_two):
        """Test that s must exceed n."""
        with pytest.raises(STooSmall):
            dimension_search(period_two, 2)

    def test_cap(self):
        """Test the dimension cap."""
        assert dimension_cap(6, 2) == 4
        assert dimension_cap(5, 1) == 1

    def test_gapped_support_minimal(self, gapped_support):
        """Test that M_s of (0, 0, inf, 0) is never empty for s up to 6."""
        for s in range(4, 7):
            value, found = dimension_search(gapped_support, s, "minimal")
            assert 1 <= value <= dimension_cap(s, 3)
            assert len(found.witnesses) == s


class TestLowerBoundFamily:
    """Test cases for the explicit lower bound constructions."""

    def test_regular(self, constant_only):
        """Test that a regular vector has no family."""
        with pytest.raises(RegularVector):
            lower_bound_family(constant_only)

    def test_edge_with_three_points(self, all_zero):
        """Test the case 1 family for (0, 0, 0)."""
        family = lower_bound_family(all_zero, draws=100)
        assert family.case == 1
        assert family.rate == Fraction(1, 4)
        assert Fraction(len(family.free_positions), 48) == Fraction(1, 4)
        assert len(family.samples) == 100
        assert all(satisfies(all_zero, word) for word in family.samples)

    def test_period_two(self, period_two):
        """Test the case 2 family for (0, 1, 0)."""
        family = lower_bound_family(period_two, draws=100)
        assert family.case == 2
        assert family.rate == Fraction(1, 4)
        assert all(satisfies(period_two, word) for word in family.samples)

    def test_longer_edge(self, degree_three_branching):
        """Test the case 2 family for (0, 1, 3, 0) with rate 1/6."""
        family = lower_bound_family(degree_three_branching, seed=3)
        assert family.case == 2
        assert family.rate == Fraction(1, 6)
        assert "i0=1" in family.description

    def test_sloped_vector(self):
        """Test that the samples are mapped back onto a tilted vector."""
        a = parse_vector("1,2,3")
        family = lower_bound_family(a, draws=10)
        assert family.case == 1
        assert all(satisfies(a, word) for word in family.samples)


class TestEntropyReport:
    """Test cases for the dimension table."""

    def test_regular_vector(self, constant_only):
        """Test that (0, 0) has d_s = 1 throughout and no lower bound."""
        table = entropy_report(constant_only, 8)
        assert set(table.values.values()) == {1}
        assert table.h_upper == Fraction(1, 8)
        assert table.h_lower is None
        assert table.subadditive

    def test_all_zero(self, all_zero):
        """Test that the ratios of (0, 0, 0) stay above 1/3."""
        table = entropy_report(all_zero, 9)
        assert all(ratio >= Fraction(1, 3) for ratio in table.rows["ratio"])
        assert table.h_lower == Fraction(1, 4)
        assert table.subadditive
        assert table.cap_respected

    def test_period_two(self, period_two):
        """Test ratios, the cap and the lower bound for (0, 1, 0)."""
        table = entropy_report(period_two, 8)
        assert all(ratio >= Fraction(1, 4) for ratio in table.rows["ratio"])
        assert all(dim <= s - s // 2 for s, dim in table.values.items())
        assert table.h_lower == Fraction(1, 4)
        assert table.h_upper >= table.h_lower
        assert table.subadditive

    def test_minimal_mode(self, all_zero):
        """Test that minimal mode reports m_s and skips the family."""
        table = entropy_report(all_zero, 6, "minimal")
        assert table.mode is Mode.minimal
        assert table.family is None
        assert table.h_upper == Fraction(1, 6)

    def test_to_dict(self, period_two):
        """Test the JSON form of the table."""
        payload = entropy_report(period_two, 5).to_dict()
        assert payload["schema_version"] == 1
        assert [row["s"] for row in payload["rows"]] == [3, 4, 5]
        assert payload["h_lower"] == "1/4"
        assert payload["family"]["case"] == 2

    def test_residue_deltas(self, all_zero):
        """Test the grouping of differences by residue."""
        table = entropy_report(all_zero, 6)
        deltas = table.residue_deltas()
        assert set(deltas) == {0}
        assert len(deltas[0]) == 1

    def test_subadditivity_violations(self):
        """Test detection of a non-subadditive row set on a hand-made table."""
        rows = pd.DataFrame({"s": [2, 4], "dim": [1, 3], "ratio": [Fraction(1, 2), Fraction(3, 4)],
                             "cap": [2, 4], "witness": ["", ""]})
        table = DimensionTable(rows=rows, mode=Mode.satisfy, n=1, h_upper=Fraction(1, 2))
        assert table.subadditivity_violations() == [(2, 2)]
        with pytest.raises(InconsistentTable) as info:
            table.verify()
        assert info.value.details["violations"] == [[2, 2]]

    def test_over_cap_is_reported(self):
        """Test that a row above its cap fails verification."""
        rows = pd.DataFrame({"s": [3], "dim": [3], "ratio": [Fraction(1)], "cap": [2], "witness": [""]})
        table = DimensionTable(rows=rows, mode=Mode.minimal, n=1, h_upper=Fraction(1))
        with pytest.raises(InconsistentTable) as info:
            table.verify()
        assert info.value.details["over_cap"] == [3]

    def test_inconsistent_search_raises(self, constant_only, monkeypatch):
        """Test that entropy_report refuses a non-subadditive run instead of returning it."""
        values = {2: 1, 3: 1, 4: 3}
        monkeypatch.setattr("troprec.src.entropy.dimension_search",
                            lambda a, s, mode: (values[s], TightnessPattern(windows=())))
        with pytest.raises(InconsistentTable):
            entropy_report(constant_only, 4)

    @pytest.mark.parametrize("text, s_max", [
        ("0,0", 8),
        ("0,0,0", 9),
        ("0,1,0", 8),
        ("0,2,0", 7),
        pytest.param("0,1,2,0", 8, marks=pytest.mark.slow),
        pytest.param("0,1,3,0", 8, marks=pytest.mark.slow),
        pytest.param("0,0,inf,0", 8, marks=pytest.mark.slow),
    ])
    def test_minimal_subadditive(self, text, s_max):
        """Test that m_s is positive, subadditive and under the cap."""
        table = entropy_report(parse_vector(text), s_max, "minimal")
        assert min(table.values.values()) >= 1
        assert table.subadditive
        assert table.cap_respected

    def test_s_max_too_small(self, period_two):
        """Test that s_max must exceed n."""
        with pytest.raises(STooSmall):
            entropy_report(period_two, 2)

    @pytest.mark.slow
    def test_branching_minimal(self, degree_three_branching):
        """Test that m_s for (0, 1, 3, 0) stays between 1 and the cap up to s = 9."""
        table = entropy_report(degree_three_branching, 9, "minimal")
        assert all(ratio >= Fraction(1, 9) for ratio in table.rows["ratio"])
        assert table.subadditive
        assert table.cap_respected
