from fractions import Fraction

import pytest

from troprec.src.core import (TropScalar, CoefficientVector, parse_rational, format_rational, parse_vector,
                              progression_difference, newton_polygon, classify_regular, normalize_edge)
from troprec.src.errors import (TooFewEntries, FirstEntryInfinite, LastEntryInfinite, MalformedToken,
                                EdgeIndexOutOfRange, ParseError)
from troprec.src.recurrence import FiniteWord, satisfies


class TestTropScalar:
    """Test cases for the exact tropical scalar."""

    def test_infinity_tokens(self):
        """Test that every spelling of infinity parses to the infinite variant."""
        for token in ("inf", "+inf", "Infinity", "∞"):
            assert TropScalar.of(token).is_infinite

    def test_addition_absorbs_infinity(self):
        """Test that adding anything to +inf stays infinite."""
        assert (TropScalar.of(3) + TropScalar.infinity()).is_infinite
        assert TropScalar.of("1/2") + 1 == Fraction(3, 2)

    def test_tropical_sum_is_min(self):
        """Test that the min-plus sum picks the smaller value and +inf is neutral."""
        assert TropScalar.of(3).tropical_sum(TropScalar.infinity()) == 3
        assert TropScalar.of(3).tropical_sum(-1) == -1

    def test_ordering(self):
        """Test that finite values sort below +inf."""
        values = sorted([TropScalar.infinity(), TropScalar.of(2), TropScalar.of(-1)])
        assert [str(v) for v in values] == ["-1", "2", "inf"]


class TestParsing:
    """Test cases for rational and vector parsing."""

    def test_parse_rational_reduces(self):
        """Test that fractions come back reduced."""
        assert parse_rational("4/6") == Fraction(2, 3)
        assert format_rational(Fraction(4, 6)) == "2/3"
        assert format_rational(Fraction(-3)) == "-3"

    @pytest.mark.parametrize("token", ["x", "1.5", "1/0", "", "1//2"])
    def test_parse_rational_rejects(self, token):
        """Test that malformed tokens raise MalformedToken."""
        with pytest.raises(MalformedToken):
            parse_rational(token)

    def test_parse_vector_fields(self):
        """Test n, M, support and zero set of a = (0, 1, 0)."""
        a = parse_vector("0,1,0")
        assert a.n == 2
        assert a.M == 1
        assert a.support == (0, 1, 2)
        assert a.zero_set == (0, 2)
        assert a.is_all_finite and a.is_integral

    def test_parse_vector_with_infinity(self):
        """Test that infinite entries are excluded from the support."""
        a = parse_vector("0, 0, inf, 0")
        assert a.support == (0, 1, 3)
        assert not a.is_all_finite
        assert a.render() == "0,0,inf,0"

    @pytest.mark.parametrize("text, error", [
        ("0", TooFewEntries),
        ("inf,0", FirstEntryInfinite),
        ("0,1,inf", LastEntryInfinite),
        ("0,a,0", MalformedToken),
        ("0,1/0,0", MalformedToken),
    ])
    def test_parse_vector_errors(self, text, error):
        """Test that each malformed vector raises its own parse error with exit code 2."""
        with pytest.raises(error) as info:
            parse_vector(text)
        assert isinstance(info.value, ParseError)
        assert info.value.exit_code == 2

    def test_direct_construction_validates(self):
        """Test that CoefficientVector validates outside the parser too."""
        with pytest.raises(FirstEntryInfinite):
            CoefficientVector.from_values([None, 0])


class TestProgression:
    """Test cases for progression_difference."""

    def test_progression(self):
        """Test arithmetic progressions and their difference."""
        assert progression_difference([0, 2, 4]) == 2
        assert progression_difference([4, 0, 2]) == 2

    def test_not_progression(self):
        """Test that gapped sets and singletons give None."""
        assert progression_difference([0, 1, 3]) is None
        assert progression_difference([5]) is None


class TestNewtonPolygon:
    """Test cases for the lower hull."""

    def test_single_edge(self, period_two):
        """Test that the interior point of (0, 1, 0) lies above the only edge."""
        polygon = newton_polygon(period_two)
        assert polygon.vertex_indices == (0, 2)
        assert len(polygon.edges) == 1
        assert polygon.edges[0].slope == 0
        assert polygon.edges[0].on_edge == (0, 2)

    def test_collinear_points_are_not_vertices(self, all_zero):
        """Test that collinear points lie on the edge without being vertices."""
        polygon = newton_polygon(all_zero)
        assert polygon.vertex_indices == (0, 2)
        assert polygon.edges[0].on_edge == (0, 1, 2)

    def test_two_edges(self):
        """Test slopes and heights for (0, 1, 4)."""
        polygon = newton_polygon(parse_vector("0,1,4"))
        assert [e.slope for e in polygon.edges] == [1, 3]
        assert polygon.height_at(Fraction(3, 2)) == Fraction(5, 2)
        with pytest.raises(ValueError):
            polygon.height_at(3)

    def test_slopes_increase(self, catalogue):
        """Test that edge slopes strictly increase for the whole catalogue."""
        for a in catalogue.values():
            slopes = [e.slope for e in newton_polygon(a).edges]
            assert slopes == sorted(set(slopes))


class TestRegularity:
    """Test cases for classify_regular."""

    @pytest.mark.parametrize("text, regular", [
        ("0,0", True),
        ("0,-1,0", True),
        ("0,inf,0", True),
        ("0,0,0", False),
        ("0,1,0", False),
        ("0,0,inf,0", False),
    ])
    def test_regular(self, text, regular):
        """Test regularity on small vectors."""
        assert classify_regular(parse_vector(text)).is_regular is regular

    def test_report_fields(self):
        """Test that the report separates the two conditions."""
        report = classify_regular(parse_vector("0,1,0"))
        assert report.j_is_progression
        assert not report.all_points_are_vertices
        assert report.progression_difference == 1


class TestNormalizeEdge:
    """Test cases for the affine change of coordinates."""

    def test_right_edge(self):
        """Test normalizing the steep edge of (0, 1, 4)."""
        normalized, transform = normalize_edge(parse_vector("0,1,4"), edge_index=1)
        assert normalized.coefficients == (2, 0, 0)
        assert transform.alpha == -3
        assert transform.beta == 2

    def test_left_edge(self):
        """Test normalizing the shallow edge of (0, 1, 4)."""
        normalized, _ = normalize_edge(parse_vector("0,1,4"), edge_index=0)
        assert normalized.coefficients == (0, 0, 2)

    def test_scale_clears_denominators(self):
        """Test that fractional entries are scaled to integers."""
        normalized, transform = normalize_edge(parse_vector("0,1/2,0"))
        assert transform.scale == 2
        assert normalized.coefficients == (0, 1, 0)
        assert normalized.is_integral

    def test_edge_index_out_of_range(self, period_two):
        """Test that a missing edge raises EdgeIndexOutOfRange."""
        with pytest.raises(EdgeIndexOutOfRange):
            normalize_edge(period_two, edge_index=1)

    def test_words_map_both_ways(self):
        """Test that satisfaction is preserved through the word maps."""
        a = parse_vector("0,1,4")
        normalized, transform = normalize_edge(a, edge_index=1)
        z = FiniteWord.from_values([0, 0, 0, 0])
        assert satisfies(normalized, z)
        y = transform.denormalize_word(z)
        assert y.values == (0, -3, -6, -9)
        assert satisfies(a, y)
        assert transform.normalize_word(y) == z
