"""Exact scalars, coefficient vectors and their Newton polygons.

Everything in this module is exact: finite values are ``fractions.Fraction`` and the
tropical zero (+infinity) is a distinct variant of :class:`TropScalar`, never a float.
"""
from fractions import Fraction
from functools import total_ordering
from dataclasses import dataclass, field
import logging
import math
import re
import typing as t

from troprec.src.errors import (TooFewEntries, FirstEntryInfinite, LastEntryInfinite,
                                MalformedToken, EdgeIndexOutOfRange)


logger = logging.getLogger(__name__)

Rational = t.Union[int, Fraction]

_RATIONAL_TOKEN = re.compile(r"^[+-]?\d+(/\d+)?$")
_INFINITY_TOKENS = {"inf", "+inf", "infinity", "∞"}


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q`` or an integer into a reduced Fraction."""
    token = token.strip()
    if not _RATIONAL_TOKEN.match(token):
        raise MalformedToken(f"Malformed rational token {token!r}.", token=token)
    if re.search(r"/0+$", token):
        raise MalformedToken(f"Zero denominator in token {token!r}.", token=token)
    return Fraction(token)


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@total_ordering
@dataclass(frozen=True)
class TropScalar:
    """An element of Q ∪ {+inf}; ``value is None`` is the infinite variant."""
    value: t.Optional[Fraction] = None

    def __post_init__(self):
        if self.value is not None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @classmethod
    def infinity(cls) -> "TropScalar":
        return cls(None)

    @classmethod
    def of(cls, value: t.Union["TropScalar", Rational, str, None]) -> "TropScalar":
        if isinstance(value, TropScalar):
            return value
        if value is None:
            return cls.infinity()
        if isinstance(value, str):
            if value.strip().lower() in _INFINITY_TOKENS:
                return cls.infinity()
            return cls(parse_rational(value))
        return cls(Fraction(value))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: t.Union["TropScalar", Rational]) -> "TropScalar":
        other = TropScalar.of(other)
        if self.is_infinite or other.is_infinite:
            return TropScalar.infinity()
        return TropScalar(self.value + other.value)

    __radd__ = __add__

    def tropical_sum(self, other: t.Union["TropScalar", Rational]) -> "TropScalar":
        """Min-plus addition: the smaller of the two; +inf is the identity."""
        other = TropScalar.of(other)
        return other if self > other else self

    def __lt__(self, other: t.Union["TropScalar", Rational]) -> bool:
        other = TropScalar.of(other)
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.value < other.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TropScalar(Fraction(other))
        if not isinstance(other, TropScalar):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(("TropScalar", self.value))

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format_rational(self.value)


@dataclass(frozen=True)
class CoefficientVector:
    """The vector a = (a_0, ..., a_n) with a_0 and a_n finite.

    Attributes:
        entries: The coefficients as tropical scalars.
    """
    entries: t.Tuple[TropScalar, ...]

    def __post_init__(self):
        entries = tuple(TropScalar.of(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) < 2:
            raise TooFewEntries(f"Need at least 2 entries, got {len(entries)}.", count=len(entries))
        if entries[0].is_infinite:
            raise FirstEntryInfinite("The first entry a_0 must be finite.")
        if entries[-1].is_infinite:
            raise LastEntryInfinite("The last entry a_n must be finite.")

    @classmethod
    def from_values(cls, values: t.Iterable[t.Union[TropScalar, Rational, str, None]]) -> "CoefficientVector":
        return cls(tuple(TropScalar.of(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def coefficients(self) -> t.Tuple[t.Optional[Fraction], ...]:
        """Finite entries as Fractions, infinite ones as None."""
        return tuple(e.value for e in self.entries)

    @property
    def support(self) -> t.Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if not e.is_infinite)

    @property
    def zero_set(self) -> t.Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e.value == 0)

    @property
    def M(self) -> Fraction:
        return max(self.entries[i].value for i in self.support)

    @property
    def is_all_finite(self) -> bool:
        return len(self.support) == len(self.entries)

    @property
    def is_integral(self) -> bool:
        return all(self.entries[i].value.denominator == 1 for i in self.support)

    def finite_items(self) -> t.List[t.Tuple[int, Fraction]]:
        return [(i, self.entries[i].value) for i in self.support]

    def render(self) -> str:
        return ",".join(str(e) for e in self.entries)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"entries": [str(e) for e in self.entries],
                "n": self.n,
                "M": format_rational(self.M),
                "support": list(self.support),
                "zero_set": list(self.zero_set)}

    def __str__(self) -> str:
        return f"({self.render()})"


def parse_vector(text: str) -> CoefficientVector:
    """Parse ``"0,1/2,inf,0"`` into a validated CoefficientVector."""
    tokens = [tok.strip() for tok in text.split(",")]
    if len(tokens) < 2:
        raise TooFewEntries(f"Need at least 2 comma-separated entries, got {text!r}.", text=text)
    entries = []
    for tok in tokens:
        if tok.lower() in _INFINITY_TOKENS:
            entries.append(TropScalar.infinity())
        else:
            entries.append(TropScalar(parse_rational(tok)))
    return CoefficientVector(tuple(entries))


def progression_difference(indices: t.Sequence[int]) -> t.Optional[int]:
    """Common difference g if ``indices`` (sorted) form an arithmetic progression, else None."""
    indices = sorted(indices)
    if len(indices) < 2:
        return None
    diffs = {b - a for a, b in zip(indices, indices[1:])}
    return diffs.pop() if len(diffs) == 1 else None


@dataclass(frozen=True)
class Edge:
    start: t.Tuple[int, Fraction]
    end: t.Tuple[int, Fraction]
    slope: Fraction
    on_edge: t.Tuple[int, ...]

    @property
    def length(self) -> int:
        return self.end[0] - self.start[0]

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"start": [self.start[0], format_rational(self.start[1])],
                "end": [self.end[0], format_rational(self.end[1])],
                "slope": format_rational(self.slope),
                "on_edge": list(self.on_edge)}


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower boundary of the convex hull of the rays {(i, b >= a_i)}.

    Attributes:
        points: The Newton graph, (i, a_i) for every finite a_i.
        hull_vertices: Lower hull vertices left to right.
        edges: Bounded edges with strictly increasing slopes.
    """
    points: t.Tuple[t.Tuple[int, Fraction], ...]
    hull_vertices: t.Tuple[t.Tuple[int, Fraction], ...]
    edges: t.Tuple[Edge, ...]

    @property
    def vertex_indices(self) -> t.Tuple[int, ...]:
        return tuple(i for i, _ in self.hull_vertices)

    def height_at(self, x: Rational) -> Fraction:
        for edge in self.edges:
            if edge.start[0] <= x <= edge.end[0]:
                return edge.start[1] + edge.slope * (x - edge.start[0])
        raise ValueError(f"Abscissa {x} lies outside [{self.hull_vertices[0][0]}, {self.hull_vertices[-1][0]}].")

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"hull_vertices": [[i, format_rational(v)] for i, v in self.hull_vertices],
                "edges": [e.to_dict() for e in self.edges]}


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(a: CoefficientVector) -> NewtonPolygon:
    points = tuple(a.finite_items())
    hull: t.List[t.Tuple[int, Fraction]] = []
    # monotone chain, lower half; collinear points are dropped from the vertex list
    for p in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)

    edges = []
    for start, end in zip(hull, hull[1:]):
        slope = Fraction(end[1] - start[1], end[0] - start[0])
        on_edge = tuple(i for i, v in points
                        if start[0] <= i <= end[0] and v == start[1] + slope * (i - start[0]))
        edges.append(Edge(start=start, end=end, slope=slope, on_edge=on_edge))
    return NewtonPolygon(points=points, hull_vertices=tuple(hull), edges=tuple(edges))


@dataclass(frozen=True)
class RegularityReport:
    is_regular: bool
    j_is_progression: bool
    all_points_are_vertices: bool
    progression_difference: t.Optional[int] = None

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"is_regular": self.is_regular,
                "j_is_progression": self.j_is_progression,
                "all_points_are_vertices": self.all_points_are_vertices,
                "progression_difference": self.progression_difference}


def classify_regular(a: CoefficientVector, polygon: t.Optional[NewtonPolygon] = None) -> RegularityReport:
    polygon = polygon or newton_polygon(a)
    difference = progression_difference(a.support)
    vertices = set(polygon.vertex_indices)
    all_vertices = all(i in vertices for i in a.support)
    return RegularityReport(is_regular=difference is not None and all_vertices,
                            j_is_progression=difference is not None,
                            all_points_are_vertices=all_vertices,
                            progression_difference=difference)


@dataclass(frozen=True)
class AffineNormalization:
    """The change a_i -> scale * (a_i + alpha * i + beta).

    A word y satisfies a iff ``normalize_value(j, y_j)`` satisfies the normalized vector.
    """
    alpha: Fraction
    beta: Fraction
    scale: int = 1
    edge_index: int = field(default=0, compare=False)

    def apply(self, i: int, value: Fraction) -> Fraction:
        return self.scale * (value + self.alpha * i + self.beta)

    def normalize_value(self, j: int, y: Rational) -> Fraction:
        return self.scale * (Fraction(y) - self.alpha * j)

    def denormalize_value(self, j: int, y: Rational) -> Fraction:
        return Fraction(y) / self.scale + self.alpha * j

    def normalize_word(self, word):
        """Map a word satisfying the original vector to one satisfying the normalized vector.

        ``word`` is anything with ``values`` and ``offset`` (a FiniteWord); the same type is returned.
        """
        return type(word)(tuple(self.normalize_value(word.offset + j, y) for j, y in enumerate(word.values)),
                          word.offset)

    def denormalize_word(self, word):
        return type(word)(tuple(self.denormalize_value(word.offset + j, y) for j, y in enumerate(word.values)),
                          word.offset)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"alpha": format_rational(self.alpha), "beta": format_rational(self.beta),
                "scale": self.scale, "edge_index": self.edge_index}


def normalize_edge(a: CoefficientVector,
                   edge_index: int = 0,
                   polygon: t.Optional[NewtonPolygon] = None) -> t.Tuple[CoefficientVector, AffineNormalization]:
    """Move the chosen bounded edge of P(a) onto the abscissa axis with integer entries."""
    polygon = polygon or newton_polygon(a)
    if not 0 <= edge_index < len(polygon.edges):
        raise EdgeIndexOutOfRange(f"Edge index {edge_index} outside 0..{len(polygon.edges) - 1}.",
                                  edge_index=edge_index, edge_count=len(polygon.edges))
    edge = polygon.edges[edge_index]
    alpha = -edge.slope
    beta = -(edge.start[1] + alpha * edge.start[0])
    shifted = [None if v is None else v + alpha * i + beta for i, v in enumerate(a.coefficients)]
    scale = 1
    for v in shifted:
        if v is not None:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    transform = AffineNormalization(alpha=alpha, beta=beta, scale=scale, edge_index=edge_index)
    normalized = CoefficientVector.from_values(None if v is None else v * scale for v in shifted)
    logger.debug("normalized %s on edge %d to %s (%s)", a, edge_index, normalized, transform)
    return normalized, transform
