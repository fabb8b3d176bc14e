"""Tropical recurrence on finite words and periodic sequences.

A word z satisfies a when every window ``min_i (a_i + z_{k+i})`` is attained at
least twice. Minimality asks in addition that every interior coordinate is tight
(attains the minimum) in one of the windows containing it.
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import logging
import math
import typing as t

from troprec.src.core import (CoefficientVector, Rational, format_rational, newton_polygon,
                              parse_rational, progression_difference)
from troprec.src.errors import (WindowOutOfRange, WordTooShort, NotSatisfying, InvalidPeriod,
                                InvalidGrid, LengthMismatch, ProgressionSupport, ShiftsTooClose,
                                OddEntriesEqual, QOutOfRange, ParameterOutOfRange, InapplicableShape,
                                EdgeTooShort, MalformedPeriod, MalformedToken, TooFewEntries)


logger = logging.getLogger(__name__)

Span = t.Tuple[int, int]


@dataclass(frozen=True)
class FiniteWord:
    """Values z_0..z_N; ``offset`` is the absolute index of ``values[0]``."""
    values: t.Tuple[Fraction, ...]
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_values(cls, values: t.Iterable[Rational], offset: int = 0) -> "FiniteWord":
        return cls(tuple(values), offset)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def value_at(self, j: int) -> Fraction:
        """Value at absolute index ``j``."""
        return self.values[j - self.offset]

    def shifted(self, constant: Rational) -> "FiniteWord":
        return FiniteWord(tuple(v + constant for v in self.values), self.offset)

    def reversed(self) -> "FiniteWord":
        return FiniteWord(tuple(reversed(self.values)), -(self.offset + self.N))

    def has_period(self, d: int) -> bool:
        return d >= 1 and all(self.values[j] == self.values[j + d] for j in range(len(self.values) - d))

    def smallest_period(self) -> t.Optional[int]:
        """Smallest d < len(word) with z_{j+d} = z_j throughout, or None."""
        return next((d for d in range(1, len(self.values)) if self.has_period(d)), None)

    def render(self) -> str:
        return ",".join(format_rational(v) for v in self.values)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"offset": self.offset, "values": [format_rational(v) for v in self.values]}

    def __str__(self) -> str:
        return self.render()


def parse_word(text: str, offset: int = 0) -> FiniteWord:
    tokens = [tok.strip() for tok in text.split(",")]
    if tokens == [""]:
        raise TooFewEntries("A word needs at least one value.", text=text)
    return FiniteWord(tuple(parse_rational(tok) for tok in tokens), offset)


@dataclass(frozen=True)
class WindowReport:
    """Minimum of the window starting at local index ``k`` and the indices attaining it."""
    k: int
    min_value: Fraction
    argmin: t.FrozenSet[int]
    candidates: t.Tuple[int, ...] = field(default=(), compare=False)

    @property
    def is_tie(self) -> bool:
        return len(self.argmin) >= 2


def _window(a: CoefficientVector, values: t.Sequence[Fraction], k: int) -> WindowReport:
    items = [(i, a.entries[i].value + values[k + i]) for i in a.support]
    low = min(v for _, v in items)
    return WindowReport(k=k, min_value=low,
                        argmin=frozenset(i for i, v in items if v == low),
                        candidates=tuple(i for i, _ in items))


def window_report(a: CoefficientVector, z: FiniteWord, k: int) -> WindowReport:
    """Evaluate window k (local index, 0 <= k <= N - n) of z against a.

    Raises:
        WindowOutOfRange: If the window does not fit inside the word.
    """
    if not 0 <= k <= z.N - a.n:
        raise WindowOutOfRange(f"Window {k} is outside 0..{z.N - a.n}.", k=k, N=z.N, n=a.n)
    return _window(a, z.values, k)


def _window_reports(a: CoefficientVector, z: FiniteWord) -> t.List[WindowReport]:
    if z.N < a.n:
        raise WordTooShort(f"Word of length {len(z)} is shorter than a window ({a.n + 1}).",
                           length=len(z), n=a.n)
    return [_window(a, z.values, k) for k in range(z.N - a.n + 1)]


def failing_windows(a: CoefficientVector, z: FiniteWord) -> t.List[int]:
    """Local indices of the windows whose minimum is attained only once."""
    return [w.k for w in _window_reports(a, z) if not w.is_tie]


def satisfies(a: CoefficientVector, z: FiniteWord) -> bool:
    return not failing_windows(a, z)


@dataclass(frozen=True)
class MinimalityReport:
    """Outcome of :func:`is_minimal`; truthy when the word is minimal.

    Attributes:
        witnesses: Interior position j -> a window k in which z_j is tight.
        failing_positions: Interior positions tight in no window.
    """
    witnesses: t.Dict[int, int]
    failing_positions: t.Tuple[int, ...]

    @property
    def minimal(self) -> bool:
        return not self.failing_positions

    def __bool__(self) -> bool:
        return self.minimal


def _tight_window(a: CoefficientVector, reports: t.Sequence[WindowReport], j: int) -> t.Optional[int]:
    for k in range(max(0, j - a.n), min(j, len(reports) - 1) + 1):
        if j - k in reports[k].argmin:
            return k
    return None


def is_minimal(a: CoefficientVector, z: FiniteWord) -> MinimalityReport:
    """Check that every interior position n <= j <= N - n is tight in some window.

    Raises:
        NotSatisfying: If z does not satisfy a; minimality is undefined then.
    """
    reports = _window_reports(a, z)
    bad = [w.k for w in reports if not w.is_tie]
    if bad:
        raise NotSatisfying(f"Word does not satisfy {a}; failing windows {bad}.", failing_windows=bad)
    witnesses, failing = {}, []
    for j in range(a.n, z.N - a.n + 1):
        k = _tight_window(a, reports, j)
        if k is None:
            failing.append(j)
        else:
            witnesses[j] = k
    return MinimalityReport(witnesses=witnesses, failing_positions=tuple(failing))


def check_word(a: CoefficientVector, z: FiniteWord) -> t.Dict[str, t.Any]:
    """Satisfaction and minimality in one report; indices are absolute (offset applied)."""
    bad = failing_windows(a, z)
    report = {"satisfies": not bad,
              "minimal": False,
              "failing_windows": [z.offset + k for k in bad],
              "non_minimal_positions": []}
    if not bad:
        minimality = is_minimal(a, z)
        report["minimal"] = minimality.minimal
        report["non_minimal_positions"] = [z.offset + j for j in minimality.failing_positions]
    return report


@dataclass(frozen=True)
class PeriodicSequence:
    """The bi-infinite sequence y_{qd+r} = values[r] + q * drift."""
    d: int
    values: t.Tuple[Fraction, ...]
    drift: Fraction = Fraction(0)

    def __post_init__(self):
        if self.d < 1:
            raise InvalidPeriod(f"Period must be positive, got {self.d}.", d=self.d)
        if len(self.values) != self.d:
            raise InvalidPeriod(f"Period {self.d} needs {self.d} values, got {len(self.values)}.",
                                d=self.d, count=len(self.values))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        object.__setattr__(self, "drift", Fraction(self.drift))

    def value_at(self, j: int) -> Fraction:
        q, r = divmod(j, self.d)
        return self.values[r] + q * self.drift

    def materialize(self, lo: int, hi: int) -> FiniteWord:
        return FiniteWord(tuple(self.value_at(j) for j in range(lo, hi + 1)), lo)

    def render(self) -> str:
        return f"{self.d}:{','.join(format_rational(v) for v in self.values)}:{format_rational(self.drift)}"

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"d": self.d, "values": [format_rational(v) for v in self.values],
                "drift": format_rational(self.drift)}


def parse_period(text: str) -> PeriodicSequence:
    """Parse ``"d:v0,v1,...:drift"``; the drift part may be omitted."""
    parts = text.strip().split(":")
    if len(parts) not in (2, 3):
        raise MalformedPeriod(f"Expected 'd:v0,v1,...:drift', got {text!r}.", text=text)
    try:
        d = int(parts[0])
        values = tuple(parse_rational(tok) for tok in parts[1].split(","))
        drift = parse_rational(parts[2]) if len(parts) == 3 else Fraction(0)
    except (ValueError, MalformedToken) as exc:
        raise MalformedPeriod(f"Malformed period {text!r}: {exc}", text=text) from exc
    return PeriodicSequence(d=d, values=values, drift=drift)


@dataclass(frozen=True)
class PeriodicVerification:
    satisfies: bool
    minimal: bool

    def to_dict(self) -> t.Dict[str, bool]:
        return {"satisfies": self.satisfies, "minimal": self.minimal}


def verify_periodic(a: CoefficientVector, p: PeriodicSequence) -> PeriodicVerification:
    """Decide the bi-infinite conditions from one period.

    Windows k and k + d differ by the constant drift, so windows 0..d-1 and the
    positions of one period settle every k and j.
    """
    n, d = a.n, p.d
    lo = -n - d
    word = p.materialize(lo, n + 2 * d)
    reports = {k: _window(a, word.values, k - lo) for k in range(-n, d)}
    if not all(reports[k].is_tie for k in range(d)):
        return PeriodicVerification(satisfies=False, minimal=False)
    minimal = all(any(j - k in reports[k].argmin for k in range(j - n, j + 1)) for j in range(d))
    return PeriodicVerification(satisfies=True, minimal=minimal)


@dataclass(frozen=True)
class EqualizeGrids:
    """Cut points 0 = c_0 < ... < c_m < 1 and their images 0 = e_0 < ... < e_m < 1.

    A closing 1 may be given on either grid; it is dropped.
    """
    c_grid: t.Tuple[Fraction, ...]
    e_grid: t.Tuple[Fraction, ...]

    def __post_init__(self):
        grids = []
        for name, grid in (("c_grid", self.c_grid), ("e_grid", self.e_grid)):
            grid = tuple(Fraction(v) for v in grid)
            if grid and grid[-1] == 1:
                grid = grid[:-1]
            if not grid or grid[0] != 0:
                raise InvalidGrid(f"{name} must start at 0.", grid=name)
            if any(b <= x for x, b in zip(grid, grid[1:])) or grid[-1] >= 1:
                raise InvalidGrid(f"{name} must increase strictly inside [0, 1).", grid=name)
            grids.append(grid)
        if len(grids[0]) != len(grids[1]):
            raise InvalidGrid("c_grid and e_grid must have the same length.",
                              c=len(grids[0]), e=len(grids[1]))
        object.__setattr__(self, "c_grid", grids[0])
        object.__setattr__(self, "e_grid", grids[1])

    def image(self, y: Fraction) -> Fraction:
        whole = math.floor(y)
        return whole + self.e_grid[bisect_right(self.c_grid, y - whole) - 1]


def equalize(y: FiniteWord, grids: EqualizeGrids) -> FiniteWord:
    """Replace every value by floor(y_i) + e_j, where c_j <= frac(y_i) < c_{j+1}."""
    return FiniteWord(tuple(grids.image(v) for v in y.values), y.offset)


def pointwise_min(z1: FiniteWord, z2: FiniteWord, b1: Rational = 0, b2: Rational = 0) -> FiniteWord:
    if len(z1) != len(z2):
        raise LengthMismatch(f"Words have lengths {len(z1)} and {len(z2)}.", left=len(z1), right=len(z2))
    return FiniteWord(tuple(min(b1 + u, b2 + v) for u, v in zip(z1.values, z2.values)), z1.offset)


def _check_span(span: Span) -> Span:
    lo, hi = span
    if hi < lo:
        raise ParameterOutOfRange(f"Empty index range {span}.", span=list(span))
    return lo, hi


def generate_prop1_witness(a: CoefficientVector,
                           shifts: t.Sequence[int] = (0,),
                           bumps: t.Sequence[Rational] = (1,),
                           span: Span = (-8, 8)) -> FiniteWord:
    """Raise the zero word to ``b_l`` on ``S + k_l`` for every shift k_l.

    Any choice of shifts more than 2n apart and bumps gives a minimal word; when S
    is not an arithmetic progression these words are not periodic.

    Raises:
        InapplicableShape: If a has negative entries or 0, n are not in S.
        ProgressionSupport: If S is an arithmetic progression.
        ShiftsTooClose: If two shifts are at most 2n apart.
        LengthMismatch: If shifts and bumps differ in length.
        ParameterOutOfRange: If a bump is not in (0, min positive entry).
    """
    lo, hi = _check_span(span)
    zero_set = a.zero_set
    if any(v < 0 for _, v in a.finite_items()) or 0 not in zero_set or a.n not in zero_set:
        raise InapplicableShape("Vector must be axis-normalized: entries >= 0 with a_0 = a_n = 0.",
                                vector=a.render())
    if progression_difference(zero_set) is not None:
        raise ProgressionSupport(f"Zero set {list(zero_set)} is an arithmetic progression.",
                                 zero_set=list(zero_set))
    if len(shifts) != len(bumps):
        raise LengthMismatch(f"{len(shifts)} shifts but {len(bumps)} bumps.",
                             left=len(shifts), right=len(bumps))
    ordered = sorted(zip(shifts, (Fraction(b) for b in bumps)))
    if any(k2 - k1 <= 2 * a.n for (k1, _), (k2, _) in zip(ordered, ordered[1:])):
        raise ShiftsTooClose(f"Shifts must differ by more than {2 * a.n}.", shifts=sorted(shifts))
    positive = [v for _, v in a.finite_items() if v > 0]
    ceiling = min(positive) if positive else None
    for _, b in ordered:
        if b <= 0 or (ceiling is not None and b >= ceiling):
            raise ParameterOutOfRange(f"Bump {format_rational(b)} must lie in (0, {ceiling or 'inf'}).",
                                      bump=format_rational(b))

    values = {j: Fraction(0) for j in range(lo, hi + 1)}
    for k, b in ordered:
        for i in zero_set:
            if lo <= k + i <= hi:
                values[k + i] = b
    return FiniteWord(tuple(values[j] for j in range(lo, hi + 1)), lo)


def _is_parity_shape(a: CoefficientVector) -> bool:
    if a.n % 2 or a.n < 2:
        return False
    for i, e in enumerate(a.entries):
        if i % 2 == 0 and e.value != 0:
            return False
        if i % 2 == 1 and not e.is_infinite and e.value <= 0:
            return False
    return True


def generate_thm2_witness(a: CoefficientVector, q: Rational = 1, span: Span = (-10, 10)) -> FiniteWord:
    """Non-periodic minimal word for a vector whose zero set is the even indices.

    The period-2 background (even -> c, odd -> 0) is bumped on [0, n]: even -> c + q,
    odd i with a_i = c -> q, other odd i -> 0. Here c and e are the smallest and
    second-smallest values among the odd entries.

    Raises:
        InapplicableShape: If the zero set is not {0, 2, ..., n}.
        OddEntriesEqual: If all odd entries coincide (every minimal sequence is periodic).
        QOutOfRange: If q is not in (0, e - c].
    """
    lo, hi = _check_span(span)
    if not _is_parity_shape(a):
        raise InapplicableShape("Need even n, zero even entries and positive odd entries.",
                                vector=a.render())
    odd = [a.entries[i] for i in range(1, a.n, 2)]
    distinct = sorted(set(odd))
    if len(distinct) < 2:
        raise OddEntriesEqual("All odd entries are equal; every minimal sequence has period 2.",
                              vector=a.render())
    c, e = distinct[0].value, distinct[1].value
    q = Fraction(q)
    if q <= 0 or (e is not None and q > e - c):
        raise QOutOfRange(f"q must lie in (0, {format_rational(e - c) if e is not None else 'inf'}].",
                          q=format_rational(q))
    in_c = {i for i in range(1, a.n, 2) if a.entries[i].value == c}

    def value(j: int) -> Fraction:
        if 0 <= j <= a.n:
            if j % 2 == 0:
                return c + q
            return q if j in in_c else Fraction(0)
        return c if j % 2 == 0 else Fraction(0)

    logger.debug("thm2 witness for %s with c=%s e=%s C=%s q=%s", a, c, e, sorted(in_c), q)
    return FiniteWord(tuple(value(j) for j in range(lo, hi + 1)), lo)


def generate_prop3_witness(a: CoefficientVector, e: Rational = 1, span: Span = (-9, 9)) -> FiniteWord:
    """Non-periodic minimal word for a = (0, b, c, 0) with c > 2b > 0, or the mirror b > 2c > 0.

    The period-3 background (0, 2b, b) is raised at positions 1, 2 and 4 by e.

    Raises:
        InapplicableShape: For any other shape, including the all-periodic ranges.
        ParameterOutOfRange: If e is not in (0, c - 2b].
    """
    lo, hi = _check_span(span)
    if a.n != 3 or not a.is_all_finite or a.entries[0].value != 0 or a.entries[3].value != 0:
        raise InapplicableShape("Need a vector of the form (0, b, c, 0).", vector=a.render())
    b, c = a.entries[1].value, a.entries[2].value
    if b > 0 and c > 2 * b:
        pass
    elif c > 0 and b > 2 * c:
        mirror = CoefficientVector.from_values((0, c, b, 0))
        return generate_prop3_witness(mirror, e, (-hi, -lo)).reversed()
    else:
        raise InapplicableShape(f"Need c > 2b > 0 or b > 2c > 0, got b={b}, c={c}.",
                                b=format_rational(b), c=format_rational(c))
    e = Fraction(e)
    if not 0 < e <= c - 2 * b:
        raise ParameterOutOfRange(f"e must lie in (0, {format_rational(c - 2 * b)}].", e=format_rational(e))
    background = (Fraction(0), 2 * b, b)
    raised = {1: 2 * b + e, 2: b + e, 4: 2 * b + e}
    return FiniteWord(tuple(raised.get(j, background[j % 3]) for j in range(lo, hi + 1)), lo)


def generate_polygon_witness(a: CoefficientVector,
                             edge_lengths: t.Sequence[int],
                             span: Span = (-10, 20)) -> FiniteWord:
    """Concave piecewise-linear word following the bounded edges of P(a).

    Starting at index 0 the word takes ``edge_lengths[j]`` steps of slope -sigma_j
    for each edge in left-to-right order; it continues with the first slope to the
    left and with the last slope to the right.

    Raises:
        LengthMismatch: If one length per bounded edge is not given.
        EdgeTooShort: If a length is below the horizontal length of its edge.
    """
    lo, hi = _check_span(span)
    edges = newton_polygon(a).edges
    if len(edge_lengths) != len(edges):
        raise LengthMismatch(f"P(a) has {len(edges)} bounded edges, got {len(edge_lengths)} lengths.",
                             left=len(edges), right=len(edge_lengths))
    for index, (edge, length) in enumerate(zip(edges, edge_lengths)):
        if length < edge.length:
            raise EdgeTooShort(f"Edge {index} has length {edge.length}, requested {length}.",
                               edge_index=index, edge_length=edge.length, requested=length)

    breaks = []
    total = 0
    for length in edge_lengths:
        total += length
        breaks.append(total)

    def step(j: int) -> Fraction:
        if j < 0:
            return -edges[0].slope
        index = bisect_right(breaks, j)
        return -edges[min(index, len(edges) - 1)].slope

    values = {0: Fraction(0)}
    for j in range(0, hi):
        values[j + 1] = values[j] + step(j)
    for j in range(-1, lo - 1, -1):
        values[j] = values[j + 1] - step(j)
    return FiniteWord(tuple(values[j] for j in range(lo, hi + 1)), lo)


class Family(Enum):
    prop1 = "prop1"
    thm2 = "thm2"
    prop3 = "prop3"
    polygon = "polygon"

    @staticmethod
    def handle(family: t.Union[str, "Family"]) -> "Family":
        if isinstance(family, Family):
            return family
        return getattr(Family, family)


_GENERATORS: t.Dict[Family, t.Callable[..., FiniteWord]] = {
    Family.prop1: generate_prop1_witness,
    Family.thm2: generate_thm2_witness,
    Family.prop3: generate_prop3_witness,
    Family.polygon: generate_polygon_witness,
}


def generate_witness(a: CoefficientVector, family: t.Union[str, Family], **params) -> FiniteWord:
    """Dispatch to the generator of ``family`` with its keyword parameters."""
    return _GENERATORS[Family.handle(family)](a, **params)
