"""Dimensions d_s = dim D_s and m_s = dim M_s, and the entropy brackets built from them.

A cell of D_s is fixed by a tightness pattern: for each window k a set A_k of at
least two indices where the window minimum is attained. The cell is a system of
difference constraints on z_0..z_{s-1}; its dimension is the number of classes of
coordinates whose difference the system forces.

M_s is the set of middle s-blocks of words of length s + 2n that satisfy a and
whose positions n..n+s-1 are each tight in some window. Prefixes and suffixes of
such blocks are again such blocks, so m_s is subadditive, and the zero word of an
axis edge keeps M_s non-empty. Minimal-mode cells fix the exact argmin set of every
window of the padded word, with strict inequalities for the other indices; m_s
counts the classes that meet the middle block.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
import logging
import math
import typing as t

import numpy as np
import pandas as pd
from tqdm import tqdm

from troprec.src.core import CoefficientVector, classify_regular, format_rational, newton_polygon, normalize_edge
from troprec.src.errors import (MalformedPattern, STooSmall, EmptyComplex, RegularVector, FamilyVerificationFailed,
                                InconsistentTable, TropRecError)
from troprec.src.recurrence import FiniteWord, satisfies


logger = logging.getLogger(__name__)

INF = math.inf
Matrix = t.List[t.List[float]]
Arc = t.Tuple[int, int, int]


class Mode(Enum):
    satisfy = "satisfy"
    minimal = "minimal"

    @staticmethod
    def handle(mode: t.Union[str, "Mode"]) -> "Mode":
        if isinstance(mode, Mode):
            return mode
        return getattr(Mode, mode)


@dataclass(frozen=True)
class TightnessPattern:
    """Per window k, the indices A_k attaining its minimum.

    In ``satisfy`` mode A_k is a lower bound on the argmin set of window k of a word
    of length s. In ``minimal`` mode the word has length s + 2n and A_k is the exact
    argmin set.

    Attributes:
        windows: A_0, A_1, ... one per window of the word.
        witnesses: For minimal-mode patterns, middle position j -> a window k with j - k in A_k.
    """
    windows: t.Tuple[t.FrozenSet[int], ...]
    witnesses: t.Tuple[t.Tuple[int, int], ...] = ()

    def render(self) -> str:
        return " ".join(f"{k}:{{{','.join(map(str, sorted(A)))}}}" for k, A in enumerate(self.windows))

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"windows": [sorted(A) for A in self.windows],
                "witnesses": {str(j): k for j, k in self.witnesses}}


def word_layout(s: int, n: int, mode: t.Union[str, Mode] = Mode.satisfy) -> t.Tuple[int, range]:
    """Length of the word a pattern lives on and the positions whose classes are counted."""
    if Mode.handle(mode) is Mode.minimal:
        return s + 2 * n, range(n, n + s)
    return s, range(s)


def covering_windows(pattern_windows: t.Sequence[t.Collection[int]], s: int, n: int) -> t.Dict[int, int]:
    """Position j -> first window k with j - k in A_k, for every position that has one."""
    witnesses = {}
    for j in range(s):
        for k in range(max(0, j - n), min(j, len(pattern_windows) - 1) + 1):
            if j - k in pattern_windows[k]:
                witnesses[j] = k
                break
    return witnesses


def validate_pattern(a: CoefficientVector, s: int, pattern: TightnessPattern, mode: Mode = Mode.satisfy) -> None:
    """Raise MalformedPattern unless ``pattern`` is a pattern for (a, s) in ``mode``."""
    mode = Mode.handle(mode)
    support = set(a.support)
    length, counted = word_layout(s, a.n, mode)
    if len(pattern.windows) != length - a.n:
        raise MalformedPattern(f"Need {length - a.n} windows for s={s} in {mode.value} mode, "
                               f"got {len(pattern.windows)}.", s=s, windows=len(pattern.windows))
    for k, A in enumerate(pattern.windows):
        if len(A) < 2 or not set(A) <= support:
            raise MalformedPattern(f"Window {k} needs at least two finite indices, got {sorted(A)}.", k=k)
    for j, k in pattern.witnesses:
        if not (max(0, j - a.n) <= k <= min(j, length - a.n - 1) and j - k in pattern.windows[k]):
            raise MalformedPattern(f"Window {k} does not witness position {j}.", j=j, k=k)
    if mode is Mode.minimal:
        uncovered = sorted(set(counted) - set(covering_windows(pattern.windows, length, a.n)))
        if uncovered:
            raise MalformedPattern(f"Positions {uncovered} are tight in no window.", s=s, uncovered=uncovered)


def _scaled(a: CoefficientVector) -> t.Dict[int, int]:
    scale = 1
    for _, v in a.finite_items():
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    return {i: int(v * scale) for i, v in a.finite_items()}


def _weights(a: CoefficientVector, mode: Mode, length: int) -> t.Tuple[t.Dict[int, int], int]:
    """Integer weights and the amount a strict inequality is tightened by.

    Strict arcs lose 1 while every other weight is spread by length + 1, so a cycle
    is negative exactly when it is negative, or zero and uses a strict arc.
    """
    weights = _scaled(a)
    if mode is Mode.minimal:
        return {i: w * (length + 1) for i, w in weights.items()}, 1
    return weights, 0


def _window_arcs(weights: t.Dict[int, int], k: int, A: t.Collection[int], strict: int = 0) -> t.List[Arc]:
    """Arcs (q, p, w) meaning z_p - z_q <= w for window k with minimum on A."""
    anchor = min(A)
    p0, w0 = k + anchor, weights[anchor]
    arcs = []
    for i, w in weights.items():
        if i == anchor:
            continue
        if i in A:
            arcs.append((k + i, p0, w - w0))
            arcs.append((p0, k + i, w0 - w))
        else:
            arcs.append((k + i, p0, w - w0 - strict))
    return arcs


def _floyd_warshall(size: int, arcs: t.Iterable[t.Tuple[int, int, int]]) -> t.Optional[Matrix]:
    dist = [[0 if u == v else INF for v in range(size)] for u in range(size)]
    for q, p, w in arcs:
        dist[q][p] = min(dist[q][p], w)
    for m in range(size):
        row_m = dist[m]
        for u in range(size):
            du = dist[u][m]
            if du == INF:
                continue
            row_u = dist[u]
            for v in range(size):
                if du + row_m[v] < row_u[v]:
                    row_u[v] = du + row_m[v]
    if any(dist[u][u] < 0 for u in range(size)):
        return None
    return dist


def _relax(dist: Matrix, arcs: t.Iterable[t.Tuple[int, int, int]]) -> t.Optional[Matrix]:
    """Add arcs to a closed distance matrix; None on a negative cycle."""
    dist = [row[:] for row in dist]
    size = len(dist)
    for q, p, w in arcs:
        if dist[p][q] + w < 0:
            return None
        if w >= dist[q][p]:
            continue
        from_q = [dist[x][q] for x in range(size)]
        row_p = dist[p]
        for x in range(size):
            if from_q[x] == INF:
                continue
            through = from_q[x] + w
            row_x = dist[x]
            for y in range(size):
                if through + row_p[y] < row_x[y]:
                    row_x[y] = through + row_p[y]
    return dist


def _equality_classes(dist: Matrix, positions: t.Optional[t.Iterable[int]] = None) -> int:
    """Forced-equality classes meeting ``positions`` (every coordinate by default)."""
    representatives: t.List[int] = []
    for v in range(len(dist)) if positions is None else positions:
        if not any(dist[r][v] + dist[v][r] == 0 for r in representatives):
            representatives.append(v)
    return len(representatives)


def polyhedron_dimension(a: CoefficientVector,
                         s: int,
                         pattern: TightnessPattern,
                         mode: t.Union[str, Mode] = Mode.satisfy) -> t.Optional[int]:
    """Dimension of the cell of ``pattern``, or None when it is empty.

    In minimal mode this is the dimension of the cell's image on the middle block.

    Raises:
        MalformedPattern: If the pattern does not fit (a, s).
    """
    mode = Mode.handle(mode)
    validate_pattern(a, s, pattern, mode)
    length, counted = word_layout(s, a.n, mode)
    weights, strict = _weights(a, mode, length)
    arcs = [arc for k, A in enumerate(pattern.windows) for arc in _window_arcs(weights, k, A, strict)]
    dist = _floyd_warshall(length, arcs)
    return None if dist is None else _equality_classes(dist, counted)


def dimension_cap(s: int, n: int) -> int:
    """Upper bound s - floor((s-1)/n) on d_s."""
    return s - (s - 1) // n


def _candidates(a: CoefficientVector, mode: Mode) -> t.List[t.FrozenSet[int]]:
    support = a.support
    if mode is Mode.satisfy:
        # a cell with minimum on A lies inside the cell of any pair from A
        return [frozenset(pair) for pair in combinations(support, 2)]
    return [frozenset(A) for size in range(2, len(support) + 1) for A in combinations(support, size)]


def dimension_search(a: CoefficientVector,
                     s: int,
                     mode: t.Union[str, Mode] = Mode.satisfy) -> t.Tuple[int, TightnessPattern]:
    """Maximal cell dimension of D_s (``satisfy``) or M_s (``minimal``) and a pattern attaining it.

    Windows are fixed left to right, trying first the sets that merge the fewest
    coordinate classes. A branch is cut once its counted classes cannot beat the
    best cell, and the search stops when the best cell reaches :func:`dimension_cap`.
    In minimal mode a middle position must be tight by the time the last window
    covering it is fixed.

    Raises:
        STooSmall: If s <= n.
        EmptyComplex: If no pattern is feasible.
    """
    mode = Mode.handle(mode)
    n = a.n
    if s < n + 1:
        raise STooSmall(f"s must be at least n + 1 = {n + 1}, got {s}.", s=s, n=n)
    length, counted = word_layout(s, n, mode)
    weights, strict = _weights(a, mode, length)
    window_count = length - n
    candidates = _candidates(a, mode)
    cap = dimension_cap(s, n)
    best: t.Dict[str, t.Any] = {"value": -1, "windows": None}
    nodes = 0

    def merges(dist: Matrix, k: int, A: t.FrozenSet[int]) -> int:
        anchor = k + min(A)
        return sum(1 for i in A if dist[anchor][k + i] + dist[k + i][anchor] != 0)

    def covered(chosen: t.Sequence[t.FrozenSet[int]], j: int) -> bool:
        return any(j - k in chosen[k] for k in range(max(0, j - n), min(j, len(chosen) - 1) + 1))

    def visit(k: int, dist: Matrix, chosen: t.List[t.FrozenSet[int]]) -> None:
        nonlocal nodes
        nodes += 1
        if k == window_count:
            value = _equality_classes(dist, counted)
            if value > best["value"]:
                best["value"], best["windows"] = value, tuple(chosen)
                logger.debug("s=%d: cell of dimension %d found after %d nodes", s, value, nodes)
            return
        for A in sorted(candidates, key=lambda A: (merges(dist, k, A), len(A), sorted(A))):
            extended = _relax(dist, _window_arcs(weights, k, A, strict))
            if extended is None:
                continue
            chosen.append(A)
            tight = mode is Mode.satisfy or k not in counted or covered(chosen, k)
            if tight and _equality_classes(extended, counted) > best["value"]:
                visit(k + 1, extended, chosen)
            chosen.pop()
            if best["value"] >= cap:
                return

    start = [[0 if u == v else INF for v in range(length)] for u in range(length)]
    visit(0, start, [])
    if best["windows"] is None:
        raise EmptyComplex(f"No feasible pattern for {a} at s={s}.", s=s)
    witnesses = ()
    if mode is Mode.minimal:
        witnesses = tuple(sorted((j, k) for j, k in covering_windows(best["windows"], length, n).items()
                                 if j in counted))
    logger.debug("%s s=%d %s: dimension %d (%d search nodes)", a, s, mode.value, best["value"], nodes)
    return best["value"], TightnessPattern(windows=best["windows"], witnesses=witnesses)


@dataclass
class LowerBoundFamily:
    """A family of words satisfying a with a fixed density of free coordinates.

    Attributes:
        case: 1 when an edge of P(a) carries three or more points, else 2.
        rate: Free coordinates per position; a lower bound for H(a).
        description: Human-readable summary of the construction.
        free_positions: Free coordinates within the sampled range.
        samples: Verified family members in the coordinates of a.
    """
    case: int
    rate: Fraction
    description: str
    edge_index: int
    free_positions: t.Tuple[int, ...] = ()
    samples: t.List[FiniteWord] = field(default_factory=list)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"case": self.case, "rate": format_rational(self.rate), "description": self.description,
                "edge_index": self.edge_index, "free_positions": len(self.free_positions)}


def _case_one_layout(on_edge: t.Sequence[int]) -> t.Tuple[t.Callable[[int], t.Optional[int]], str]:
    """Classify positions as fixed zero (0) or free (None) for an edge with >= 3 points."""
    g = math.gcd(*(p - on_edge[0] for p in on_edge[1:]))
    reduced = [(p - on_edge[0]) // g for p in on_edge]
    evens = [r for r in reduced if r % 2 == 0]
    odds = [r for r in reduced if r % 2 == 1]
    same, other = (evens, odds) if len(evens) >= 2 else (odds, evens)
    half = (same[1] - same[0]) // 2

    def layout(x: int) -> t.Optional[int]:
        u = x // g
        if u % 2 or ((u // 2) // half) % 2 == 0:
            return 0
        return None

    description = (f"edge points {list(on_edge)}: reduced by gcd {g}, pair {same[0]},{same[1]} "
                   f"with odd offset {other[0] - same[0]}")
    return layout, description


def _case_two_layout(length: int, i0: int, c: Fraction) -> t.Tuple[t.Callable[[int], t.Optional[Fraction]], Fraction]:
    k = math.gcd(length, i0)
    reduced_length, reduced_i0 = length // k, i0 // k
    inverse = pow(reduced_i0 % reduced_length, -1, reduced_length)

    def layout(x: int) -> t.Optional[Fraction]:
        u = x // k
        m = (-u * inverse) % reduced_length
        if m % 2 == 0:
            return Fraction(0)
        q = (u + m * reduced_i0) // reduced_length
        return c if q % 2 == 0 else None

    return layout, Fraction(reduced_length // 2, 2 * reduced_length)


def lower_bound_family(a: CoefficientVector,
                       seed: int = 0,
                       draws: int = 5,
                       length: t.Optional[int] = None) -> LowerBoundFamily:
    """Certified lower bound on H(a) for a non-regular vector from an explicit family.

    Case 1 (an edge with >= 3 points): on every other even position block the
    coordinates are free and non-negative, rate 1/4. Case 2 (only two-point edges):
    on the longest edge, residues modulo the edge length are split into zero,
    c and free (>= c) tiers, rate floor(L'/2) / (2L').

    Raises:
        RegularVector: If a is regular (H(a) = 0).
        FamilyVerificationFailed: If a sampled member does not satisfy a.
    """
    polygon = newton_polygon(a)
    if classify_regular(a, polygon).is_regular:
        raise RegularVector(f"{a} is regular, so H(a) = 0.", vector=a.render())
    length = length or max(48, 12 * (a.n + 1))
    rng = np.random.default_rng(seed)

    rich = [index for index, edge in enumerate(polygon.edges) if len(edge.on_edge) >= 3]
    if rich:
        edge_index = rich[0]
        normalized, transform = normalize_edge(a, edge_index, polygon)
        layout, detail = _case_one_layout(polygon.edges[edge_index].on_edge)
        floor_value = Fraction(0)
        case, rate = 1, Fraction(1, 4)
    else:
        edge_index = max(range(len(polygon.edges)), key=lambda e: (polygon.edges[e].length, -e))
        edge = polygon.edges[edge_index]
        normalized, transform = normalize_edge(a, edge_index, polygon)
        start, edge_length = edge.start[0], edge.length
        off = [i for i in normalized.support if (i - start) % edge_length]
        i0 = min(off, key=lambda i: (normalized.entries[i].value, i))
        c = normalized.entries[i0].value
        shifted_layout, rate = _case_two_layout(edge_length, i0 - start, c)

        def layout(x: int) -> t.Optional[Fraction]:
            return shifted_layout(x - start)

        floor_value = c
        detail = f"edge of length {edge_length}, i0={i0}, c={format_rational(c)}, k={math.gcd(edge_length, i0 - start)}"
        case = 2

    fixed = [layout(x) for x in range(length)]
    free = tuple(x for x, v in enumerate(fixed) if v is None)
    samples = []
    for draw in range(draws):
        extra = rng.integers(0, 4, size=length)
        values = [v if v is not None else floor_value + Fraction(int(extra[x]), 2) for x, v in enumerate(fixed)]
        word = FiniteWord(tuple(values))
        if not satisfies(normalized, word):
            raise FamilyVerificationFailed(f"Family member {draw} does not satisfy the normalized vector.",
                                           case=case, draw=draw)
        original = transform.denormalize_word(word)
        if not satisfies(a, original):
            raise FamilyVerificationFailed(f"Family member {draw} does not satisfy {a}.", case=case, draw=draw)
        samples.append(original)
    description = f"case {case}: {detail}"
    logger.info("lower bound family for %s: %s, rate %s", a, description, rate)
    return LowerBoundFamily(case=case, rate=rate, description=description, edge_index=edge_index,
                            free_positions=free, samples=samples)


@dataclass
class DimensionTable:
    """Computed d_s (or m_s) for consecutive s with the derived entropy brackets.

    Attributes:
        rows: One row per s with columns s, dim, ratio, cap, witness.
        mode: Whether rows are d_s (satisfy) or m_s (minimal).
        n: Order of the vector.
        h_upper: Smallest ratio dim/s, an upper bound for the entropy.
        h_lower: Rate of a verified lower bound family, when one applies.
    """
    rows: pd.DataFrame
    mode: Mode
    n: int
    h_upper: Fraction
    h_lower: t.Optional[Fraction] = None
    family: t.Optional[LowerBoundFamily] = None

    @property
    def values(self) -> t.Dict[int, int]:
        return dict(zip(self.rows["s"].tolist(), self.rows["dim"].tolist()))

    def subadditivity_violations(self) -> t.List[t.Tuple[int, int]]:
        values = self.values
        return [(i, j) for i in values for j in values
                if i <= j and i + j in values and values[i + j] > values[i] + values[j]]

    @property
    def subadditive(self) -> bool:
        return not self.subadditivity_violations()

    @property
    def cap_respected(self) -> bool:
        return bool((self.rows["dim"] <= self.rows["cap"]).all())

    def verify(self) -> None:
        """Raise InconsistentTable when rows break subadditivity or exceed the cap.

        Both hold for every exact table, so a failure means the search is wrong.
        """
        violations = self.subadditivity_violations()
        over_cap = [int(row.s) for row in self.rows.itertuples(index=False) if row.dim > row.cap]
        if violations or over_cap:
            raise InconsistentTable(f"{self.mode.value} table is inconsistent: subadditivity fails at {violations}, "
                                    f"cap exceeded at s in {over_cap}.",
                                    violations=[list(pair) for pair in violations], over_cap=over_cap)

    def residue_deltas(self) -> t.Dict[int, t.List[int]]:
        """d_s - d_{s-(n+1)} grouped by s mod (n+1)."""
        values, period = self.values, self.n + 1
        deltas: t.Dict[int, t.List[int]] = {}
        for s in sorted(values):
            if s - period in values:
                deltas.setdefault(s % period, []).append(values[s] - values[s - period])
        return deltas

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"schema_version": 1,
                "mode": self.mode.value,
                "rows": [{"s": int(row.s), "dim": int(row.dim), "ratio": format_rational(row.ratio),
                          "cap": int(row.cap), "witness": row.witness}
                         for row in self.rows.itertuples(index=False)],
                "h_upper": format_rational(self.h_upper),
                "h_lower": format_rational(self.h_lower) if self.h_lower is not None else None,
                "family": self.family.to_dict() if self.family else None,
                "subadditive": self.subadditive,
                "cap_respected": self.cap_respected,
                "residue_deltas": {str(r): d for r, d in sorted(self.residue_deltas().items())}}


def entropy_report(a: CoefficientVector,
                   s_max: int,
                   mode: t.Union[str, Mode] = Mode.satisfy,
                   progress: bool = False,
                   seed: int = 0) -> DimensionTable:
    """Rows s = n+1..s_max and the brackets for H(a) (satisfy) or h(a) (minimal).

    Raises:
        STooSmall: If s_max <= n.
        InconsistentTable: If the rows break subadditivity or the dimension cap.
    """
    mode = Mode.handle(mode)
    if s_max < a.n + 1:
        raise STooSmall(f"s_max must be at least n + 1 = {a.n + 1}, got {s_max}.", s=s_max, n=a.n)
    records = []
    for s in tqdm(range(a.n + 1, s_max + 1), disable=not progress, desc="s"):
        value, pattern = dimension_search(a, s, mode)
        records.append({"s": s, "dim": value, "ratio": Fraction(value, s),
                        "cap": dimension_cap(s, a.n), "witness": pattern.render()})
    rows = pd.DataFrame.from_records(records, columns=["s", "dim", "ratio", "cap", "witness"])
    table = DimensionTable(rows=rows, mode=mode, n=a.n, h_upper=min(rows["ratio"]))
    if mode is Mode.satisfy and not classify_regular(a).is_regular:
        try:
            table.family = lower_bound_family(a, seed=seed)
            table.h_lower = table.family.rate
        except TropRecError as exc:
            logger.warning("no lower bound family for %s: %s", a, exc)
    table.verify()
    return table
