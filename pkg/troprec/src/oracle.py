"""Brute-force references for the tests.

Nothing here prunes or orders a search. Windows are checked with the same window
reports the library uses, and dimensions come from a plain numpy closure over every
exact argmin cell.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
import logging
import math
import typing as t

import numpy as np

from troprec.src.core import CoefficientVector
from troprec.src.detector import Alphabet, Window, build_alphabet
from troprec.src.entropy import Mode, word_layout
from troprec.src.errors import BudgetExceeded, EmptyComplex, ParameterOutOfRange, SamplingExhausted
from troprec.src.recurrence import FiniteWord, is_minimal, satisfies, window_report


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleConfig:
    max_enumeration: int = 200_000
    random_seed: int = 0

    def __post_init__(self):
        if self.max_enumeration <= 0:
            raise ParameterOutOfRange("max_enumeration must be positive.", max_enumeration=self.max_enumeration)

    def check(self, count: int, what: str) -> None:
        if count > self.max_enumeration:
            raise BudgetExceeded(f"{what}: {count} candidates exceed the budget {self.max_enumeration}.",
                                 count=count, budget=self.max_enumeration)


def brute_windows(a: CoefficientVector,
                  alphabet: t.Optional[Alphabet] = None,
                  config: OracleConfig = OracleConfig()) -> t.Set[Window]:
    """Every word of length 2n+1 over V that satisfies a and is minimal at its middle letter."""
    alphabet = alphabet or build_alphabet(a)
    config.check(len(alphabet) ** alphabet.window_length, "brute_windows")
    found = set()
    for codes in product(alphabet.codes, repeat=alphabet.window_length):
        word = FiniteWord(alphabet.decode(codes))
        if satisfies(a, word) and is_minimal(a, word):
            found.add(codes)
    return found


def _cell_weights(a: CoefficientVector, length: int) -> t.Dict[int, int]:
    """Integer weights spread by length + 1 so a strict arc can lose exactly 1."""
    scale = math.lcm(*(v.denominator for _, v in a.finite_items()))
    return {i: int(v * scale) * (length + 1) for i, v in a.finite_items()}


def _close(dist: np.ndarray) -> t.Optional[np.ndarray]:
    for m in range(len(dist)):
        dist = np.minimum(dist, dist[:, m, None] + dist[None, m, :])
    if (np.diag(dist) < 0).any():
        return None
    return dist


def _cell(dist: np.ndarray, weights: t.Dict[int, int], k: int, A: t.FrozenSet[int]) -> t.Optional[np.ndarray]:
    """Constrain window k to have its exact argmin on A."""
    dist = dist.copy()
    anchor = min(A)
    p0, w0 = k + anchor, weights[anchor]
    for i, w in weights.items():
        if i == anchor:
            continue
        if i in A:
            dist[k + i, p0] = min(dist[k + i, p0], w - w0)
            dist[p0, k + i] = min(dist[p0, k + i], w0 - w)
        else:
            dist[k + i, p0] = min(dist[k + i, p0], w - w0 - 1)
    return _close(dist)


def _class_count(dist: np.ndarray, positions: range) -> int:
    tied = (dist + dist.T) == 0
    return sum(1 for j in positions if not tied[j, positions.start:j].any())


def brute_dimension(a: CoefficientVector,
                    s: int,
                    mode: t.Union[str, Mode] = Mode.satisfy,
                    config: OracleConfig = OracleConfig()) -> int:
    """Largest dimension over every exact argmin cell, found without bounds or ordering.

    Each window k gets the exact set A_k where its minimum is attained. In minimal
    mode the word has n extra letters on each side and every middle position must be
    tight in some window; only the middle positions are counted.

    Raises:
        BudgetExceeded: If more than ``config.max_enumeration`` cells are tried.
        EmptyComplex: If no cell is feasible.
    """
    mode = Mode.handle(mode)
    length, counted = word_layout(s, a.n, mode)
    window_count = length - a.n
    weights = _cell_weights(a, length)
    subsets = [frozenset(A) for size in range(2, len(a.support) + 1) for A in combinations(a.support, size)]
    start = np.full((length, length), np.inf)
    np.fill_diagonal(start, 0)
    tries, best = 0, None
    chosen: t.List[t.FrozenSet[int]] = []

    def covered(j: int) -> bool:
        return any(j - k in chosen[k] for k in range(max(0, j - a.n), j + 1))

    def visit(dist: np.ndarray) -> None:
        nonlocal tries, best
        k = len(chosen)
        if k == window_count:
            value = _class_count(dist, counted)
            best = value if best is None else max(best, value)
            return
        for A in subsets:
            tries += 1
            config.check(tries, "brute_dimension")
            extended = _cell(dist, weights, k, A)
            if extended is None:
                continue
            chosen.append(A)
            if mode is Mode.satisfy or k not in counted or covered(k):
                visit(extended)
            chosen.pop()

    visit(start)
    if best is None:
        raise EmptyComplex(f"No feasible cell for {a} at s={s}.", s=s)
    return best


def _grid_value(rng: np.random.Generator, top: int) -> Fraction:
    return Fraction(int(rng.integers(0, 2 * top + 1)), 2)


def _sample_satisfying(a: CoefficientVector, length: int, rng: np.random.Generator) -> FiniteWord:
    top = max(1, int(a.M) + 1)
    values: t.List[Fraction] = [_grid_value(rng, top) for _ in range(a.n)]
    last = a.entries[a.n].value
    for p in range(a.n, length):
        k = p - a.n
        partial = [a.entries[i].value + values[k + i] for i in a.support if i < a.n]
        low = min(partial)
        x = low - last
        if partial.count(low) >= 2 and rng.random() < 0.5:
            x += _grid_value(rng, top)
        values.append(x)
    return FiniteWord(tuple(values))


def random_satisfying_words(a: CoefficientVector,
                            length: int,
                            count: int,
                            seed: t.Optional[int] = None,
                            config: OracleConfig = OracleConfig()) -> t.List[FiniteWord]:
    """Seeded random words of ``length`` satisfying a, each checked before it is returned.

    Raises:
        ParameterOutOfRange: If length <= n.
        SamplingExhausted: If too many draws fail the check.
    """
    if length < a.n + 1:
        raise ParameterOutOfRange(f"length must be at least {a.n + 1}.", length=length)
    rng = np.random.default_rng(config.random_seed if seed is None else seed)
    words, attempts = [], 0
    while len(words) < count:
        attempts += 1
        if attempts > 10 * count + 10:
            raise SamplingExhausted(f"Only {len(words)} of {count} words after {attempts} attempts.",
                                    attempts=attempts, found=len(words))
        word = _sample_satisfying(a, length, rng)
        if satisfies(a, word):
            words.append(word)
    return words


def lower_to_tight(a: CoefficientVector, word: FiniteWord) -> FiniteWord:
    """Lower every non-tight interior coordinate until it first becomes tight.

    Window minima never change, so satisfaction and earlier tightness are kept.
    """
    values = list(word.values)
    n = a.n
    last_window = len(values) - 1 - n
    for j in range(n, last_window + 1):
        current = FiniteWord(tuple(values))
        reports = [window_report(a, current, k) for k in range(j - n, j + 1)]
        if any(j - r.k in r.argmin for r in reports):
            continue
        values[j] = max(r.min_value - a.entries[j - r.k].value for r in reports if j - r.k in a.support)
    return FiniteWord(tuple(values), word.offset)


def random_minimal_words(a: CoefficientVector,
                         length: int,
                         count: int,
                         seed: t.Optional[int] = None,
                         config: OracleConfig = OracleConfig()) -> t.List[FiniteWord]:
    """Random satisfying words made minimal by :func:`lower_to_tight`."""
    words = [lower_to_tight(a, word) for word in random_satisfying_words(a, length, count, seed, config)]
    failing = [index for index, word in enumerate(words) if not is_minimal(a, word)]
    if failing:
        raise SamplingExhausted(f"{len(failing)} lowered words are not minimal.", failing=failing)
    return words
