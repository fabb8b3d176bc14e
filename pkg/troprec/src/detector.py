"""Decide whether a vector admits a non-periodic minimal recurrent sequence.

Minimal sequences can be equalized onto the grid V = {j + i/(2n+2)} inside [0, M]
without changing whether they are periodic, so the question reduces to the finite
graph whose vertices are valid (2n+1)-windows over V and whose arrows are
(2n)-overlaps. After repeatedly deleting vertices without incoming or outgoing
arrows, every minimal V-sequence is periodic iff the graph is a disjoint union of
simple cycles.

Letters are stored as integer codes c meaning c / (2n+2); coefficients are scaled
by the same denominator so all window arithmetic is on ints.
"""
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import logging
import math
import typing as t

from igraph import Graph
from tqdm import tqdm

from troprec.src.core import CoefficientVector, AffineNormalization, format_rational, newton_polygon, normalize_edge
from troprec.src.errors import (InfiniteCoefficient, NonIntegerCoefficient, EndpointsNotZero, NotAxisNormalized,
                                AmbiguousEdge, StateLimitExceeded, EmptyGraphAfterPruning, NotAllPeriodic,
                                DotExportError, TropRecError)
from troprec.src.recurrence import FiniteWord, PeriodicSequence


logger = logging.getLogger(__name__)

Window = t.Tuple[int, ...]


def require_attribute(attr_name):
    """
    Decorator to check if a specific attribute exists on the instance
    and is not None before calling the method.
    """
    steps = {"graph": ".construct_graph", "pruned": ".prune_graph", "verdict": ".decide"}

    def decorator(method):
        def wrapper(self, *args, **kwargs):
            if not hasattr(self, attr_name):
                raise AttributeError(f"The object is missing the required attribute '{attr_name}'.")
            if getattr(self, attr_name) is None:
                error_msg = (f"Please call {steps[attr_name]} first to get the {attr_name.replace('_', ' ')}"
                             if attr_name in steps else f"The attribute '{attr_name}' must not be None.")
                raise ValueError(error_msg)
            return method(self, *args, **kwargs)
        wrapper.__name__ = method.__name__
        wrapper.__doc__ = method.__doc__
        return wrapper
    return decorator


@dataclass(frozen=True)
class Alphabet:
    """The grid V as integer codes 0..M*(2n+2) over ``denominator`` = 2n+2.

    Attributes:
        n: Order of the recurrence.
        M: Largest coefficient; V = {0} when M = 0.
        coefficients: a_i scaled by the denominator.
    """
    n: int
    M: int
    coefficients: t.Tuple[int, ...]

    @property
    def denominator(self) -> int:
        return 2 * self.n + 2

    @property
    def top(self) -> int:
        return self.M * self.denominator

    @property
    def codes(self) -> range:
        return range(self.top + 1)

    @property
    def values(self) -> t.Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.denominator) for c in self.codes)

    @property
    def window_length(self) -> int:
        return 2 * self.n + 1

    def __len__(self) -> int:
        return self.top + 1

    def decode(self, window: t.Sequence[int]) -> t.Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.denominator) for c in window)

    def render(self, window: t.Sequence[int]) -> str:
        return ",".join(format_rational(v) for v in self.decode(window))


def build_alphabet(a: CoefficientVector) -> Alphabet:
    """Alphabet for an axis-normalized all-finite integer vector.

    Raises:
        InfiniteCoefficient: If some a_i is +inf.
        NonIntegerCoefficient: If some a_i is not an integer.
        EndpointsNotZero: If a_0 or a_n is not 0.
        NotAxisNormalized: If some a_i is negative.
    """
    if not a.is_all_finite:
        raise InfiniteCoefficient(f"{a} has infinite entries; use the witness generators for such vectors.",
                                  vector=a.render())
    if not a.is_integral:
        raise NonIntegerCoefficient(f"{a} has non-integer entries; normalize an edge first.", vector=a.render())
    if a.entries[0].value != 0 or a.entries[-1].value != 0:
        raise EndpointsNotZero(f"{a} must have a_0 = a_n = 0.", vector=a.render())
    if any(v < 0 for v in a.coefficients):
        raise NotAxisNormalized(f"{a} has negative entries.", vector=a.render())
    M = int(a.M)
    denominator = 2 * a.n + 2
    return Alphabet(n=a.n, M=M, coefficients=tuple(int(v) * denominator for v in a.coefficients))


def _window_minima(coefficients: t.Sequence[int], n: int, word: t.Sequence[int]) -> t.List[int]:
    return [min(coefficients[i] + word[k + i] for i in range(n + 1)) for k in range(len(word) - n)]


def is_valid_window(alphabet: Alphabet, window: t.Sequence[int]) -> bool:
    """Every window ties and the middle letter is tight in one of them."""
    coefficients, n = alphabet.coefficients, alphabet.n
    minima = _window_minima(coefficients, n, window)
    for k, low in enumerate(minima):
        if sum(1 for i in range(n + 1) if coefficients[i] + window[k + i] == low) < 2:
            return False
    return any(coefficients[n - k] + window[n] == minima[k] for k in range(n + 1))


def _enumerate_subtree(coefficients: t.Tuple[int, ...],
                       n: int,
                       top: int,
                       first: int,
                       limit: t.Optional[int]) -> t.Tuple[t.List[Window], int]:
    length = 2 * n + 1
    word = [first] + [0] * (length - 1)
    found: t.List[Window] = []
    visited = 0

    def middle_is_tight() -> bool:
        minima = _window_minima(coefficients, n, word)
        return any(coefficients[n - k] + word[n] == minima[k] for k in range(n + 1))

    def extend(p: int) -> bool:
        nonlocal visited
        visited += 1
        if p == length:
            if middle_is_tight():
                found.append(tuple(word))
            return limit is not None and len(found) > limit
        if p < n:
            letters = range(top + 1)
        else:
            # letter p closes window p - n; a_n = 0 so it enters the window as itself
            k = p - n
            partial = [coefficients[i] + word[k + i] for i in range(n)]
            low = min(partial)
            letters = range(low, top + 1) if partial.count(low) >= 2 else range(low, min(low, top) + 1)
        for x in letters:
            word[p] = x
            if extend(p + 1):
                return True
        return False

    extend(1)
    return found, visited


def enumerate_windows(a: CoefficientVector,
                      alphabet: t.Optional[Alphabet] = None,
                      limit: t.Optional[int] = None,
                      workers: int = 1,
                      progress: bool = False) -> t.List[Window]:
    """All valid windows, in lexicographic order.

    Prefixes are extended letter by letter; once a prefix closes a window only the
    letters keeping that window's minimum attained twice are tried. Subtrees under
    each first letter are independent and can be spread over ``workers`` processes.

    Raises:
        StateLimitExceeded: If more than ``limit`` windows exist.
    """
    alphabet = alphabet or build_alphabet(a)
    firsts = list(alphabet.codes)
    tasks = [(alphabet.coefficients, alphabet.n, alphabet.top, first, limit) for first in firsts]
    windows: t.List[Window] = []
    visited = 0
    if workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_enumerate_subtree, *zip(*tasks))
            for found, count in tqdm(results, total=len(tasks), disable=not progress, desc="windows"):
                windows.extend(found)
                visited += count
    else:
        for task in tqdm(tasks, disable=not progress, desc="windows"):
            found, count = _enumerate_subtree(*task)
            windows.extend(found)
            visited += count
            if limit is not None and len(windows) > limit:
                break
    if limit is not None and len(windows) > limit:
        raise StateLimitExceeded(len(windows), limit, alphabet_size=len(alphabet), nodes_visited=visited)
    logger.debug("enumerated %d windows for %s (%d search nodes)", len(windows), a, visited)
    return windows


@dataclass
class WindowGraph:
    """Valid windows joined by (2n)-overlap arrows, stored as an igraph digraph.

    Attributes:
        graph: Directed graph; vertex attribute ``window`` holds the letter codes.
        alphabet: The alphabet the windows are written in.
        pruned: Whether dead ends have been removed.
        stats: Counters collected while building and pruning.
    """
    graph: Graph
    alphabet: Alphabet
    pruned: bool = False
    stats: t.Dict[str, int] = field(default_factory=dict)

    @property
    def windows(self) -> t.List[Window]:
        return list(self.graph.vs["window"]) if self.graph.vcount() else []

    @property
    def vertex_count(self) -> int:
        return self.graph.vcount()

    @property
    def arrow_count(self) -> int:
        return self.graph.ecount()

    def arrows(self) -> t.List[t.Tuple[Window, Window]]:
        windows = self.windows
        return sorted((windows[u], windows[v]) for u, v in self.graph.get_edgelist())


def build_graph(windows: t.Sequence[Window], alphabet: Alphabet) -> WindowGraph:
    order = sorted(set(windows))
    by_prefix: t.Dict[Window, t.List[int]] = defaultdict(list)
    for index, window in enumerate(order):
        by_prefix[window[:-1]].append(index)
    edges = [(index, successor)
             for index, window in enumerate(order)
             for successor in by_prefix.get(window[1:], ())]
    graph = Graph(n=len(order), edges=edges, directed=True)
    graph.vs["window"] = order
    logger.debug("window graph: %d vertices, %d arrows", len(order), len(edges))
    return WindowGraph(graph=graph, alphabet=alphabet,
                       stats={"windows": len(order), "arrows": len(edges)})


def prune(g: WindowGraph) -> WindowGraph:
    """Peel vertices with in-degree 0 or out-degree 0, one layer per round, until none remain.

    Raises:
        EmptyGraphAfterPruning: If nothing survives (the zero window always should).
    """
    graph = g.graph
    outgoing = [graph.successors(v) for v in range(graph.vcount())]
    incoming = [graph.predecessors(v) for v in range(graph.vcount())]
    indegree = [len(p) for p in incoming]
    outdegree = [len(s) for s in outgoing]
    alive = [True] * graph.vcount()
    rounds = 0
    layer = [v for v in range(graph.vcount()) if indegree[v] == 0 or outdegree[v] == 0]
    while layer:
        rounds += 1
        for v in layer:
            alive[v] = False
        touched = set()
        for v in layer:
            for w in outgoing[v]:
                if alive[w]:
                    indegree[w] -= 1
                    touched.add(w)
            for u in incoming[v]:
                if alive[u]:
                    outdegree[u] -= 1
                    touched.add(u)
        layer = sorted(v for v in touched if alive[v] and (indegree[v] == 0 or outdegree[v] == 0))

    keep = [v for v in range(graph.vcount()) if alive[v]]
    if not keep:
        raise EmptyGraphAfterPruning("Pruning removed every window; the zero window must survive.",
                                     windows=graph.vcount())
    pruned = graph.induced_subgraph(keep, implementation="copy_and_delete")
    stats = dict(g.stats, pruned_vertices=pruned.vcount(), pruned_arrows=pruned.ecount(), pruning_rounds=rounds)
    logger.debug("pruned %d -> %d vertices in %d rounds", graph.vcount(), pruned.vcount(), rounds)
    return WindowGraph(graph=pruned, alphabet=g.alphabet, pruned=True, stats=stats)


class Verdict(Enum):
    AllPeriodic = "AllPeriodic"
    NonPeriodicExists = "NonPeriodicExists"


class WitnessKind(Enum):
    Branching = "Branching"
    TwoCycles = "TwoCycles"


def _walk_to_word(windows: t.Sequence[Window], walk: t.Sequence[int]) -> t.List[int]:
    """First letters of consecutive windows followed by the tail of the last one."""
    return [windows[v][0] for v in walk] + list(windows[walk[-1]][1:])


def _thue_morse(count: int) -> t.List[int]:
    return [bin(i).count("1") % 2 for i in range(count)]


@dataclass(frozen=True)
class WitnessStructure:
    """Certificate of a non-periodic minimal sequence in the pruned graph.

    For ``Branching``: ``loops`` are two closed walks from ``vertices[0]`` leaving it
    through different arrows. For ``TwoCycles``: ``loops`` are cycles A and B in
    different strongly connected components and ``connector`` leads from A to B.
    Vertex ids refer to the pruned graph.
    """
    kind: WitnessKind
    vertices: t.Tuple[int, ...]
    loops: t.Tuple[t.Tuple[int, ...], t.Tuple[int, ...]]
    connector: t.Tuple[int, ...] = ()

    def walk(self, min_length: int, schedule: t.Optional[t.Sequence[int]] = None) -> t.List[int]:
        if self.kind is WitnessKind.TwoCycles:
            first, second = self.loops
            repeats = max(3, math.ceil(min_length / min(len(first), len(second))))
            return list(first) * repeats + list(self.connector) + list(second) * repeats
        schedule = list(schedule) if schedule else _thue_morse(min_length)
        walk: t.List[int] = []
        step = 0
        while len(walk) < min_length:
            walk.extend(self.loops[schedule[step % len(schedule)]])
            step += 1
        return walk + [self.vertices[0]]

    def unroll(self, g: WindowGraph, min_length: t.Optional[int] = None,
               schedule: t.Optional[t.Sequence[int]] = None) -> FiniteWord:
        """Materialize the certificate as a word of length at least ``min_length`` (default 4(2n+1))."""
        alphabet = g.alphabet
        min_length = min_length or 4 * alphabet.window_length
        windows = g.windows
        return FiniteWord(alphabet.decode(_walk_to_word(windows, self.walk(min_length, schedule))))

    def unroll_pair(self, g: WindowGraph, min_length: t.Optional[int] = None) -> t.Tuple[FiniteWord, FiniteWord]:
        """Two certificate words; for Branching they leave the branch vertex differently at the start."""
        if self.kind is WitnessKind.TwoCycles:
            first = self.unroll(g, min_length)
            return first, first
        length = min_length or 4 * g.alphabet.window_length
        schedule = _thue_morse(max(2, length))
        flipped = [1 - c for c in schedule]
        return self.unroll(g, length, schedule), self.unroll(g, length, flipped)

    def to_dict(self, g: WindowGraph) -> t.Dict[str, t.Any]:
        render = g.alphabet.render
        windows = g.windows
        return {"kind": self.kind.value,
                "vertices": [render(windows[v]) for v in self.vertices],
                "loops": [[render(windows[v]) for v in loop] for loop in self.loops],
                "connector": [render(windows[v]) for v in self.connector]}


@dataclass
class DetectorVerdict:
    verdict: Verdict
    stable_periodic_only: bool
    cycles: t.List[t.List[int]] = field(default_factory=list)
    witness: t.Optional[WitnessStructure] = None
    stats: t.Dict[str, int] = field(default_factory=dict)

    @property
    def all_periodic(self) -> bool:
        return self.verdict is Verdict.AllPeriodic

    def to_dict(self, g: WindowGraph) -> t.Dict[str, t.Any]:
        windows = g.windows
        return {"schema_version": 1,
                "verdict": self.verdict.value,
                "stable_periodic_only": self.stable_periodic_only,
                "cycles": [_cycle_sequence(windows, g.alphabet, cycle).to_dict() for cycle in self.cycles],
                "witness": self.witness.to_dict(g) if self.witness else None,
                "stats": dict(sorted(self.stats.items()))}


def _cycle_sequence(windows: t.Sequence[Window], alphabet: Alphabet, cycle: t.Sequence[int]) -> PeriodicSequence:
    return PeriodicSequence(d=len(cycle), values=alphabet.decode([windows[v][0] for v in cycle]))


def _unique_cycles(graph: Graph) -> t.List[t.List[int]]:
    successor = [graph.successors(v)[0] for v in range(graph.vcount())]
    seen = [False] * graph.vcount()
    cycles = []
    for start in range(graph.vcount()):
        if seen[start]:
            continue
        cycle, v = [], start
        while not seen[v]:
            seen[v] = True
            cycle.append(v)
            v = successor[v]
        cycles.append(cycle)
    return cycles


def _component_cycle(graph: Graph, members: t.Set[int], start: int) -> t.List[int]:
    cycle, v = [start], next(w for w in graph.successors(start) if w in members)
    while v != start:
        cycle.append(v)
        v = next(w for w in graph.successors(v) if w in members)
    return cycle


def _shortest_path(graph: Graph, source: int, target: int, mode: str = "out") -> t.List[int]:
    return graph.get_shortest_paths(source, to=target, mode=mode, output="vpath")[0]


def _nontrivial(graph: Graph, members: t.Sequence[int]) -> bool:
    return len(members) > 1 or members[0] in graph.successors(members[0])


def _branching_witness(graph: Graph, membership: t.Sequence[int]) -> t.Optional[WitnessStructure]:
    for v0 in range(graph.vcount()):
        inside = sorted(w for w in set(graph.successors(v0)) if membership[w] == membership[v0])
        if len(inside) < 2:
            continue
        v1, v2 = inside[:2]
        loops = tuple(tuple([v0] + _shortest_path(graph, v, v0)[:-1]) for v in (v1, v2))
        return WitnessStructure(kind=WitnessKind.Branching, vertices=(v0, v1, v2), loops=loops)
    return None


def _two_cycles_witness(graph: Graph, membership: t.Sequence[int],
                        components: t.Sequence[t.Sequence[int]]) -> WitnessStructure:
    u, w = next((u, w) for u, w in sorted(graph.get_edgelist()) if membership[u] != membership[w])
    cyclic = {c for c, members in enumerate(components) if _nontrivial(graph, members)}
    upstream = graph.subcomponent(u, mode="in")
    downstream = graph.subcomponent(w, mode="out")
    exit_vertex = min(v for v in upstream if membership[v] in cyclic)
    entry_vertex = min(v for v in downstream if membership[v] in cyclic)
    to_u = _shortest_path(graph, exit_vertex, u)
    from_w = _shortest_path(graph, w, entry_vertex)
    first = _component_cycle(graph, set(components[membership[exit_vertex]]), exit_vertex)
    second = _component_cycle(graph, set(components[membership[entry_vertex]]), entry_vertex)
    # A is walked ending at its exit vertex, the connector starts right after it
    first = first[1:] + first[:1]
    connector = tuple(to_u[1:] + from_w[:-1])
    return WitnessStructure(kind=WitnessKind.TwoCycles, vertices=(u, w),
                            loops=(tuple(first), tuple(second)), connector=connector)


def decide(g: WindowGraph) -> DetectorVerdict:
    """All minimal sequences are periodic iff every pruned vertex has in- and out-degree 1."""
    graph = g.graph
    indegree, outdegree = graph.indegree(), graph.outdegree()
    clustering = graph.connected_components(mode="strong")
    membership = clustering.membership
    components = [sorted(members) for members in clustering]
    stable = True
    for members in components:
        if not _nontrivial(graph, members):
            continue
        inside = set(members)
        for v in members:
            if sum(1 for w in graph.successors(v) if w in inside) != 1:
                stable = False
                break
    stats = dict(g.stats, strong_components=len(components))
    if all(d == 1 for d in indegree) and all(d == 1 for d in outdegree):
        verdict = DetectorVerdict(verdict=Verdict.AllPeriodic, stable_periodic_only=True,
                                  cycles=_unique_cycles(graph), stats=stats)
    else:
        witness = _branching_witness(graph, membership) or _two_cycles_witness(graph, membership, components)
        verdict = DetectorVerdict(verdict=Verdict.NonPeriodicExists, stable_periodic_only=stable,
                                  witness=witness, stats=stats)
    logger.info("verdict %s (stable periodic only: %s)", verdict.verdict.value, verdict.stable_periodic_only)
    return verdict


def periodic_solutions(g: WindowGraph, verdict: t.Optional[DetectorVerdict] = None) -> t.List[PeriodicSequence]:
    """One periodic sequence per simple cycle of an all-periodic pruned graph.

    Raises:
        NotAllPeriodic: If the pruned graph is not a union of simple cycles.
    """
    verdict = verdict or decide(g)
    if not verdict.all_periodic:
        raise NotAllPeriodic("The pruned graph has a vertex with several successors.")
    windows = g.windows
    sequences = [_cycle_sequence(windows, g.alphabet, cycle) for cycle in verdict.cycles]
    return sorted(sequences, key=lambda p: (p.d, p.values))


def render_dot(g: WindowGraph) -> str:
    windows = g.windows
    order = sorted(range(len(windows)), key=lambda v: windows[v])
    rank = {v: r for r, v in enumerate(order)}
    lines = ["digraph windows {"]
    for v in order:
        lines.append(f'\t"w{rank[v]}" [label="{g.alphabet.render(windows[v])}"];')
    for u, w in sorted((rank[u], rank[w]) for u, w in g.graph.get_edgelist()):
        lines.append(f'\t"w{u}" -> "w{w}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: WindowGraph, path: str) -> None:
    """Write the graph as Graphviz DOT; nodes in lexicographic window order.

    Raises:
        DotExportError: If the file cannot be written.
    """
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(render_dot(g))
    except OSError as exc:
        raise DotExportError(f"Cannot write DOT file {path}: {exc}", path=str(path)) from exc


def is_axis_normalized(a: CoefficientVector) -> bool:
    return (a.is_all_finite and a.is_integral and a.entries[0].value == 0 and a.entries[-1].value == 0
            and all(v >= 0 for v in a.coefficients))


class RecurrenceDetector:
    """Runs the window-graph decision procedure on one coefficient vector.

    Every step stores its result on the instance, so the graph, the pruned graph
    and the verdict can be inspected in between.

    Attributes:
        vector (CoefficientVector): The vector as given.
        normalized (CoefficientVector): The axis-normalized vector the graph is built for.
        transform (AffineNormalization): Maps words between the two vectors.
        alphabet (Alphabet): Letters of the windows.
        windows (Optional[List[Window]]): Enumerated windows.
        graph (Optional[WindowGraph]): The window graph before pruning.
        pruned (Optional[WindowGraph]): The window graph after pruning.
        verdict (Optional[DetectorVerdict]): Outcome of :meth:`decide`.
    """

    def __init__(self,
                 a: CoefficientVector,
                 edge_index: t.Optional[int] = None,
                 max_states: t.Optional[int] = None,
                 workers: int = 1,
                 progress: bool = False) -> None:
        """Normalize the vector and build its alphabet.

        Args:
            a: The coefficient vector.
            edge_index: Bounded edge of P(a) moved onto the axis. Needed only when
                P(a) has several bounded edges.
            max_states: Abort window enumeration beyond this many windows.
            workers: Processes used for window enumeration.
            progress: Show a tqdm progress bar while enumerating.

        Raises:
            AmbiguousEdge: If P(a) has several bounded edges and no edge_index is given.
        """
        self.vector = a
        edges = newton_polygon(a).edges
        if is_axis_normalized(a) and edge_index is None:
            self.normalized, self.transform = a, AffineNormalization(alpha=Fraction(0), beta=Fraction(0))
        elif edge_index is None and len(edges) > 1:
            raise AmbiguousEdge(f"P(a) has {len(edges)} bounded edges; choose one.", edge_count=len(edges))
        else:
            self.normalized, self.transform = normalize_edge(a, edge_index or 0)
        self.max_states = max_states
        self.workers = workers
        self.progress = progress
        self.alphabet: Alphabet = build_alphabet(self.normalized)
        self.windows: t.Optional[t.List[Window]] = None
        self.graph: t.Optional[WindowGraph] = None
        self.pruned: t.Optional[WindowGraph] = None
        self.verdict: t.Optional[DetectorVerdict] = None

    def construct_graph(self) -> None:
        """Enumerate the windows and join them by overlap arrows."""
        self.windows = enumerate_windows(self.normalized, self.alphabet, limit=self.max_states,
                                         workers=self.workers, progress=self.progress)
        self.graph = build_graph(self.windows, self.alphabet)

    @require_attribute("graph")
    def prune_graph(self) -> None:
        self.pruned = prune(self.graph)

    @require_attribute("pruned")
    def decide(self) -> DetectorVerdict:
        self.verdict = decide(self.pruned)
        return self.verdict

    def run(self) -> DetectorVerdict:
        self.construct_graph()
        self.prune_graph()
        return self.decide()

    @require_attribute("verdict")
    def periodic_solutions(self, original: bool = False) -> t.List[PeriodicSequence]:
        """Periodic solutions from the cycles; in original coordinates when ``original`` is set.

        In original coordinates the drift per period is alpha * d.
        """
        solutions = periodic_solutions(self.pruned, self.verdict)
        if not original:
            return solutions
        transform = self.transform
        return [PeriodicSequence(d=p.d,
                                 values=tuple(transform.denormalize_value(r, v) for r, v in enumerate(p.values)),
                                 drift=transform.alpha * p.d)
                for p in solutions]

    @require_attribute("verdict")
    def witness_word(self, original: bool = False, min_length: t.Optional[int] = None) -> FiniteWord:
        """Unrolled witness word of a NonPeriodicExists verdict.

        Raises:
            TropRecError: If the verdict is AllPeriodic, so there is no witness.
        """
        if self.verdict.witness is None:
            raise TropRecError("The verdict is AllPeriodic; there is no witness to unroll.")
        word = self.verdict.witness.unroll(self.pruned, min_length)
        return self.transform.denormalize_word(word) if original else word

    @require_attribute("graph")
    def export_dot(self, path: str, pruned: bool = True) -> None:
        export_dot(self.pruned if pruned and self.pruned is not None else self.graph, path)

    def to_dict(self) -> t.Dict[str, t.Any]:
        payload = {"vector": self.vector.render(), "normalized": self.normalized.render(),
                   "transform": self.transform.to_dict()}
        if self.verdict is not None:
            payload.update(self.verdict.to_dict(self.pruned))
        return payload
