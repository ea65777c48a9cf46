"""Weighted directed graphs with exact rational edge weights.

Vertices are the integers ``0 .. vertex_count-1``.  A graph is a total
weight function on ordered vertex pairs; the edge set is the set of pairs
with positive weight.  Weights are :class:`fractions.Fraction` values
end-to-end, so every predicate in this module is an exact decision rather
than a floating-point comparison.  Graphs are directed by default;
symmetry and looplessness are checked properties, not structural
assumptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

WeightLike = Union[int, str, Fraction]

__all__ = [
    "WeightedGraph",
    "UniformWeightReport",
    "MultipartiteClassification",
    "complete_graph",
    "multipartite_graph",
    "path_graph",
    "cycle_graph",
    "kite_graph",
    "uniform_weight",
    "has_directed_triangle",
    "is_strongly_connected",
    "find_kite",
    "regularity",
    "triangles_per_edge",
    "classify_multipartite",
    "block_projection",
    "automorphisms",
    "graph_to_json_dict",
    "graph_from_json_dict",
    "save_graph",
    "load_graph",
]


def _as_weight(value: WeightLike) -> Fraction:
    try:
        w = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid weight {value!r}") from exc
    if w < 0:
        raise ValueError(f"negative weight {value!r}")
    return w


class WeightedGraph:
    """Immutable weighted directed graph on ``0 .. vertex_count-1``.

    Alongside the exact weight table the constructor precomputes an
    integer form of the weights (numerators over one common denominator)
    and positive-adjacency lists; the counting routines in
    :mod:`insertproc.buildings` run entirely on the integer form.  Two
    internal dictionaries serve as per-graph memo caches; they never
    affect equality or hashing.
    """

    __slots__ = ("vertex_count", "_rows", "_den", "_num", "_out", "_in",
                 "_hash", "_bcache", "_tcache")

    def __init__(self, rows: Sequence[Sequence[WeightLike]]):
        n = len(rows)
        if n == 0:
            raise ValueError("graph needs at least one vertex")
        table = []
        for row in rows:
            if len(row) != n:
                raise ValueError("weight table must be square")
            table.append(tuple(_as_weight(w) for w in row))
        self.vertex_count = n
        self._rows: tuple[tuple[Fraction, ...], ...] = tuple(table)
        den = 1
        for row in self._rows:
            for w in row:
                den = lcm(den, w.denominator)
        self._den = den
        self._num = tuple(tuple(int(w * den) for w in row) for row in self._rows)
        self._out = tuple(tuple(j for j in range(n) if self._num[i][j] > 0)
                          for i in range(n))
        self._in = tuple(tuple(i for i in range(n) if self._num[i][j] > 0)
                         for j in range(n))
        self._hash = hash((n, self._rows))
        self._bcache: dict = {}
        self._tcache: dict = {}

    @classmethod
    def from_weights(cls, vertex_count: int,
                     weights: Mapping[tuple[int, int], WeightLike]
                     | Iterable[tuple[int, int, WeightLike]]) -> "WeightedGraph":
        """Build a graph from a sparse weight specification; missing pairs are 0."""
        if vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        rows = [[Fraction(0)] * vertex_count for _ in range(vertex_count)]
        items = weights.items() if isinstance(weights, Mapping) else (
            ((i, j), w) for i, j, w in weights)
        for (i, j), w in items:
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise ValueError(f"vertex pair ({i}, {j}) out of range")
            rows[i][j] = _as_weight(w)
        return cls(rows)

    def weight(self, i: int, j: int) -> Fraction:
        """Exact weight of the ordered pair ``(i, j)``."""
        if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
            raise ValueError(f"vertex pair ({i}, {j}) out of range")
        return self._rows[i][j]

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        return self._out[i]

    def in_neighbors(self, j: int) -> tuple[int, ...]:
        return self._in[j]

    def positive_edges(self) -> Iterator[tuple[int, int, Fraction]]:
        for i in range(self.vertex_count):
            for j in self._out[i]:
                yield i, j, self._rows[i][j]

    def is_symmetric(self) -> bool:
        n = self.vertex_count
        return all(self._rows[i][j] == self._rows[j][i]
                   for i in range(n) for j in range(i + 1, n))

    def is_loopless(self) -> bool:
        return all(self._rows[i][i] == 0 for i in range(self.vertex_count))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, WeightedGraph)
                and self.vertex_count == other.vertex_count
                and self._rows == other._rows)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        edges = sum(len(o) for o in self._out)
        return f"WeightedGraph(vertices={self.vertex_count}, positive_edges={edges})"


def complete_graph(q: int, w: WeightLike = 1) -> WeightedGraph:
    """Complete graph on ``q`` vertices, every off-diagonal weight equal to ``w``."""
    if q < 1:
        raise ValueError("vertex count must be positive")
    wf = _as_weight(w)
    if wf <= 0:
        raise ValueError("edge weight must be positive")
    return WeightedGraph([[wf if i != j else Fraction(0) for j in range(q)]
                          for i in range(q)])


def multipartite_graph(q: int, r: int, w: WeightLike = 1) -> WeightedGraph:
    """Complete multipartite graph with ``q`` parts of size ``r`` and weight ``w``.

    Vertices are ``0 .. q*r-1``; part membership is the residue mod ``q``,
    and the weight of ``(i, j)`` is ``w`` exactly when ``i % q != j % q``.
    """
    if q < 1 or r < 1:
        raise ValueError("part count and part size must be positive")
    wf = _as_weight(w)
    if wf <= 0:
        raise ValueError("edge weight must be positive")
    n = q * r
    return WeightedGraph([[wf if i % q != j % q else Fraction(0)
                           for j in range(n)] for i in range(n)])


def path_graph(n: int) -> WeightedGraph:
    """Undirected path on ``n`` vertices with unit weights."""
    if n < 1:
        raise ValueError("vertex count must be positive")
    pairs = {}
    for i in range(n - 1):
        pairs[(i, i + 1)] = 1
        pairs[(i + 1, i)] = 1
    return WeightedGraph.from_weights(n, pairs)


def cycle_graph(n: int) -> WeightedGraph:
    """Undirected cycle on ``n >= 3`` vertices with unit weights."""
    if n < 3:
        raise ValueError("cycle needs at least three vertices")
    pairs = {}
    for i in range(n):
        j = (i + 1) % n
        pairs[(i, j)] = 1
        pairs[(j, i)] = 1
    return WeightedGraph.from_weights(n, pairs)


def kite_graph() -> WeightedGraph:
    """Triangle on ``{0, 1, 2}`` plus a pendant vertex ``3`` attached to ``0``."""
    pairs = {}
    for i, j in [(0, 1), (0, 2), (1, 2), (0, 3)]:
        pairs[(i, j)] = 1
        pairs[(j, i)] = 1
    return WeightedGraph.from_weights(4, pairs)


@dataclass(frozen=True)
class UniformWeightReport:
    """Outcome of the uniform-weight check.

    ``is_uniform`` holds when the weight table is symmetric, zero on the
    diagonal, and takes a single positive value ``w`` on its support.
    ``violations`` lists offending ``((i, j), weight)`` entries.
    """

    is_uniform: bool
    w: Optional[Fraction]
    violations: tuple[tuple[tuple[int, int], Fraction], ...]


def uniform_weight(g: WeightedGraph) -> UniformWeightReport:
    """Check whether all weights lie in ``{0, w}`` for one positive ``w``."""
    n = g.vertex_count
    violations: list[tuple[tuple[int, int], Fraction]] = []
    for i in range(n):
        if g.weight(i, i) != 0:
            violations.append(((i, i), g.weight(i, i)))
    for i in range(n):
        for j in range(i + 1, n):
            if g.weight(i, j) != g.weight(j, i):
                violations.append(((i, j), g.weight(i, j)))
                violations.append(((j, i), g.weight(j, i)))
    w: Optional[Fraction] = None
    for i, j, wij in g.positive_edges():
        if i == j:
            continue
        w = wij
        break
    if w is not None:
        for i, j, wij in g.positive_edges():
            if i != j and wij != w:
                violations.append(((i, j), wij))
    if w is None:
        # all weights zero: no positive uniform value exists
        return UniformWeightReport(False, None, tuple(violations))
    if violations:
        return UniformWeightReport(False, None, tuple(violations))
    return UniformWeightReport(True, w, ())


def has_directed_triangle(g: WeightedGraph) -> Optional[tuple[int, int, int]]:
    """First triple ``(a, b, c)`` with ``w(a,b) w(b,c) w(a,c) > 0``, or ``None``.

    The vertices need not be distinct: a loop yields the degenerate
    triangle ``(i, i, i)``.  The scan is lexicographic, so the witness is
    canonical.
    """
    num = g._num
    for a in range(g.vertex_count):
        row_a = num[a]
        for b in g._out[a]:
            row_b = num[b]
            for c in g._out[b]:
                if row_a[c] > 0:
                    return (a, b, c)
    return None


def is_strongly_connected(g: WeightedGraph) -> bool:
    """True iff every ordered pair is joined by a positive-weight directed path."""
    n = g.vertex_count

    def reaches_all(adj: Sequence[Sequence[int]]) -> bool:
        seen = [False] * n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    stack.append(u)
        return count == n

    return reaches_all(g._out) and reaches_all(g._in)


def _require_symmetric_loopless(g: WeightedGraph, what: str) -> None:
    if not g.is_loopless():
        raise ValueError(f"{what} requires a loopless graph")
    if not g.is_symmetric():
        raise ValueError(f"{what} requires a symmetric graph")


def find_kite(g: WeightedGraph) -> Optional[tuple[int, int, int, int]]:
    """Search for an induced kite ``(a, b, c, d)``.

    ``(a, b, c)`` is a triangle and ``d`` is adjacent to ``a`` but to
    neither ``b`` nor ``c``; all four vertices are distinct.  Returns the
    lexicographically first witness with the triangle listed as
    ``attachment, smaller, larger``, or ``None``.
    """
    _require_symmetric_loopless(g, "kite search")
    n = g.vertex_count
    num = g._num
    for t1 in range(n):
        for t2 in range(t1 + 1, n):
            if num[t1][t2] == 0:
                continue
            for t3 in range(t2 + 1, n):
                if num[t1][t3] == 0 or num[t2][t3] == 0:
                    continue
                for d in range(n):
                    if d in (t1, t2, t3):
                        continue
                    adj = [num[d][t] > 0 for t in (t1, t2, t3)]
                    if sum(adj) == 1:
                        a = (t1, t2, t3)[adj.index(True)]
                        b, c = sorted(set((t1, t2, t3)) - {a})
                        return (a, b, c, d)
    return None


def regularity(g: WeightedGraph) -> Optional[int]:
    """Common out-degree of the positive edge set, or ``None`` if degrees differ."""
    degs = {len(g._out[i]) for i in range(g.vertex_count)}
    if len(degs) == 1:
        return degs.pop()
    return None


def triangles_per_edge(g: WeightedGraph) -> Optional[int]:
    """Common number of triangles through each positive edge, if constant.

    Requires a symmetric loopless graph.  Returns ``None`` when the count
    varies between edges or the graph has no edges at all.
    """
    _require_symmetric_loopless(g, "triangle count")
    n = g.vertex_count
    num = g._num
    counts = set()
    for i in range(n):
        for j in g._out[i]:
            if j <= i:
                continue
            counts.add(sum(1 for v in range(n)
                           if num[i][v] > 0 and num[j][v] > 0))
            if len(counts) > 1:
                return None
    if not counts:
        return None
    return counts.pop()


@dataclass(frozen=True)
class MultipartiteClassification:
    """Result of testing for complete multipartite structure.

    When ``is_complete_multipartite`` holds, ``parts`` lists the vertex
    classes ordered by their smallest member, ``q`` is the number of parts
    and ``r`` the common part size (``None`` when the parts have unequal
    sizes).
    """

    is_complete_multipartite: bool
    parts: Optional[tuple[tuple[int, ...], ...]]
    q: Optional[int]
    r: Optional[int]


def classify_multipartite(g: WeightedGraph) -> MultipartiteClassification:
    """Decide whether non-adjacency is an equivalence relation on the vertices.

    A symmetric loopless graph is complete multipartite exactly when the
    relation "``w(i, j) = 0``" is transitive; the parts are then its
    classes and every cross-class weight is positive.
    """
    _require_symmetric_loopless(g, "multipartite classification")
    n = g.vertex_count
    num = g._num
    non_neighbors = [tuple(j for j in range(n) if num[i][j] == 0) for i in range(n)]
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(n):
        groups.setdefault(non_neighbors[v], []).append(v)
    # transitive iff each vertex's non-neighbor set equals its own group
    for key, members in groups.items():
        if tuple(members) != key:
            return MultipartiteClassification(False, None, None, None)
    parts = tuple(sorted((tuple(m) for m in groups.values()), key=lambda p: p[0]))
    sizes = {len(p) for p in parts}
    r = sizes.pop() if len(sizes) == 1 else None
    return MultipartiteClassification(True, parts, len(parts), r)


def block_projection(g: WeightedGraph, classification: MultipartiteClassification,
                     word: Sequence[int]) -> tuple[int, ...]:
    """Project a word onto part indices of a complete multipartite graph.

    Each symbol is replaced by the index of its part, so the image lives on
    the complete graph with one vertex per part and the same edge weight;
    the projection preserves the weight of every ordered pair.
    """
    if not classification.is_complete_multipartite or classification.parts is None:
        raise ValueError("classification does not describe a complete multipartite graph")
    index = {}
    for p, part in enumerate(classification.parts):
        for v in part:
            index[v] = p
    out = []
    for s in word:
        if s not in index:
            raise ValueError(f"symbol {s!r} outside the vertex set")
        out.append(index[s])
    return tuple(out)


def automorphisms(g: WeightedGraph) -> tuple[tuple[int, ...], ...]:
    """All weight-preserving vertex permutations, as image tuples.

    Backtracking search; intended for the small graphs this package works
    with.  The identity is always included and the result is sorted.
    """
    n = g.vertex_count
    num = g._num
    sig = []
    for i in range(n):
        row = tuple(sorted(num[i]))
        col = tuple(sorted(num[j][i] for j in range(n)))
        sig.append((num[i][i], row, col))
    candidates = [tuple(u for u in range(n) if sig[u] == sig[k]) for k in range(n)]
    results: list[tuple[int, ...]] = []
    assign = [-1] * n
    used = [False] * n

    def extend(k: int) -> None:
        if k == n:
            results.append(tuple(assign))
            return
        for u in candidates[k]:
            if used[u]:
                continue
            ok = True
            for j in range(k):
                v = assign[j]
                if num[k][j] != num[u][v] or num[j][k] != num[v][u]:
                    ok = False
                    break
            if ok:
                assign[k] = u
                used[u] = True
                extend(k + 1)
                used[u] = False
        assign[k] = -1

    extend(0)
    return tuple(sorted(results))


def _weight_str(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}"


def graph_to_json_dict(g: WeightedGraph) -> dict:
    """JSON form: ``{"vertices": n, "weights": [[i, j, "p/q"], ...]}``.

    Only positive weights are listed; omitted pairs default to zero.
    """
    weights = [[i, j, _weight_str(w)] for i, j, w in g.positive_edges()]
    return {"vertices": g.vertex_count, "weights": weights}


def graph_from_json_dict(data: dict) -> WeightedGraph:
    """Parse the JSON graph format, validating indices and exact rationals."""
    if not isinstance(data, dict):
        raise ValueError("graph document must be a JSON object")
    try:
        n = data["vertices"]
        entries = data["weights"]
    except (KeyError, TypeError) as exc:
        raise ValueError("graph document needs 'vertices' and 'weights'") from exc
    if not isinstance(n, int) or n < 1:
        raise ValueError("'vertices' must be a positive integer")
    if not isinstance(entries, list):
        raise ValueError("'weights' must be a list of [i, j, weight] triples")
    pairs: dict[tuple[int, int], Fraction] = {}
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ValueError(f"weight entry {entry!r} is not an [i, j, weight] triple")
        i, j, w = entry
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ValueError(f"weight entry {entry!r} has non-integer vertices")
        if isinstance(w, float):
            raise ValueError(
                f"weight entry {entry!r} uses a float; use an exact 'p/q' string")
        if (i, j) in pairs:
            raise ValueError(f"duplicate weight entry for pair ({i}, {j})")
        pairs[(i, j)] = _as_weight(w)
    return WeightedGraph.from_weights(n, pairs)


def save_graph(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json_dict(g), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_graph(path) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json_dict(json.load(fh))
