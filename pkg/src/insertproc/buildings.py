"""Building counts of words over a weighted graph.

A *building* of a word ``x = x_1 .. x_n`` is an arrival order for its
positions.  As each position arrives it is linked to the nearest already
present position on each side, producing the *constraint graph* of the
building; the building weight is the product of the linked edge weights.
The *building count* ``B(x)`` is the sum of building weights over all
``n!`` arrival orders.  It satisfies a deletion recurrence

    ``B(x) = sum_i  w(x_{i-1}, x_i) * B(x with position i removed) * w(x_i, x_{i+1})``

with missing boundary neighbors contributing factor 1, and it factors as
``B(x) = w(x) * R(x)`` where ``w(x)`` is the product of consecutive-pair
weights and the reduced count ``R`` obeys

    ``R(x) = sum_i  w(x_{i-1}, x_{i+1}) * R(x with position i removed)``

with ``R(empty) = 1`` and the same boundary convention.  Everything here
is exact: weights with common denominator ``D`` are scaled to integers and
the recurrences run over scaled integer values (``B * D^(2n-2)`` and
``R * D^(n-1)`` for words of length ``n``).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterator, Sequence

import numpy as np

from .graphs import WeightedGraph

Word = tuple[int, ...]
BuildOrder = tuple[int, ...]

__all__ = [
    "Word",
    "BuildOrder",
    "ConstraintGraph",
    "word_weight",
    "constraint_graph",
    "building_weight",
    "building_count_bruteforce",
    "building_count",
    "reduced_count",
    "positive_words",
    "constraint_edge_classes",
    "bruteforce_sweep",
    "recurrence_sweep",
]

# Words up to this length are always memoized; longer words are memoized
# only while the per-graph cache stays below the soft cap, which bounds
# memory during large enumeration sweeps.
_ALWAYS_CACHE_LEN = 6
_CACHE_SOFT_CAP = 400_000

_BRUTEFORCE_MAX_LEN = 8


def _as_word(g: WeightedGraph, word: Sequence[int]) -> Word:
    w = tuple(word)
    for s in w:
        if not isinstance(s, int) or not (0 <= s < g.vertex_count):
            raise ValueError(f"symbol {s!r} outside the vertex set")
    return w


def _as_order(order: Sequence[int], n: int) -> BuildOrder:
    o = tuple(order)
    if sorted(o) != list(range(n)):
        raise ValueError(f"arrival order {order!r} is not a permutation of 0..{n - 1}")
    return o


def word_weight(g: WeightedGraph, word: Sequence[int]) -> Fraction:
    """Product of consecutive-pair weights; 1 for words of length <= 1."""
    w = _as_word(g, word)
    out = Fraction(1)
    for a, b in zip(w, w[1:]):
        wa = g.weight(a, b)
        if wa == 0:
            return Fraction(0)
        out *= wa
    return out


@dataclass(frozen=True)
class ConstraintGraph:
    """Edge multiset generated by one build order, in arrival order.

    Each edge is ``(tail_position, head_position, weight)`` with
    ``tail < head``; at most two edges are appended per arrival.
    """

    edges: tuple[tuple[int, int, Fraction], ...]

    def pair_multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((t, h) for t, h, _ in self.edges))

    def total_weight(self) -> Fraction:
        out = Fraction(1)
        for _, _, w in self.edges:
            out *= w
        return out


def constraint_graph(g: WeightedGraph, word: Sequence[int],
                     order: Sequence[int]) -> ConstraintGraph:
    """Constraint graph of the building ``(word, order)``.

    ``order[t]`` is the position (0-based) arriving at time ``t``.  The
    arriving position links to the nearest present position on its left
    and on its right, weighted by the corresponding word symbols.
    """
    w = _as_word(g, word)
    o = _as_order(order, len(w))
    present: list[int] = []
    edges: list[tuple[int, int, Fraction]] = []
    for p in o:
        pos = bisect_left(present, p)
        if pos > 0:
            left = present[pos - 1]
            edges.append((left, p, g.weight(w[left], w[p])))
        if pos < len(present):
            right = present[pos]
            edges.append((p, right, g.weight(w[p], w[right])))
        present.insert(pos, p)
    return ConstraintGraph(tuple(edges))


def building_weight(g: WeightedGraph, word: Sequence[int],
                    order: Sequence[int]) -> Fraction:
    """Product of the constraint-graph edge weights; 1 on the empty multiset."""
    return constraint_graph(g, word, order).total_weight()


def building_count_bruteforce(g: WeightedGraph, word: Sequence[int],
                              max_len: int = _BRUTEFORCE_MAX_LEN) -> Fraction:
    """Building count by direct summation over all arrival orders.

    Exponential-time reference oracle; words longer than ``max_len`` are
    rejected.
    """
    w = _as_word(g, word)
    n = len(w)
    if n > max_len:
        raise ValueError(
            f"word of length {n} exceeds the brute-force bound {max_len}")
    num = g._num
    den = g._den
    total = 0
    max_edges = max(0, 2 * n - 3)
    for order in permutations(range(n)):
        present: list[int] = []
        prod = 1
        edges = 0
        for p in order:
            pos = bisect_left(present, p)
            if pos > 0:
                prod *= num[w[present[pos - 1]]][w[p]]
                edges += 1
            if pos < len(present):
                prod *= num[w[p]][w[present[pos]]]
                edges += 1
            if prod == 0:
                break
            present.insert(pos, p)
        else:
            total += prod * den ** (max_edges - edges)
    return Fraction(total, den ** max_edges)


def _scaled_reduced(g: WeightedGraph, w: Word) -> int:
    """Reduced count scaled by ``D^(len-1)``; exact integer."""
    m = len(w)
    if m <= 1:
        return 1
    cache = g._tcache
    v = cache.get(w)
    if v is not None:
        return v
    den = g._den
    if m == 2:
        v = 2 * den
    else:
        num = g._num
        last = m - 1
        total = _scaled_reduced(g, w[1:]) + _scaled_reduced(g, w[:last])
        total *= den
        for i in range(1, last):
            f = num[w[i - 1]][w[i + 1]]
            if f:
                total += f * _scaled_reduced(g, w[:i] + w[i + 1:])
        v = total
    if m <= _ALWAYS_CACHE_LEN or len(cache) < _CACHE_SOFT_CAP:
        cache[w] = v
    return v


def _scaled_building(g: WeightedGraph, w: Word) -> int:
    """Building count scaled by ``D^(2*len-2)``; exact integer."""
    m = len(w)
    if m <= 1:
        return 1
    cache = g._bcache
    v = cache.get(w)
    if v is not None:
        return v
    num = g._num
    den = g._den
    last = m - 1
    total = 0
    for i in range(m):
        a = den if i == 0 else num[w[i - 1]][w[i]]
        if not a:
            continue
        b = den if i == last else num[w[i]][w[i + 1]]
        if not b:
            continue
        total += a * b * _scaled_building(g, w[:i] + w[i + 1:])
    v = total
    if m <= _ALWAYS_CACHE_LEN or len(cache) < _CACHE_SOFT_CAP:
        cache[w] = v
    return v


def reduced_count(g: WeightedGraph, word: Sequence[int]) -> Fraction:
    """Reduced building count; exact, memoized on subwords per graph."""
    w = _as_word(g, word)
    if len(w) == 0:
        return Fraction(1)
    return Fraction(_scaled_reduced(g, w), g._den ** (len(w) - 1))


def building_count(g: WeightedGraph, word: Sequence[int]) -> Fraction:
    """Building count via the deletion recurrence; exact, memoized per graph."""
    w = _as_word(g, word)
    if len(w) <= 1:
        return Fraction(1)
    return Fraction(_scaled_building(g, w), g._den ** (2 * len(w) - 2))


def positive_words(g: WeightedGraph, n: int) -> Iterator[Word]:
    """All words of length ``n`` with positive word weight, in lexicographic order."""
    if n < 0:
        raise ValueError("word length must be nonnegative")
    if n == 0:
        yield ()
        return
    out = g._out
    word = [0] * n

    def rec(depth: int) -> Iterator[Word]:
        if depth == n:
            yield tuple(word)
            return
        choices = range(g.vertex_count) if depth == 0 else out[word[depth - 1]]
        for v in choices:
            word[depth] = v
            yield from rec(depth + 1)

    yield from rec(0)


@lru_cache(maxsize=None)
def constraint_edge_classes(n: int) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    """Constraint-graph position-pair sets over all arrival orders of length ``n``.

    Returns ``((pairs, count), ...)`` sorted by ``pairs``, where ``count``
    is the number of arrival orders producing exactly that edge set.  Each
    edge set contains every consecutive pair ``(i, i+1)``, and no pair
    repeats, so the sets are genuine sets.
    """
    counter: dict[tuple[tuple[int, int], ...], int] = {}
    for order in permutations(range(n)):
        present: list[int] = []
        edges: list[tuple[int, int]] = []
        for p in order:
            pos = bisect_left(present, p)
            if pos > 0:
                edges.append((present[pos - 1], p))
            if pos < len(present):
                edges.append((p, present[pos]))
            present.insert(pos, p)
        key = tuple(sorted(edges))
        assert len(set(key)) == len(key)
        counter[key] = counter.get(key, 0) + 1
    return tuple(sorted(counter.items()))


def _digit_arrays(q: int, m: int, dtype) -> list[np.ndarray]:
    idx = np.arange(q ** m, dtype=np.int64)
    return [((idx // (q ** (m - 1 - j))) % q).astype(dtype) for j in range(m)]


def _num_array(g: WeightedGraph, dtype) -> np.ndarray:
    if dtype is object:
        arr = np.empty((g.vertex_count, g.vertex_count), dtype=object)
        for i in range(g.vertex_count):
            for j in range(g.vertex_count):
                arr[i, j] = g._num[i][j]
        return arr
    return np.array(g._num, dtype=np.int64)


def _max_factor(g: WeightedGraph) -> int:
    return max(g._den, max(max(row) for row in g._num))


def bruteforce_sweep(g: WeightedGraph, max_len: int) -> dict[int, tuple[np.ndarray, int]]:
    """Building counts of *all* words up to ``max_len``, by summing arrival orders.

    For each length ``m`` returns ``(values, scale)`` where
    ``values[word_index] == B(word) * scale`` as integers and the word
    index is the base-``q`` encoding of the word (most significant symbol
    first).  The sum over arrival orders is organized through
    :func:`constraint_edge_classes`, which keeps this an independent route
    from the deletion recurrence.
    """
    q = g.vertex_count
    den = g._den
    out: dict[int, tuple[np.ndarray, int]] = {}
    for m in range(0, max_len + 1):
        if m <= 1:
            out[m] = (np.ones(q ** m, dtype=np.int64), 1)
            continue
        classes = constraint_edge_classes(m)
        e_max = max(len(pairs) for pairs, _ in classes)
        maxnum = max(_max_factor(g), 1)
        bound = (maxnum ** (m - 1)) * factorial(m) * (maxnum ** max(0, m - 2))
        dtype = np.int64 if bound < 2 ** 62 else object
        digits = _digit_arrays(q, m, np.int64)
        num = _num_array(g, dtype)
        pairval: dict[tuple[int, int], np.ndarray] = {}

        def pv(a: int, b: int) -> np.ndarray:
            key = (a, b)
            if key not in pairval:
                pairval[key] = num[digits[a], digits[b]]
            return pairval[key]

        path_pairs = tuple((i, i + 1) for i in range(m - 1))
        path_prod = pv(0, 1).copy()
        for i in range(1, m - 1):
            path_prod = path_prod * pv(i, i + 1)
        # extras share prefixes; memoize partial products
        extras_prod: dict[tuple[tuple[int, int], ...], np.ndarray] = {
            (): np.ones(q ** m, dtype=dtype)}

        def ep(extras: tuple[tuple[int, int], ...]) -> np.ndarray:
            if extras not in extras_prod:
                extras_prod[extras] = ep(extras[:-1]) * pv(*extras[-1])
            return extras_prod[extras]

        acc = np.zeros(q ** m, dtype=dtype)
        for pairs, count in classes:
            extras = tuple(p for p in pairs if p not in path_pairs)
            assert len(extras) == len(pairs) - len(path_pairs)
            acc = acc + count * (den ** (e_max - len(pairs))) * ep(extras)
        out[m] = (path_prod * acc, den ** e_max)
    return out


def recurrence_sweep(g: WeightedGraph, max_len: int) -> dict[int, tuple[np.ndarray, int]]:
    """Building counts of all words up to ``max_len`` via the deletion recurrence.

    Batched bottom-up form of :func:`building_count`; same indexing and
    scaling conventions as :func:`bruteforce_sweep` (here the scale is
    ``D^(2m-2)``).
    """
    q = g.vertex_count
    den = g._den
    maxf = max(_max_factor(g), 1)
    bound = 1
    for m in range(2, max_len + 1):
        bound = bound * m * maxf * maxf
    dtype = np.int64 if bound < 2 ** 62 else object
    num = _num_array(g, dtype)
    out: dict[int, tuple[np.ndarray, int]] = {
        0: (np.ones(1, dtype=np.int64), 1),
    }
    if max_len >= 1:
        out[1] = (np.ones(q, dtype=np.int64), 1)
    prev = np.ones(q, dtype=dtype)
    for m in range(2, max_len + 1):
        idx = np.arange(q ** m, dtype=np.int64)
        digits = [((idx // (q ** (m - 1 - j))) % q) for j in range(m)]
        acc = np.zeros(q ** m, dtype=dtype)
        for i in range(m):
            hi = idx // (q ** (m - i))
            lo = idx % (q ** (m - 1 - i))
            child = hi * (q ** (m - 1 - i)) + lo
            a = den if i == 0 else num[digits[i - 1], digits[i]]
            b = den if i == m - 1 else num[digits[i], digits[i + 1]]
            acc = acc + a * b * prev[child]
        out[m] = (acc, den ** (2 * m - 2))
        prev = acc
    return out
